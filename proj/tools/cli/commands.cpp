#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pipeline.hpp"
#include "rankcal/assessment.hpp"
#include "rankcal/comparestats.hpp"
#include "rankcal/error.hpp"
#include "rankcal/recalib.hpp"
#include "rankcal/render.hpp"
#include "rankcal/synth.hpp"

namespace rankcal::cli {
namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

// Raised for invalid flag combinations detected after parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalOptions {
  std::vector<std::string> inputs;
  std::string measures = "nll,se,eigv,deg,ecc,verb";
  std::string correctness = "rougeL";
  std::string rouge_variant = "f1";
  std::string metrics = "rce";
  std::size_t bins = assessment::kDefaultBins;
  std::optional<double> tau;
  std::string tau_grid;
  std::size_t bootstrap = stats::kDefaultReplicates;
  std::uint64_t seed = 0;
  double eig_threshold = 0.9;
  double laplacian_eps = 0.0;
  std::string orientation;
  std::size_t jobs = 1;
  std::string out_dir = ".";
};

struct CompareOptions {
  std::vector<std::string> inputs;
  std::string metric = "rce";
  std::optional<double> tau;
  double alpha = 0.05;
  std::string posthoc = "wilcoxon-holm";
  std::string out = "cd.json";
  std::string svg;
};

struct RecalibrateOptions {
  std::vector<std::string> inputs;
  std::string measure = "nll";
  std::string correctness = "rougeL";
  std::string rouge_variant = "f1";
  double split = 0.5;
  std::uint64_t seed = 0;
  std::size_t bins = assessment::kDefaultBins;
  std::string boundaries_from = "cal";
  double eig_threshold = 0.9;
  double laplacian_eps = 0.0;
  std::string orientation;
  std::string out_dir = ".";
};

struct SynthOptions {
  std::string family = "case2";
  double alpha = 0.3;
  double beta = 0.2;
  int k = 0;
  std::size_t n = 200000;
  std::uint64_t seed = 0;
  double noise = 0.0;
  std::string correctness_mode = "expected";
  std::string sampling = "stratified";
  std::string out = "synth.jsonl";
};

struct DiagramOptions {
  std::string type = "indication";
  std::vector<std::string> inputs;
  std::string measures = "nll";
  std::string correctness = "rougeL";
  std::string rouge_variant = "f1";
  std::size_t bins = assessment::kDefaultBins;
  std::string metric = "auroc";
  std::string tau_grid;
  double eig_threshold = 0.9;
  double laplacian_eps = 0.0;
  std::string orientation;
  std::string out = "diagram.svg";
  std::string data;
};

void WriteJson(const std::string& path, const ordered_json& j) {
  render::WriteTextFile(path, j.dump(2) + "\n");
}

ordered_json ReadJson(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  try {
    return ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, path + ": " + e.what());
  }
}

correctness::CorrectnessSpec MakeCorrectness(const std::string& spec, const std::string& variant) {
  auto c = correctness::CorrectnessSpec::Parse(spec);
  c.variant = correctness::ParseRougeVariant(variant);
  return c;
}

measures::MeasureOptions MakeMeasureOptions(const records::Dataset& ds, double eig_threshold,
                                            double eps, const std::string& orientation) {
  measures::MeasureOptions o;
  o.eig_threshold = eig_threshold;
  o.laplacian_eps = eps;
  std::string name = orientation;
  if (name.empty()) {
    auto it = ds.meta.find("orientation");
    name = it == ds.meta.end() ? "uncertainty" : it->second;
  }
  o.stored_orientation = ParseOrientation(name);
  return o;
}

ordered_json CountsJson(const std::map<std::string, std::size_t>& m) {
  ordered_json j = ordered_json::object();
  for (const auto& [k, v] : m) j[k] = v;
  return j;
}

std::string TauLabel(std::optional<double> tau) {
  if (!tau) return "";
  std::ostringstream s;
  s << *tau;
  return s.str();
}

// Parsed run-configuration pieces shared by report-producing commands.
std::vector<std::optional<double>> ThresholdList(const std::optional<double>& tau,
                                                 const std::string& grid) {
  if (tau && !grid.empty()) throw UsageError("--tau and --tau-grid are mutually exclusive");
  if (!grid.empty()) {
    std::vector<std::optional<double>> out;
    for (double t : assessment::ParseTauGrid(grid)) out.emplace_back(t);
    return out;
  }
  return {tau};
}

ordered_json DesignFlags(const correctness::CorrectnessSpec& spec) {
  return {
      {"rouge_variant", correctness::RougeVariantName(spec.variant)},
      {"reference_aggregation", "max"},
      {"text_normalization", "lowercase, strip punctuation, collapse whitespace"},
      {"binning", "equal-mass, type-1 quantiles, stable tie order"},
      {"crc_ties", "exact >=, no tie splitting"},
      {"rce_weighting", "per point"},
      {"semantic_entropy", "normalized-likelihood Monte Carlo"},
      {"ecc", "eigenvectors below threshold, row-centred, Frobenius norm"},
      {"auarc_full_rejection", "last nonempty prefix accuracy"},
      {"auarc_ties", "group-mean accuracy for straddled tie groups"},
      {"auroc", "Mann-Whitney with half credit for ties"},
      {"missing_fields", "measure unavailable for that record"},
  };
}

// ---------------------------------------------------------------- eval

int CmdEval(const EvalOptions& o, std::ostream& out) {
  const auto metric_kinds = assessment::ParseMetricList(o.metrics);
  const auto measure_kinds = measures::ParseMeasureList(o.measures);
  const auto spec = MakeCorrectness(o.correctness, o.rouge_variant);
  const auto taus = ThresholdList(o.tau, o.tau_grid);
  for (auto m : metric_kinds) {
    if (assessment::NeedsThreshold(m) && !taus.front()) {
      throw UsageError(std::string(assessment::MetricKindName(m)) + " needs --tau or --tau-grid");
    }
  }
  if (o.bins < 2) throw UsageError("--bins must be at least 2");
  if (o.bootstrap < 1) throw UsageError("--bootstrap must be at least 1");

  const auto ds = LoadDatasets(o.inputs);
  const auto mopts = MakeMeasureOptions(ds, o.eig_threshold, o.laplacian_eps, o.orientation);
  const auto col = ScoreDataset(ds, spec);

  std::vector<BuiltSeries> built(measure_kinds.size());
  ParallelFor(measure_kinds.size(), o.jobs, [&](std::size_t i) {
    built[i] = BuildSeries(ds, col, measure_kinds[i], mopts);
  });

  struct Cell {
    std::size_t measure;
    assessment::MetricSpec spec;
    ordered_json result;
  };
  std::vector<Cell> cells;
  for (std::size_t m = 0; m < built.size(); ++m) {
    for (auto kind : metric_kinds) {
      if (assessment::NeedsThreshold(kind)) {
        for (const auto& t : taus) cells.push_back({m, {kind, o.bins, t}, {}});
      } else {
        cells.push_back({m, {kind, o.bins, std::nullopt}, {}});
      }
    }
  }

  ParallelFor(cells.size(), o.jobs, [&](std::size_t c) {
    Cell& cell = cells[c];
    const auto& series = built[cell.measure].series;
    const std::string metric_name(assessment::MetricKindName(cell.spec.kind));
    ordered_json r;
    r["metric"] = metric_name;
    r["tau"] = cell.spec.tau ? ordered_json(*cell.spec.tau) : ordered_json(nullptr);
    try {
      const double point = assessment::Evaluate(series, cell.spec).value;
      const auto spec_copy = cell.spec;
      const auto boot = stats::Bootstrap(
          series, [&](const MeasureSeries& s) { return assessment::Evaluate(s, spec_copy).value; },
          metric_name, o.bootstrap, o.seed);
      r["value"] = point;
      r["mean"] = boot.mean;
      r["std"] = boot.std;
      r["formatted"] = stats::FormatMeanStd(boot.mean, boot.std);
      r["replicates"] = boot.replicates;
      r["error"] = nullptr;
    } catch (const Error& e) {
      r["value"] = nullptr;
      r["error"] = std::string(ErrorCodeName(e.code()));
      r["message"] = e.what();
    }
    cell.result = std::move(r);
  });

  ordered_json report;
  report["tool"] = "rankcal";
  report["version"] = kToolVersion;
  report["command"] = "eval";
  report["config"] = {
      {"inputs", o.inputs},        {"measures", o.measures},   {"correctness", spec.ToString()},
      {"metrics", o.metrics},      {"bins", o.bins},           {"tau", o.tau ? ordered_json(*o.tau) : ordered_json(nullptr)},
      {"tau_grid", o.tau_grid},    {"bootstrap", o.bootstrap}, {"seed", o.seed},
      {"eig_threshold", o.eig_threshold}, {"laplacian_eps", o.laplacian_eps},
      {"orientation", std::string(OrientationName(mopts.stored_orientation))},
  };
  report["design"] = DesignFlags(spec);
  report["n_records"] = ds.records.size();
  report["correctness_skipped"] = CountsJson(col.skipped);
  ordered_json measures_json = ordered_json::array();
  std::string csv = "measure,orientation,coverage,metric,tau,value,mean,std,formatted,error\n";
  for (std::size_t m = 0; m < built.size(); ++m) {
    ordered_json mj;
    mj["name"] = built[m].series.name;
    mj["orientation"] = OrientationName(built[m].series.orientation);
    mj["coverage"] = built[m].coverage;
    mj["skipped"] = CountsJson(built[m].skipped);
    mj["metrics"] = ordered_json::array();
    for (const auto& cell : cells) {
      if (cell.measure != m) continue;
      mj["metrics"].push_back(cell.result);
      const auto& r = cell.result;
      std::ostringstream row;
      row.precision(17);
      row << built[m].series.name << ',' << OrientationName(built[m].series.orientation) << ','
          << built[m].coverage << ',' << r["metric"].get<std::string>() << ',' << TauLabel(cell.spec.tau) << ',';
      if (r["value"].is_null()) {
        row << ",,,," << r["error"].get<std::string>();
      } else {
        row << r["value"].get<double>() << ',' << r["mean"].get<double>() << ','
            << r["std"].get<double>() << ',' << r["formatted"].get<std::string>() << ',';
      }
      csv += row.str() + "\n";
    }
    measures_json.push_back(std::move(mj));
  }
  report["measures"] = std::move(measures_json);
  ordered_json warnings = ordered_json::array();
  for (const auto& w : ds.warnings) warnings.push_back(w);
  for (const auto& w : col.warnings) warnings.push_back(w);
  report["warnings"] = std::move(warnings);

  fs::create_directories(o.out_dir);
  const auto json_path = (fs::path(o.out_dir) / "report.json").string();
  const auto csv_path = (fs::path(o.out_dir) / "report.csv").string();
  WriteJson(json_path, report);
  render::WriteTextFile(csv_path, csv);
  out << "wrote " << json_path << " and " << csv_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- compare

int CmdCompare(const CompareOptions& o, std::ostream& out) {
  const auto metric = assessment::ParseMetricKind(o.metric);
  const auto posthoc = stats::ParsePostHoc(o.posthoc);
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) throw UsageError("--alpha must lie in (0, 1)");

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> stems;
  for (std::size_t r = 0; r < o.inputs.size(); ++r) {
    const auto report = ReadJson(o.inputs[r]);
    if (!report.contains("measures")) {
      throw Error(ErrorCode::kSchemaViolation, o.inputs[r] + ": not an eval report");
    }
    for (const auto& m : report["measures"]) {
      for (const auto& cell : m["metrics"]) {
        if (cell["metric"] != o.metric) continue;
        if (o.tau && (cell["tau"].is_null() || std::abs(cell["tau"].get<double>() - *o.tau) > 1e-12)) continue;
        if (cell["value"].is_null()) continue;
        names.push_back(m["name"].get<std::string>());
        stems.push_back(fs::path(o.inputs[r]).stem().string() + "#" + std::to_string(r + 1));
        columns.push_back(cell["replicates"].get<std::vector<double>>());
        break;
      }
    }
  }
  if (columns.size() < 2) {
    throw Error(ErrorCode::kTooFewPoints, "compare needs at least two measures with '" + o.metric + "' results");
  }
  const std::size_t trials = columns.front().size();
  for (const auto& c : columns) {
    if (c.size() != trials) {
      throw Error(ErrorCode::kMismatchedTrials, "reports disagree on the number of bootstrap trials");
    }
  }
  const auto original = names;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (std::count(original.begin(), original.end(), original[i]) > 1) names[i] = stems[i] + ":" + names[i];
  }
  std::vector<std::vector<double>> table(trials, std::vector<double>(columns.size()));
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t m = 0; m < columns.size(); ++m) table[t][m] = columns[m][t];
  }
  const auto cd = stats::CdDiagram(table, names, o.alpha, posthoc, !assessment::LowerIsBetter(metric));

  ordered_json j;
  j["tool"] = "rankcal";
  j["version"] = kToolVersion;
  j["command"] = "compare";
  j["config"] = {{"inputs", o.inputs}, {"metric", o.metric},
                 {"tau", o.tau ? ordered_json(*o.tau) : ordered_json(nullptr)},
                 {"alpha", o.alpha}, {"posthoc", o.posthoc}};
  j["trials"] = trials;
  j["measures"] = cd.measures;
  j["average_ranks"] = cd.average_ranks;
  j["friedman"] = {{"statistic", cd.friedman_statistic}, {"p_value", cd.friedman_p}};
  j["p_values"] = cd.p_values;
  j["significant"] = cd.significant;
  j["critical_difference"] = cd.critical_difference;
  ordered_json cliques = ordered_json::array();
  for (const auto& c : cd.cliques) {
    ordered_json names_json = ordered_json::array();
    for (std::size_t i : c) names_json.push_back(cd.measures[i]);
    cliques.push_back(names_json);
  }
  j["cliques"] = cliques;
  WriteJson(o.out, j);
  const std::string svg_path =
      o.svg.empty() ? (fs::path(o.out).replace_extension(".svg")).string() : o.svg;
  render::WriteTextFile(svg_path, render::RenderCdDiagramSvg(cd));
  out << "wrote " << o.out << " and " << svg_path << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- recalibrate

int CmdRecalibrate(const RecalibrateOptions& o, std::ostream& out) {
  const auto kind = measures::ParseMeasureKind(o.measure);
  const auto spec = MakeCorrectness(o.correctness, o.rouge_variant);
  if (o.boundaries_from != "cal" && o.boundaries_from != "test") {
    throw UsageError("--boundaries-from must be 'cal' or 'test'");
  }
  const auto ds = LoadDatasets(o.inputs);
  const auto mopts = MakeMeasureOptions(ds, o.eig_threshold, o.laplacian_eps, o.orientation);
  const auto built = BuildSeries(ds, ScoreDataset(ds, spec), kind, mopts);
  const auto [cal, test] = recalib::SplitSeries(built.series, o.split, o.seed);
  const auto map = o.boundaries_from == "cal" ? recalib::Fit(cal, o.bins)
                                              : recalib::FitWithBoundaries(cal, test, o.bins);
  const auto recalibrated = recalib::Apply(map, test);
  const double before = assessment::EmpiricalRce(test, o.bins).value;
  const double after = assessment::EmpiricalRce(recalibrated, o.bins).value;

  ordered_json j;
  j["tool"] = "rankcal";
  j["version"] = kToolVersion;
  j["command"] = "recalibrate";
  j["config"] = {{"inputs", o.inputs}, {"measure", o.measure}, {"correctness", spec.ToString()},
                 {"split", o.split}, {"seed", o.seed}, {"bins", o.bins},
                 {"boundaries_from", o.boundaries_from}};
  j["design"] = DesignFlags(spec);
  j["coverage"] = built.coverage;
  j["calibration_size"] = cal.size();
  j["test_size"] = test.size();
  j["rce_test_before"] = before;
  j["rce_test_after"] = after;
  j["map"] = {{"boundaries", map.boundaries}, {"values", map.values}};
  fs::create_directories(o.out_dir);
  const auto json_path = (fs::path(o.out_dir) / "recalibration.json").string();
  const auto csv_path = (fs::path(o.out_dir) / "recalibration.csv").string();
  WriteJson(json_path, j);
  std::ostringstream csv;
  csv.precision(17);
  csv << "bin,lower,upper,value\n";
  for (std::size_t b = 0; b < map.bins(); ++b) {
    csv << b + 1 << ',' << map.boundaries[b] << ',' << map.boundaries[b + 1] << ',' << map.values[b] << '\n';
  }
  render::WriteTextFile(csv_path, csv.str());
  out << "rce before " << before << ", after " << after << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- synth

int CmdSynth(const SynthOptions& o, std::ostream& out) {
  synth::SyntheticSpec spec;
  spec.family = synth::ParseFamily(o.family);
  spec.alpha = o.alpha;
  spec.beta = o.beta;
  spec.n = o.n;
  spec.seed = o.seed;
  spec.noise = o.noise;
  spec.correctness = synth::ParseCorrectnessMode(o.correctness_mode);
  spec.sampling = synth::ParseSampling(o.sampling);
  spec.k = o.k;
  if (spec.family == synth::Family::kCase2Discrete && spec.k == 0 && spec.alpha < 0.5) {
    spec.k = synth::MinimumFeasibleK(spec.alpha);
  }
  const auto data = synth::Generate(spec);
  records::WriteJsonlFile(synth::ToDataset(data), o.out);
  out << "wrote " << data.series.size() << " records to " << o.out << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- diagram

int CmdDiagram(const DiagramOptions& o, std::ostream& out) {
  const auto spec = MakeCorrectness(o.correctness, o.rouge_variant);
  const auto kinds = measures::ParseMeasureList(o.measures);
  if (o.type != "sweep" && kinds.size() != 1) {
    throw UsageError("--type " + o.type + " takes exactly one measure");
  }
  if (o.type == "sweep" && o.tau_grid.empty()) throw UsageError("--type sweep needs --tau-grid");
  const auto ds = LoadDatasets(o.inputs);
  const auto mopts = MakeMeasureOptions(ds, o.eig_threshold, o.laplacian_eps, o.orientation);
  const auto col = ScoreDataset(ds, spec);

  std::string svg;
  std::string csv;
  if (o.type == "indication") {
    const auto d = render::IndicationDiagram(BuildSeries(ds, col, kinds[0], mopts).series, o.bins);
    svg = render::RenderIndicationSvg(d);
    csv = render::IndicationCsv(d);
  } else if (o.type == "reliability") {
    const auto d = render::ReliabilityDiagram(BuildSeries(ds, col, kinds[0], mopts).series, o.bins);
    svg = render::RenderReliabilitySvg(d);
    csv = render::ReliabilityCsv(d);
  } else if (o.type == "sweep") {
    const auto metric = assessment::ParseMetricKind(o.metric);
    const auto grid = assessment::ParseTauGrid(o.tau_grid);
    std::vector<render::SweepCurve> curves;
    for (auto kind : kinds) {
      const auto built = BuildSeries(ds, col, kind, mopts);
      curves.push_back({built.series.name, assessment::ThresholdSweep(built.series, metric, grid)});
    }
    const auto d = render::SweepPlot(o.metric, std::move(curves));
    svg = render::RenderSweepSvg(d);
    csv = render::SweepCsv(d);
  } else {
    throw UsageError("--type must be indication, reliability or sweep");
  }
  render::WriteTextFile(o.out, svg);
  const std::string data_path =
      o.data.empty() ? (fs::path(o.out).replace_extension(".csv")).string() : o.data;
  render::WriteTextFile(data_path, csv);
  out << "wrote " << o.out << " and " << data_path << "\n";
  return kExitOk;
}

void AddCorrectnessFlags(CLI::App* sub, std::string& spec, std::string& variant) {
  sub->add_option("--correctness", spec, "rougeL | rouge1 | exact | pre:<name>")->capture_default_str();
  sub->add_option("--rouge-variant", variant, "f1 | recall")->capture_default_str();
}

void AddMeasureOptionFlags(CLI::App* sub, double& eig, double& eps, std::string& orientation) {
  sub->add_option("--eig-threshold", eig, "eigenvalue cut for the eccentricity embedding")->capture_default_str();
  sub->add_option("--laplacian-eps", eps, "add eps*I to the affinity before normalizing")->capture_default_str();
  sub->add_option("--orientation", orientation, "orientation of the 'value' measure (default: dataset meta)");
}

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rank-calibration assessment of LM uncertainty and confidence measures", "rankcal"};
  app.set_config("--config", "", "TOML/INI run file mirroring the command-line flags");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  EvalOptions eval;
  auto* e = app.add_subcommand("eval", "compute measures and assess them");
  e->add_option("--input,-i", eval.inputs, "records JSONL file(s)")->required()->check(CLI::ExistingFile);
  e->add_option("--measures", eval.measures, "comma-separated measure list")->capture_default_str();
  AddCorrectnessFlags(e, eval.correctness, eval.rouge_variant);
  e->add_option("--metrics", eval.metrics, "rce,ece,auroc,auprc+,auprc-,auarc")->capture_default_str();
  e->add_option("--bins", eval.bins, "equal-mass bins")->capture_default_str();
  e->add_option("--tau", eval.tau, "correctness threshold for legacy metrics");
  e->add_option("--tau-grid", eval.tau_grid, "threshold grid a:b:step");
  e->add_option("--bootstrap", eval.bootstrap, "bootstrap replicates")->capture_default_str();
  e->add_option("--seed", eval.seed, "bootstrap seed")->envname("RANKCAL_SEED")->capture_default_str();
  AddMeasureOptionFlags(e, eval.eig_threshold, eval.laplacian_eps, eval.orientation);
  e->add_option("--jobs", eval.jobs, "worker threads")->capture_default_str();
  e->add_option("--out,-o", eval.out_dir, "output directory")->capture_default_str();

  CompareOptions cmp;
  auto* c = app.add_subcommand("compare", "critical-difference comparison of eval reports");
  c->add_option("--inputs", cmp.inputs, "eval report JSON files")->required()->check(CLI::ExistingFile);
  c->add_option("--metric", cmp.metric, "metric to compare")->capture_default_str();
  c->add_option("--tau", cmp.tau, "select the cell at this threshold");
  c->add_option("--alpha", cmp.alpha, "significance level")->capture_default_str();
  c->add_option("--posthoc", cmp.posthoc, "wilcoxon-holm | nemenyi")->capture_default_str();
  c->add_option("--out,-o", cmp.out, "output JSON")->capture_default_str();
  c->add_option("--svg", cmp.svg, "output SVG (default: next to --out)");

  RecalibrateOptions rec;
  auto* r = app.add_subcommand("recalibrate", "histogram-binning recalibration on a random split");
  r->add_option("--input,-i", rec.inputs, "records JSONL file(s)")->required()->check(CLI::ExistingFile);
  r->add_option("--measure", rec.measure, "measure to recalibrate")->capture_default_str();
  AddCorrectnessFlags(r, rec.correctness, rec.rouge_variant);
  r->add_option("--split", rec.split, "calibration fraction")->capture_default_str();
  r->add_option("--seed", rec.seed, "split seed")->envname("RANKCAL_SEED")->capture_default_str();
  r->add_option("--bins", rec.bins, "histogram bins")->capture_default_str();
  r->add_option("--boundaries-from", rec.boundaries_from, "cal | test")->capture_default_str();
  AddMeasureOptionFlags(r, rec.eig_threshold, rec.laplacian_eps, rec.orientation);
  r->add_option("--out,-o", rec.out_dir, "output directory")->capture_default_str();

  SynthOptions syn;
  auto* s = app.add_subcommand("synth", "generate synthetic data with known RCE/ECE");
  s->add_option("--family", syn.family,
                "case1 | case2 | rank_calibrated | anti_calibrated | uninformative")->capture_default_str();
  s->add_option("--alpha", syn.alpha, "target RCE (case2)")->capture_default_str();
  s->add_option("--beta", syn.beta, "target ECE (case1, case2)")->capture_default_str();
  s->add_option("--k", syn.k, "support size for case2 (0 = smallest feasible)")->capture_default_str();
  s->add_option("--n", syn.n, "sample count")->capture_default_str();
  s->add_option("--seed", syn.seed, "generator seed")->envname("RANKCAL_SEED")->capture_default_str();
  s->add_option("--noise", syn.noise, "uniform correctness noise (monotone families)")->capture_default_str();
  s->add_option("--correctness-mode", syn.correctness_mode, "expected | bernoulli")->capture_default_str();
  s->add_option("--sampling", syn.sampling, "stratified | iid (case2)")->capture_default_str();
  s->add_option("--out,-o", syn.out, "output JSONL")->capture_default_str();

  DiagramOptions dia;
  auto* d = app.add_subcommand("diagram", "indication, reliability or threshold-sweep diagram");
  d->add_option("--type", dia.type, "indication | reliability | sweep")->capture_default_str();
  d->add_option("--input,-i", dia.inputs, "records JSONL file(s)")->required()->check(CLI::ExistingFile);
  d->add_option("--measures,--measure", dia.measures, "measure (several for sweep)")->capture_default_str();
  AddCorrectnessFlags(d, dia.correctness, dia.rouge_variant);
  d->add_option("--bins", dia.bins, "equal-mass bins")->capture_default_str();
  d->add_option("--metric", dia.metric, "sweep metric")->capture_default_str();
  d->add_option("--tau-grid", dia.tau_grid, "sweep grid a:b:step");
  AddMeasureOptionFlags(d, dia.eig_threshold, dia.laplacian_eps, dia.orientation);
  d->add_option("--out,-o", dia.out, "output SVG")->capture_default_str();
  d->add_option("--data", dia.data, "output CSV (default: next to --out)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    err << "usage error: " << ex.what() << "\n" << "run 'rankcal --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(e)) return CmdEval(eval, out);
    if (app.got_subcommand(c)) return CmdCompare(cmp, out);
    if (app.got_subcommand(r)) return CmdRecalibrate(rec, out);
    if (app.got_subcommand(s)) return CmdSynth(syn, out);
    if (app.got_subcommand(d)) return CmdDiagram(dia, out);
  } catch (const UsageError& ex) {
    err << "usage error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const Error& ex) {
    // Unknown names in list flags are usage errors, not data errors.
    if (ex.code() == ErrorCode::kInvalidArgument) {
      err << "usage error: " << ex.what() << "\n";
      return kExitUsage;
    }
    err << ordered_json{{"error", ErrorCodeName(ex.code())}, {"message", ex.what()}}.dump() << "\n";
    return kExitFailure;
  } catch (const std::exception& ex) {
    err << ordered_json{{"error", "Internal"}, {"message", ex.what()}}.dump() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

int Run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return Run(args, out, err);
}

}  // namespace rankcal::cli
