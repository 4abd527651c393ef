// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cli/commands.hpp"
#include "rankcal/assessment.hpp"
#include "rankcal/comparestats.hpp"
#include "rankcal/measures.hpp"
#include "rankcal/random.hpp"
#include "rankcal/recalib.hpp"
#include "rankcal/render.hpp"
#include "rankcal/synth.hpp"

namespace {

using namespace rankcal;
namespace fs = std::filesystem;

struct Verdict {
  bool pass = true;
  std::string detail;
};

void Note(Verdict& v, bool ok, const std::string& text) {
  v.pass = v.pass && ok;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += text + (ok ? "" : " [x]");
}

std::string Fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Verdict Criterion1() {
  Verdict v;
  struct Case {
    double alpha, beta;
    int k;
  };
  for (const Case c : {Case{0.3, 0.2, 5}, Case{0.45, 0.1, 11}, Case{0.1, 0.4, 3}}) {
    const auto start = std::chrono::steady_clock::now();
    const auto d = synth::GenerateCase2(c.alpha, c.beta, c.k, 200000, 1);
    const double rce = assessment::EmpiricalRce(d.series, 20).value;
    const double ece = assessment::Ece(d.series, 20).value;
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = std::abs(rce - c.alpha) <= 0.02 && std::abs(ece - c.beta) <= 0.01 && secs < 10.0;
    Note(v, ok,
         Fmt("(a=%.2f", c.alpha) + Fmt(",b=%.2f", c.beta) + ",K=" + std::to_string(c.k) + Fmt(") rce=%.4f", rce) +
             Fmt(" ece=%.4f", ece) + Fmt(" %.2fs", secs));
  }
  return v;
}

Verdict Criterion2() {
  Verdict v;
  synth::SyntheticSpec spec;
  spec.family = synth::Family::kUninformative;
  spec.n = 20000;
  spec.seed = 2;
  const auto d = synth::Generate(spec);
  const double rce = assessment::EmpiricalRce(d.series, 20).value;
  Note(v, std::abs(rce - 0.5) <= 0.01, Fmt("rce=%.6f", rce));
  return v;
}

Verdict Criterion3() {
  Verdict v;
  for (std::size_t n : {20u, 21u, 57u, 1000u, 20000u}) {
    const auto d = synth::GenerateMonotone(synth::RegShape::kDecreasing, 0.0, n, n);
    auto sorted = d.series.values;
    std::sort(sorted.begin(), sorted.end());
    const bool distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
    const double rce = assessment::EmpiricalRce(d.series, 20).value;
    Note(v, distinct && rce == 0.0, "n=" + std::to_string(n) + Fmt(" rce=%g", rce));
  }
  return v;
}

Verdict Criterion4() {
  Verdict v;
  Rng rng(4);
  const std::vector<std::pair<std::string, std::function<double(double)>>> transforms{
      {"exp", [](double x) { return std::exp(x); }},
      {"x1000", [](double x) { return 1000.0 * x; }},
      {"cube", [](double x) { return x * x * x; }}};
  std::size_t mismatches = 0;
  for (int t = 0; t < 100; ++t) {
    MeasureSeries s;
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.Uniform(-3.0, 3.0);
      const double reg = 1.0 / (1.0 + std::exp(2.0 * u));
      s.push_back(u, rng.Bernoulli(reg) ? 1.0 : rng.Uniform(0.0, 0.4));
    }
    auto metrics = [](const MeasureSeries& x) {
      return std::vector<double>{
          assessment::EmpiricalRce(x, 20).value, assessment::Auroc(x, 0.5).value,
          assessment::Auprc(x, 0.5, assessment::Polarity::kPositive).value,
          assessment::Auprc(x, 0.5, assessment::Polarity::kNegative).value, assessment::Auarc(x, 0.5).value};
    };
    const auto base = metrics(s);
    for (const auto& [name, h] : transforms) {
      auto hs = s;
      for (double& x : hs.values) x = h(x);
      if (metrics(hs) != base) ++mismatches;
    }
  }
  Note(v, mismatches == 0, "300 transformed series, " + std::to_string(mismatches) + " mismatches");
  MeasureSeries c;
  c.orientation = Orientation::kConfidence;
  for (double x : {0.2, 0.4, 0.6, 0.8}) c.push_back(x, x > 0.5 ? 1.0 : 0.0);
  auto cubed = c;
  for (double& x : cubed.values) x = x * x * x;
  const double e0 = assessment::Ece(c, 2).value;
  const double e1 = assessment::Ece(cubed, 2).value;
  Note(v, e0 != e1, Fmt("ece witness %.3f", e0) + Fmt(" -> %.3f", e1));
  return v;
}

double ExhaustiveRce(const std::vector<double>& u, const std::vector<double>& a, bool confidence) {
  const std::size_t n = u.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double reg = 0.0, val = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      reg += a[j] >= a[i];
      val += confidence ? u[j] >= u[i] : u[j] <= u[i];
    }
    total += std::abs(reg - val) / static_cast<double>(n - 1);
  }
  return total / static_cast<double>(n);
}

double PairAuroc(const std::vector<double>& u, const std::vector<double>& a) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (a[i] < 0.5) continue;
    for (std::size_t j = 0; j < u.size(); ++j) {
      if (a[j] >= 0.5) continue;
      num += u[i] < u[j] ? 1.0 : u[i] == u[j] ? 0.5 : 0.0;
      den += 1.0;
    }
  }
  return num / den;
}

Verdict Criterion5() {
  Verdict v;
  std::size_t cases = 0, rce_bad = 0, auroc_bad = 0;
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t ones = 0; ones <= n; ++ones) {
      std::vector<double> a(n, 0.0);
      std::fill(a.begin(), a.begin() + static_cast<long>(ones), 1.0);
      std::vector<double> u(n);
      std::iota(u.begin(), u.end(), 1.0);
      do {
        ++cases;
        for (auto o : {Orientation::kUncertainty, Orientation::kConfidence}) {
          MeasureSeries s{"p", o, u, a};
          const double got = assessment::EmpiricalRce(s, n).value;
          if (std::abs(got - ExhaustiveRce(u, a, o == Orientation::kConfidence)) > 1e-12) ++rce_bad;
        }
        if (ones > 0 && ones < n) {
          MeasureSeries s{"p", Orientation::kUncertainty, u, a};
          if (std::abs(assessment::Auroc(s, 0.5).value - PairAuroc(u, a)) > 1e-12) ++auroc_bad;
        }
      } while (std::next_permutation(u.begin(), u.end()));
    }
  }
  Note(v, rce_bad == 0, std::to_string(cases) + " instances, rce mismatches " + std::to_string(rce_bad));
  Note(v, auroc_bad == 0, "auroc mismatches " + std::to_string(auroc_bad));
  return v;
}

std::size_t Components(const records::Matrix& w) {
  const std::size_t k = w.size();
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (w[i][j] > 0) parent[find(i)] = find(j);
  std::size_t count = 0;
  for (std::size_t i = 0; i < k; ++i) count += find(i) == i;
  return count;
}

Verdict Criterion6() {
  Verdict v;
  Rng rng(6);
  std::size_t nullity_bad = 0, eigv_bad = 0, range_bad = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t k = 1 + rng.Index(10);
    const double density = rng.Uniform(0.0, 0.7);
    records::Matrix w(k, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
      w[i][i] = 1.0;
      for (std::size_t j = i + 1; j < k; ++j) w[i][j] = w[j][i] = rng.Bernoulli(density) ? 1.0 : 0.0;
    }
    const auto s = measures::SpectralDecompose(w);
    const std::size_t comps = Components(w);
    const auto zeros = static_cast<std::size_t>(
        std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [](double l) { return l < 1e-6; }));
    nullity_bad += zeros != comps;
    eigv_bad += measures::EigenvalueSum(s).value < static_cast<double>(comps) - 1e-6;
    for (double l : s.eigenvalues) range_bad += l < -1e-8 || l > 2.0 + 1e-8;
  }
  Note(v, nullity_bad == 0, "nullity mismatches " + std::to_string(nullity_bad) + "/200");
  Note(v, eigv_bad == 0, "eigv below components " + std::to_string(eigv_bad));
  Note(v, range_bad == 0, "eigenvalues outside [0,2] " + std::to_string(range_bad));
  double deg_max = 0.0;
  for (std::size_t k = 1; k <= 10; ++k) {
    deg_max = std::max(deg_max, std::abs(measures::DegreeUncertainty(records::Matrix(k, std::vector<double>(k, 1.0))).value));
  }
  Note(v, deg_max == 0.0, Fmt("deg(all-ones) max %g", deg_max));
  return v;
}

std::function<double(double)> RandomShape(Rng& rng, int kind) {
  if (kind == 0) {
    std::vector<double> levels(5);
    for (double& l : levels) l = rng.Uniform(0.05, 0.95);
    return [levels](double u) {
      const double x = u * 4.0;
      const auto i = std::min<std::size_t>(3, static_cast<std::size_t>(x));
      return levels[i] + (levels[i + 1] - levels[i]) * (x - static_cast<double>(i));
    };
  }
  if (kind == 1) {
    const double amp = rng.Uniform(0.2, 0.45), f = rng.Uniform(0.5, 2.0), phase = rng.Uniform(0.0, 2.0 * M_PI);
    return [=](double u) { return 0.5 + amp * std::sin(2.0 * M_PI * f * u + phase); };
  }
  const double slope = rng.Uniform(2.0, 8.0) * (rng.Bernoulli(0.5) ? 1.0 : -1.0);
  return [=](double u) { return 1.0 / (1.0 + std::exp(-slope * (u - 0.5))); };
}

Verdict Criterion7() {
  Verdict v;
  Rng rng(7);
  std::vector<double> improvements;
  std::size_t worse = 0;
  for (int shape = 0; shape < 20; ++shape) {
    const auto reg = RandomShape(rng, shape % 3);
    MeasureSeries s;
    for (int i = 0; i < 100000; ++i) {
      const double u = rng.Uniform();
      s.push_back(u, rng.Bernoulli(reg(u)) ? 1.0 : 0.0);
    }
    const auto [cal, test] = recalib::SplitSeries(s, 0.5, 100 + shape);
    const double before = assessment::EmpiricalRce(test, 20).value;
    const double after = assessment::EmpiricalRce(recalib::Apply(recalib::Fit(cal, 20), test), 20).value;
    worse += after > before + 0.02;
    improvements.push_back(before - after);
  }
  std::sort(improvements.begin(), improvements.end());
  const double median = (improvements[9] + improvements[10]) / 2.0;
  Note(v, worse == 0, "shapes worse by >0.02: " + std::to_string(worse) + "/20");
  Note(v, median > 0.0, Fmt("median improvement %.4f", median));
  return v;
}

Verdict Criterion8() {
  Verdict v;
  Rng rng(8);
  MeasureSeries low{"floor", Orientation::kUncertainty, {}, {}};
  MeasureSeries high{"ceiling", Orientation::kUncertainty, {}, {}};
  for (int i = 0; i < 5000; ++i) {
    const double a = rng.Uniform();
    low.push_back(-std::min(a, 0.5) + rng.Uniform(-0.01, 0.01), a);
    high.push_back(-std::max(a, 0.5) + rng.Uniform(-0.01, 0.01), a);
  }
  const auto grid = assessment::ParseTauGrid("0.1:0.9:0.1");
  const auto data = render::SweepPlot(
      "auroc", {{low.name, assessment::ThresholdSweep(low, assessment::MetricKind::kAuroc, grid)},
                {high.name, assessment::ThresholdSweep(high, assessment::MetricKind::kAuroc, grid)}});
  // Read the crossing back from the emitted CSV.
  std::map<std::string, std::map<double, double>> curve;
  std::istringstream in(render::SweepCsv(data));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("measure,", 0) == 0) continue;
    std::stringstream row(line);
    std::string name, tau, value;
    std::getline(row, name, ',');
    std::getline(row, tau, ',');
    std::getline(row, value, ',');
    if (!value.empty()) curve[name][std::stod(tau)] = std::stod(value);
  }
  int sign_low = 0, sign_high = 0;
  double gap_low = 0.0, gap_high = 0.0;
  for (const auto& [tau, a] : curve["floor"]) {
    const double diff = a - curve["ceiling"].at(tau);
    if (tau < 0.35) { gap_low = std::max(gap_low, diff); sign_low += diff > 0 ? 1 : -1; }
    if (tau > 0.65) { gap_high = std::max(gap_high, -diff); sign_high += diff < 0 ? 1 : -1; }
  }
  Note(v, sign_low == 3 && gap_low > 0.1, Fmt("low tau: floor ahead by up to %.3f", gap_low));
  Note(v, sign_high == 3 && gap_high > 0.1, Fmt("high tau: ceiling ahead by up to %.3f", gap_high));
  return v;
}

Verdict Criterion9() {
  Verdict v;
  const auto w = stats::WilcoxonSignedRank({2, 3, 4, 5, 6, 7}, {1, 1, 1, 1, 1, 1});
  Note(v, w.exact && w.p_greater == 1.0 / 64.0, Fmt("wilcoxon p=%.6f", w.p_greater));
  std::vector<std::vector<double>> same(12, std::vector<double>(4));
  for (std::size_t t = 0; t < same.size(); ++t) std::fill(same[t].begin(), same[t].end(), 0.01 * t);
  const auto fr = stats::Friedman(same);
  Note(v, fr.p_value == 1.0, Fmt("friedman p=%.3f", fr.p_value));
  Rng rng(9);
  std::vector<std::vector<double>> table(20, std::vector<double>(6));
  for (auto& row : table)
    for (std::size_t m = 0; m < row.size(); ++m) row[m] = std::round(rng.Uniform(0.0, 0.2 + 0.1 * m) * 20.0) / 20.0;
  bool sums_ok = true;
  for (const auto& row : table) {
    const auto r = stats::RankRow(row);
    sums_ok = sums_ok && std::abs(std::accumulate(r.begin(), r.end(), 0.0) - 21.0) < 1e-12;
  }
  const auto cd = stats::CdDiagram(table, {"a", "b", "c", "d", "e", "f"});
  const double avg_sum = std::accumulate(cd.average_ranks.begin(), cd.average_ranks.end(), 0.0);
  Note(v, sums_ok && std::abs(avg_sum - 21.0) < 1e-9, Fmt("rank sums per trial 21, average ranks sum %.6f", avg_sum));
  return v;
}

Verdict Criterion10() {
  Verdict v;
  Rng rng(10);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    MeasureSeries s;
    s.orientation = rng.Bernoulli(0.5) ? Orientation::kConfidence : Orientation::kUncertainty;
    const std::size_t n = 40 + rng.Index(5000);
    const double wobble = rng.Uniform(1.0, 8.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.Uniform();
      s.push_back(u, std::clamp(0.5 + 0.4 * std::sin(wobble * u) + rng.Uniform(-0.3, 0.3), 0.0, 1.0));
    }
    const std::size_t b = 2 + rng.Index(39);
    worst = std::max(worst, std::abs(render::IndicationDiagram(s, b).ShadedArea() -
                                     assessment::EmpiricalRce(s, b).value));
  }
  Note(v, worst <= 1e-9, Fmt("max |area - rce| = %.3g", worst));
  return v;
}

std::map<std::string, std::string> RunPipeline(const fs::path& dir) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto p = [&](const std::string& name) { return (dir / name).string(); };
  const std::vector<std::vector<std::string>> steps{
      {"synth", "--family", "case2", "--alpha", "0.3", "--beta", "0.2", "--k", "5", "--n", "5000", "--seed", "11",
       "--correctness-mode", "bernoulli", "--out", p("data.jsonl")},
      {"eval", "-i", p("data.jsonl"), "--measures", "value", "--correctness", "pre:synthetic", "--metrics",
       "rce,ece,auroc,auprc+,auprc-,auarc", "--tau", "0.5", "--seed", "11", "--jobs", "2", "--out", p("eval_a")},
      {"eval", "-i", p("data.jsonl"), "--measures", "value", "--correctness", "pre:synthetic", "--metrics", "rce",
       "--seed", "12", "--out", p("eval_b")},
      {"compare", "--inputs", p("eval_a/report.json"), p("eval_b/report.json"), "--out", p("cd.json")},
      {"recalibrate", "-i", p("data.jsonl"), "--measure", "value", "--correctness", "pre:synthetic", "--seed", "11",
       "--out", p("recal")},
      {"diagram", "--type", "indication", "-i", p("data.jsonl"), "--measure", "value", "--correctness",
       "pre:synthetic", "--out", p("indication.svg")},
      {"diagram", "--type", "reliability", "-i", p("data.jsonl"), "--measure", "value", "--correctness",
       "pre:synthetic", "--out", p("reliability.svg")},
      {"diagram", "--type", "sweep", "-i", p("data.jsonl"), "--measure", "value", "--correctness", "pre:synthetic",
       "--tau-grid", "0.1:0.9:0.1", "--out", p("sweep.svg")},
  };
  for (const auto& args : steps) {
    std::ostringstream out, err;
    if (cli::Run(args, out, err) != 0) throw std::runtime_error(args[0] + " failed: " + err.str());
  }
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    files[fs::relative(entry.path(), dir).string()] = ss.str();
  }
  return files;
}

Verdict Criterion11() {
  Verdict v;
  const auto root = fs::temp_directory_path() / "rankcal_acceptance";
  try {
    // Same paths both times: reports record their inputs.
    const auto a = RunPipeline(root / "run");
    const auto b = RunPipeline(root / "run");
    std::size_t differing = 0;
    for (const auto& [name, bytes] : a) {
      auto it = b.find(name);
      differing += it == b.end() || it->second != bytes;
    }
    Note(v, differing == 0 && a.size() == b.size() && a.size() >= 14,
         std::to_string(a.size()) + " files, " + std::to_string(differing) + " differ");
  } catch (const std::exception& e) {
    Note(v, false, e.what());
  }
  fs::remove_all(root);
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"synthetic ground truth recovered (RCE within 0.02, ECE within 0.01)", Criterion1},
      {"uninformative measure gives RCE 1/2", Criterion2},
      {"rank-calibrated series gives RCE exactly 0", Criterion3},
      {"monotone-transform invariance", Criterion4},
      {"small-instance brute force", Criterion5},
      {"spectral sanity", Criterion6},
      {"recalibration improves RCE", Criterion7},
      {"AUROC ranking flips across tau", Criterion8},
      {"statistics", Criterion9},
      {"indication area equals RCE", Criterion10},
      {"pipeline determinism", Criterion11},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const Verdict v = criteria[i].second();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.pass;
    std::printf("[%s] %2zu %s: %s (%.1fs)\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
