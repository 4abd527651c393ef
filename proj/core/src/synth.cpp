#include "rankcal/synth.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "rankcal/error.hpp"
#include "rankcal/random.hpp"

namespace rankcal::synth {
namespace {

void CheckUnitHalf(double x, const char* what, bool allow_zero) {
  if (!((allow_zero ? x >= 0.0 : x > 0.0) && x <= 0.5)) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " must lie in (0, 1/2]");
  }
}

double Correctness(double reg, CorrectnessMode mode, Rng& rng) {
  return mode == CorrectnessMode::kExpected ? reg : (rng.Bernoulli(reg) ? 1.0 : 0.0);
}

}  // namespace

Family ParseFamily(std::string_view name) {
  if (name == "case1" || name == "case1_uniform") return Family::kCase1Uniform;
  if (name == "case2" || name == "case2_discrete") return Family::kCase2Discrete;
  if (name == "rank_calibrated") return Family::kRankCalibrated;
  if (name == "anti_calibrated") return Family::kAntiCalibrated;
  if (name == "uninformative") return Family::kUninformative;
  throw Error(ErrorCode::kInvalidArgument, "unknown family '" + std::string(name) + "'");
}

std::string_view FamilyName(Family f) {
  switch (f) {
    case Family::kCase1Uniform: return "case1_uniform";
    case Family::kCase2Discrete: return "case2_discrete";
    case Family::kRankCalibrated: return "rank_calibrated";
    case Family::kAntiCalibrated: return "anti_calibrated";
    case Family::kUninformative: return "uninformative";
  }
  return "?";
}

CorrectnessMode ParseCorrectnessMode(std::string_view name) {
  if (name == "expected") return CorrectnessMode::kExpected;
  if (name == "bernoulli") return CorrectnessMode::kBernoulli;
  throw Error(ErrorCode::kInvalidArgument, "unknown correctness mode '" + std::string(name) + "'");
}

std::string_view CorrectnessModeName(CorrectnessMode m) {
  return m == CorrectnessMode::kBernoulli ? "bernoulli" : "expected";
}

Sampling ParseSampling(std::string_view name) {
  if (name == "stratified") return Sampling::kStratified;
  if (name == "iid") return Sampling::kIid;
  throw Error(ErrorCode::kInvalidArgument, "unknown sampling '" + std::string(name) + "'");
}

std::string_view SamplingName(Sampling s) { return s == Sampling::kIid ? "iid" : "stratified"; }

double Case2Mass(double alpha, int k) {
  if (k < 3 || k % 2 == 0) {
    throw Error(ErrorCode::kInfeasibleK,
                "K=" + std::to_string(k) + ": the symmetric support needs an odd K >= 3");
  }
  if (static_cast<double>(k) * (1.0 - 2.0 * alpha) < 1.0) {
    throw Error(ErrorCode::kInfeasibleK,
                "K=" + std::to_string(k) + " < 1/(1 - 2 alpha)");
  }
  // (K-1)p^2 + (1-(K-1)p)^2 = 1 - 2 alpha  <=>  (a + a^2) p^2 - 2 a p + 2 alpha = 0.
  const double a = static_cast<double>(k - 1);
  const double qa = a + a * a;
  const double qb = -2.0 * a;
  const double qc = 2.0 * alpha;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < -1e-12) throw Error(ErrorCode::kInfeasibleK, "no real root for this K");
  const double s = std::sqrt(std::max(disc, 0.0));
  for (double p : {(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)}) {
    if (p > 0.0 && p <= 1.0 / a + 1e-12) return std::min(p, 1.0 / a);
  }
  throw Error(ErrorCode::kInfeasibleK, "no root in (0, 1/(K-1)]");
}

Case2Support Case2Construction(double alpha, double beta, int k) {
  CheckUnitHalf(beta, "beta", false);
  const double p = Case2Mass(alpha, k);
  Case2Support s;
  const double kk = static_cast<double>(k);
  for (int j = 1; j < k; ++j) {
    s.points.push_back(0.5 + beta * (2.0 * j - kk) / kk);
    s.masses.push_back(p);
  }
  s.points.push_back(0.5);
  s.masses.push_back(std::max(0.0, 1.0 - (kk - 1.0) * p));
  return s;
}

int MinimumFeasibleK(double alpha) {
  CheckUnitHalf(alpha, "alpha", false);
  if (alpha >= 0.5) throw Error(ErrorCode::kInfeasibleK, "alpha = 1/2 has no discrete case");
  int k = std::max(3, static_cast<int>(std::ceil(1.0 / (1.0 - 2.0 * alpha) - 1e-12)));
  if (k % 2 == 0) ++k;
  return k;
}

SyntheticData GenerateCase1(double beta, std::size_t n, std::uint64_t seed, CorrectnessMode mode) {
  CheckUnitHalf(beta, "beta", true);
  SyntheticData d;
  d.spec.family = Family::kCase1Uniform;
  d.spec.alpha = 0.5;
  d.spec.beta = beta;
  d.spec.n = n;
  d.spec.seed = seed;
  d.spec.correctness = mode;
  d.series.name = "case1";
  d.series.orientation = Orientation::kConfidence;
  d.truth.rce = 0.5;
  d.truth.ece = beta;
  d.truth.degenerate = beta == 0.0;
  if (d.truth.degenerate) d.truth.note = "single-bin case: every confidence equals 1/2";
  Rng rng(seed);
  const double reg = 0.5 + beta;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = rng.Uniform(0.5 - beta, 0.5 + beta);
    d.series.push_back(c, Correctness(reg, mode, rng));
  }
  return d;
}

SyntheticData GenerateCase2(double alpha, double beta, int k, std::size_t n, std::uint64_t seed,
                            CorrectnessMode mode, Sampling sampling) {
  CheckUnitHalf(alpha, "alpha", false);
  if (alpha == 0.5) {
    SyntheticData d = GenerateCase1(beta, n, seed, mode);
    d.truth.note = "alpha = 1/2 delegates to the continuous construction";
    return d;
  }
  const Case2Support support = Case2Construction(alpha, beta, k);
  SyntheticData d;
  d.spec = {Family::kCase2Discrete, alpha, beta, k, n, seed, 0.0, mode, sampling};
  d.series.name = "case2";
  d.series.orientation = Orientation::kConfidence;
  d.truth.rce = alpha;
  d.truth.ece = beta;
  d.truth.support = support.points;
  d.truth.masses = support.masses;

  Rng rng(seed);
  std::vector<double> values;
  values.reserve(n);
  if (sampling == Sampling::kStratified) {
    std::size_t assigned = 0;
    for (std::size_t j = 0; j + 1 < support.points.size(); ++j) {
      const auto count = static_cast<std::size_t>(std::llround(support.masses[j] * static_cast<double>(n)));
      values.insert(values.end(), std::min(count, n - assigned), support.points[j]);
      assigned = values.size();
    }
    values.insert(values.end(), n - assigned, support.points.back());
    rng.Shuffle(std::span<double>(values));
  } else {
    std::vector<double> cdf(support.masses.size());
    double acc = 0.0;
    for (std::size_t j = 0; j < cdf.size(); ++j) cdf[j] = acc += support.masses[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.Uniform() * acc;
      const auto j = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      values.push_back(support.points[std::min(j, cdf.size() - 1)]);
    }
  }
  const double reg = 0.5 + beta;
  for (double c : values) d.series.push_back(c, Correctness(reg, mode, rng));
  return d;
}

SyntheticData GenerateMonotone(RegShape shape, double noise, std::size_t n, std::uint64_t seed) {
  if (noise < 0.0) throw Error(ErrorCode::kInvalidArgument, "noise must be non-negative");
  SyntheticData d;
  d.spec.n = n;
  d.spec.seed = seed;
  d.spec.noise = noise;
  d.series.orientation = Orientation::kUncertainty;
  switch (shape) {
    case RegShape::kDecreasing:
      d.spec.family = Family::kRankCalibrated;
      d.truth.rce = 0.0;
      break;
    case RegShape::kIncreasing:
      d.spec.family = Family::kAntiCalibrated;
      d.truth.rce = 0.5;
      d.truth.note = "population value; B equal-mass bins give B/(2(B-1))";
      break;
    case RegShape::kConstant:
      d.spec.family = Family::kUninformative;
      d.truth.rce = 0.5;
      break;
  }
  d.series.name = std::string(FamilyName(d.spec.family));
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.Uniform();
    double reg = 0.5;
    if (shape == RegShape::kDecreasing) reg = 1.0 - u;
    if (shape == RegShape::kIncreasing) reg = u;
    const double a = noise > 0.0 ? std::clamp(reg + rng.Uniform(-noise, noise), 0.0, 1.0) : reg;
    d.series.push_back(u, a);
  }
  return d;
}

SyntheticData Generate(const SyntheticSpec& spec) {
  SyntheticData d;
  switch (spec.family) {
    case Family::kCase1Uniform:
      d = GenerateCase1(spec.beta, spec.n, spec.seed, spec.correctness);
      break;
    case Family::kCase2Discrete:
      d = GenerateCase2(spec.alpha, spec.beta, spec.k, spec.n, spec.seed, spec.correctness,
                        spec.sampling);
      break;
    case Family::kRankCalibrated:
      d = GenerateMonotone(RegShape::kDecreasing, spec.noise, spec.n, spec.seed);
      break;
    case Family::kAntiCalibrated:
      d = GenerateMonotone(RegShape::kIncreasing, spec.noise, spec.n, spec.seed);
      break;
    case Family::kUninformative:
      d = GenerateMonotone(RegShape::kConstant, spec.noise, spec.n, spec.seed);
      break;
  }
  d.spec = spec;
  return d;
}

records::Dataset ToDataset(const SyntheticData& data) {
  using nlohmann::json;
  records::Dataset ds;
  const auto& s = data.spec;
  json spec = {{"family", FamilyName(s.family)}, {"alpha", s.alpha}, {"beta", s.beta},
               {"k", s.k}, {"n", s.n}, {"seed", s.seed}, {"noise", s.noise},
               {"correctness_mode", CorrectnessModeName(s.correctness)},
               {"sampling", SamplingName(s.sampling)}};
  json truth = json::object();
  if (data.truth.rce) truth["rce"] = *data.truth.rce;
  if (data.truth.ece) truth["ece"] = *data.truth.ece;
  truth["degenerate"] = data.truth.degenerate;
  if (!data.truth.support.empty()) {
    truth["support"] = data.truth.support;
    truth["masses"] = data.truth.masses;
  }
  if (!data.truth.note.empty()) truth["note"] = data.truth.note;
  ds.meta["orientation"] = std::string(OrientationName(data.series.orientation));
  ds.meta["synthetic_spec"] = spec.dump();
  ds.meta["ground_truth"] = truth.dump();
  ds.records.reserve(data.series.size());
  for (std::size_t i = 0; i < data.series.size(); ++i) {
    records::GenerationRecord rec;
    rec.id = "syn-" + std::to_string(i);
    records::ResponseSample sample;
    sample.measure_value = data.series.values[i];
    sample.correctness["synthetic"] = data.series.correctness[i];
    rec.responses.push_back(std::move(sample));
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

}  // namespace rankcal::synth
