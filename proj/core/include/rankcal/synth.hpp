#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankcal/records.hpp"
#include "rankcal/series.hpp"

namespace rankcal::synth {

enum class Family { kCase1Uniform, kCase2Discrete, kRankCalibrated, kAntiCalibrated, kUninformative };

Family ParseFamily(std::string_view name);
std::string_view FamilyName(Family f);

// How correctness is emitted for the constant-regression constructions.
// kExpected writes a_i = reg(c_i) (= 1/2 + beta); kBernoulli draws
// a_i ~ Bernoulli(reg(c_i)).
enum class CorrectnessMode { kExpected, kBernoulli };
CorrectnessMode ParseCorrectnessMode(std::string_view name);
std::string_view CorrectnessModeName(CorrectnessMode m);

// kStratified emits exactly round(n p_k) copies of each support point in a
// random order; kIid draws each point independently.
enum class Sampling { kStratified, kIid };
Sampling ParseSampling(std::string_view name);
std::string_view SamplingName(Sampling s);

struct SyntheticSpec {
  Family family = Family::kCase2Discrete;
  double alpha = 0.3;
  double beta = 0.2;
  int k = 5;
  std::size_t n = 200000;
  std::uint64_t seed = 0;
  double noise = 0.0;  // monotone families only
  CorrectnessMode correctness = CorrectnessMode::kExpected;
  Sampling sampling = Sampling::kStratified;
};

// Population values the generated data should reproduce.
struct GroundTruth {
  std::optional<double> rce;
  std::optional<double> ece;
  bool degenerate = false;              // every value identical
  std::vector<double> support;          // case 2 support points c_1..c_K
  std::vector<double> masses;           // case 2 masses p_1..p_K
  std::string note;
};

struct SyntheticData {
  MeasureSeries series;
  GroundTruth truth;
  SyntheticSpec spec;
};

// Smallest root of (K-1)p^2 + (1-(K-1)p)^2 = 1 - 2 alpha in (0, 1/(K-1)].
// Throws InfeasibleK when K is even, K(1 - 2 alpha) < 1, or no root qualifies.
double Case2Mass(double alpha, int k);

struct Case2Support {
  std::vector<double> points;  // c_k = 1/2 + beta (2k - K)/K for k < K, c_K = 1/2
  std::vector<double> masses;
};
Case2Support Case2Construction(double alpha, double beta, int k);

// Smallest odd K >= 3 with K (1 - 2 alpha) >= 1.
int MinimumFeasibleK(double alpha);

SyntheticData GenerateCase1(double beta, std::size_t n, std::uint64_t seed,
                            CorrectnessMode mode = CorrectnessMode::kExpected);

SyntheticData GenerateCase2(double alpha, double beta, int k, std::size_t n, std::uint64_t seed,
                            CorrectnessMode mode = CorrectnessMode::kExpected,
                            Sampling sampling = Sampling::kStratified);

enum class RegShape { kDecreasing, kIncreasing, kConstant };

// u ~ Unif(0,1), a = clip(reg(u) + Unif(-noise, noise), 0, 1) with reg
// 1 - u, u, or 1/2. Uncertainty orientation.
SyntheticData GenerateMonotone(RegShape shape, double noise, std::size_t n, std::uint64_t seed);

SyntheticData Generate(const SyntheticSpec& spec);

// Synthetic data in the records interchange format: one record per point
// with a single pseudo-response carrying `measure_value` and the correctness
// under the key "synthetic"; the spec and ground truth go into meta.
records::Dataset ToDataset(const SyntheticData& data);

}  // namespace rankcal::synth
