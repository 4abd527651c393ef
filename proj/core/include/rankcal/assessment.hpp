#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankcal/series.hpp"

namespace rankcal::assessment {

inline constexpr std::size_t kDefaultBins = 20;

struct BinSummary {
  std::size_t index = 0;              // 1-based, ordered by value quantile
  std::vector<std::size_t> members;   // positions in the series
  double uct = 0.0;                   // mean value
  double crc = 0.0;                   // mean correctness
  std::size_t count() const { return members.size(); }
};

// B equal-mass bins over the values (type-1 quantiles, stable order for ties):
// bin b holds sorted positions [floor((b-1)n/B), floor(bn/B)).
std::vector<BinSummary> EqualMassBins(const MeasureSeries& series, std::size_t bins);

// Per-bin rank estimates behind the empirical RCE. For bin b:
//   reg_rank[b]   = 1/(B-1) * #{b' != b : crc_b' >= crc_b}
//   value_rank[b] = 1/(B-1) * #{b' != b : uct_b' <= uct_b}   (uncertainty)
//                   1/(B-1) * #{b' != b : uct_b' >= uct_b}   (confidence)
struct RankTerms {
  std::vector<BinSummary> bins;
  std::vector<double> reg_rank;
  std::vector<double> value_rank;
  std::size_t n = 0;
};

RankTerms ComputeRankTerms(const MeasureSeries& series, std::size_t bins);

// (1/n) sum_i |reg_rank[b(i)] - value_rank[b(i)]|, computed from the terms.
double RceFromTerms(const RankTerms& terms);

struct MetricResult {
  std::string name;
  double value = 0.0;
  std::map<std::string, double> params;
};

MetricResult EmpiricalRce(const MeasureSeries& series, std::size_t bins = kDefaultBins);

// Equal-mass ECE over a confidence series. With `tau`, correctness is
// binarized first; otherwise raw correctness values are used.
MetricResult Ece(const MeasureSeries& series, std::size_t bins = kDefaultBins,
                 std::optional<double> tau = std::nullopt);

// P(value of a correct point ranks better than an incorrect one) + 1/2 P(tie),
// where "better" is lower uncertainty or higher confidence.
MetricResult Auroc(const MeasureSeries& series, double tau);

enum class Polarity { kPositive, kNegative };

// Step-wise area under the precision-recall curve. kPositive treats correct
// responses as the positive class ranked by ascending uncertainty; kNegative
// treats incorrect ones as positive, ranked by descending uncertainty.
MetricResult Auprc(const MeasureSeries& series, double tau, Polarity polarity);

// Trapezoidal area under the accuracy-rejection curve. Rejection fractions
// must be ascending in [0, 1]; the default grid is {0, 1/n, ..., 1}.
MetricResult Auarc(const MeasureSeries& series, double tau,
                   const std::vector<double>& rejection_grid = {});

enum class MetricKind { kRce, kEce, kAuroc, kAuprcPositive, kAuprcNegative, kAuarc };

MetricKind ParseMetricKind(std::string_view name);
std::string_view MetricKindName(MetricKind kind);
std::vector<MetricKind> ParseMetricList(std::string_view comma_separated);
bool NeedsThreshold(MetricKind kind);
// Whether smaller values of the metric are better (RCE, ECE).
bool LowerIsBetter(MetricKind kind);

struct MetricSpec {
  MetricKind kind = MetricKind::kRce;
  std::size_t bins = kDefaultBins;
  std::optional<double> tau;
};

MetricResult Evaluate(const MeasureSeries& series, const MetricSpec& spec);

struct SweepPoint {
  double tau = 0.0;
  std::optional<double> value;  // empty when binarization leaves one class
};

std::vector<SweepPoint> ThresholdSweep(const MeasureSeries& series, MetricKind metric,
                                       const std::vector<double>& taus);

// Parses "a:b:step" into an inclusive grid.
std::vector<double> ParseTauGrid(std::string_view text);

}  // namespace rankcal::assessment
