#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "rankcal/series.hpp"

namespace rankcal::stats {

inline constexpr std::size_t kDefaultReplicates = 20;

struct BootstrapReport {
  std::string metric;
  std::vector<double> replicates;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (R - 1 denominator)
};

using SeriesMetric = std::function<double(const MeasureSeries&)>;

// Each replicate resamples n pairs with replacement and re-evaluates the
// metric. Replicate r draws from its own stream seeded by (seed, r).
BootstrapReport Bootstrap(const MeasureSeries& series, const SeriesMetric& metric,
                          std::string metric_name, std::size_t replicates, std::uint64_t seed);

// Mean and sample standard deviation of values (std = 0 when fewer than 2).
BootstrapReport Summarize(std::string metric, std::vector<double> replicates);

// "0.038±0.007" at the given number of decimals.
std::string FormatMeanStd(double mean, double std, int decimals = 3);
std::pair<double, double> ParseMeanStd(std::string_view text);

// Average ranks (1-based) of one row with ties sharing the mean rank. The
// smallest value gets rank 1 unless `higher_is_better`.
std::vector<double> RankRow(const std::vector<double>& row, bool higher_is_better = false);

struct FriedmanResult {
  double statistic = 0.0;
  double p_value = 1.0;
  std::vector<double> average_ranks;
};

// table[trial][measure]; rows are ranked with RankRow. Chi-square
// approximation with the tie correction.
FriedmanResult Friedman(const std::vector<std::vector<double>>& table,
                        bool higher_is_better = false);

struct WilcoxonResult {
  double w_plus = 0.0;       // sum of ranks of positive differences x - y
  std::size_t n = 0;         // pairs left after dropping zero differences
  double p_two_sided = 1.0;
  double p_greater = 1.0;    // alternative: x tends to exceed y
  double p_less = 1.0;
  bool exact = false;
  bool degenerate = false;   // every difference was zero
};

// Exact null distribution (tie-aware, over doubled average ranks) for n <= 25,
// normal approximation with tie and continuity corrections beyond. Throws
// TooFewPairs when 0 < n < min_pairs.
WilcoxonResult WilcoxonSignedRank(const std::vector<double>& x, const std::vector<double>& y,
                                  std::size_t min_pairs = 5);

// Holm step-down adjustment, returned in the input order.
std::vector<double> HolmAdjust(const std::vector<double>& p_values);

enum class PostHoc { kWilcoxonHolm, kNemenyi };
PostHoc ParsePostHoc(std::string_view text);
std::string_view PostHocName(PostHoc p);

// Nemenyi critical difference q_alpha * sqrt(k(k+1)/(6N)); alpha 0.05 or 0.10,
// 2 <= k <= 10.
double NemenyiCriticalDifference(std::size_t measures, std::size_t trials, double alpha);

struct CdDiagramData {
  std::vector<std::string> measures;
  std::vector<double> average_ranks;
  // p_values[i][j] for i != j (adjusted for the Wilcoxon-Holm rule); 1 on the diagonal.
  std::vector<std::vector<double>> p_values;
  std::vector<std::vector<bool>> significant;
  // Maximal sets of measures with no significant pair, each ordered by rank.
  std::vector<std::vector<std::size_t>> cliques;
  double friedman_statistic = 0.0;
  double friedman_p = 1.0;
  double alpha = 0.05;
  PostHoc posthoc = PostHoc::kWilcoxonHolm;
  double critical_difference = 0.0;  // Nemenyi only
  std::size_t trials = 0;
};

// table[trial][measure]. Lower metric values rank first unless
// `higher_is_better`.
CdDiagramData CdDiagram(const std::vector<std::vector<double>>& table,
                        const std::vector<std::string>& measures, double alpha = 0.05,
                        PostHoc posthoc = PostHoc::kWilcoxonHolm, bool higher_is_better = false);

}  // namespace rankcal::stats
