#include "rankcal/comparestats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "rankcal/error.hpp"
#include "rankcal/random.hpp"

namespace rankcal::stats {
namespace {

constexpr std::size_t kExactWilcoxonLimit = 25;

// splitmix64 step, used to derive independent per-replicate seeds.
std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void CheckTable(const std::vector<std::vector<double>>& table) {
  if (table.size() < 2) throw Error(ErrorCode::kTooFewPoints, "need at least 2 trials");
  const std::size_t m = table.front().size();
  if (m < 2) throw Error(ErrorCode::kTooFewPoints, "need at least 2 measures");
  for (const auto& row : table) {
    if (row.size() != m) throw Error(ErrorCode::kMismatchedTrials, "ragged rank table");
  }
}

// Bron-Kerbosch without pivoting; graphs here have at most a few dozen nodes.
void MaximalCliques(const std::vector<std::vector<bool>>& adj, std::vector<std::size_t>& r,
                    std::vector<std::size_t> p, std::vector<std::size_t> x,
                    std::vector<std::vector<std::size_t>>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(r);
    return;
  }
  while (!p.empty()) {
    const std::size_t v = p.front();
    std::vector<std::size_t> np, nx;
    for (std::size_t u : p) if (u != v && adj[v][u]) np.push_back(u);
    for (std::size_t u : x) if (adj[v][u]) nx.push_back(u);
    r.push_back(v);
    MaximalCliques(adj, r, np, nx, out);
    r.pop_back();
    p.erase(p.begin());
    x.push_back(v);
  }
}

}  // namespace

BootstrapReport Summarize(std::string metric, std::vector<double> replicates) {
  BootstrapReport r;
  r.metric = std::move(metric);
  r.replicates = std::move(replicates);
  const double count = static_cast<double>(r.replicates.size());
  if (r.replicates.empty()) return r;
  r.mean = std::accumulate(r.replicates.begin(), r.replicates.end(), 0.0) / count;
  // Keep the mean inside [min, max] despite rounding in the sum.
  const auto [lo, hi] = std::minmax_element(r.replicates.begin(), r.replicates.end());
  r.mean = std::clamp(r.mean, *lo, *hi);
  if (r.replicates.size() >= 2) {
    double ss = 0.0;
    for (double v : r.replicates) ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / (count - 1.0));
  }
  return r;
}

BootstrapReport Bootstrap(const MeasureSeries& series, const SeriesMetric& metric,
                          std::string metric_name, std::size_t replicates, std::uint64_t seed) {
  if (series.empty()) throw Error(ErrorCode::kTooFewPoints, "cannot bootstrap an empty series");
  const std::size_t n = series.size();
  std::vector<double> values;
  values.reserve(replicates);
  std::vector<std::size_t> idx(n);
  for (std::size_t rep = 0; rep < replicates; ++rep) {
    Rng rng(Mix(seed ^ Mix(rep)));
    for (auto& i : idx) i = rng.Index(n);
    try {
      values.push_back(metric(series.Select(idx)));
    } catch (const Error& e) {
      throw Error(e.code(), "bootstrap replicate " + std::to_string(rep) + ": " + e.what());
    }
  }
  return Summarize(std::move(metric_name), std::move(values));
}

std::string FormatMeanStd(double mean, double std, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f±%.*f", decimals, mean, decimals, std);
  return buf;
}

std::pair<double, double> ParseMeanStd(std::string_view text) {
  const std::string_view sep = "±";
  const auto pos = text.find(sep);
  if (pos == std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument, "expected 'mean±std'");
  }
  try {
    return {std::stod(std::string(text.substr(0, pos))),
            std::stod(std::string(text.substr(pos + sep.size())))};
  } catch (const std::exception&) {
    throw Error(ErrorCode::kInvalidArgument, "bad number in '" + std::string(text) + "'");
  }
}

std::vector<double> RankRow(const std::vector<double>& row, bool higher_is_better) {
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return higher_is_better ? row[a] > row[b] : row[a] < row[b];
  });
  std::vector<double> ranks(row.size());
  std::size_t lo = 0;
  while (lo < order.size()) {
    std::size_t hi = lo + 1;
    while (hi < order.size() && row[order[hi]] == row[order[lo]]) ++hi;
    const double r = (static_cast<double>(lo + 1) + static_cast<double>(hi)) / 2.0;
    for (std::size_t k = lo; k < hi; ++k) ranks[order[k]] = r;
    lo = hi;
  }
  return ranks;
}

FriedmanResult Friedman(const std::vector<std::vector<double>>& table, bool higher_is_better) {
  CheckTable(table);
  const double n = static_cast<double>(table.size());
  const std::size_t m = table.front().size();
  const double k = static_cast<double>(m);
  FriedmanResult res;
  res.average_ranks.assign(m, 0.0);
  double tie_term = 0.0;
  for (const auto& row : table) {
    const auto ranks = RankRow(row, higher_is_better);
    for (std::size_t j = 0; j < m; ++j) res.average_ranks[j] += ranks[j];
    std::vector<double> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t lo = 0; lo < sorted.size();) {
      std::size_t hi = lo + 1;
      while (hi < sorted.size() && sorted[hi] == sorted[lo]) ++hi;
      const double t = static_cast<double>(hi - lo);
      tie_term += t * t * t - t;
      lo = hi;
    }
  }
  double ss = 0.0;
  for (auto& r : res.average_ranks) {
    r /= n;
    ss += (r - (k + 1.0) / 2.0) * (r - (k + 1.0) / 2.0);
  }
  const double correction = 1.0 - tie_term / (n * k * (k * k - 1.0));
  if (correction <= 1e-12) {
    // Every row fully tied: no evidence of any difference.
    return res;
  }
  res.statistic = 12.0 * n / (k * (k + 1.0)) * ss / correction;
  boost::math::chi_squared dist(k - 1.0);
  res.p_value = res.statistic <= 0.0 ? 1.0 : boost::math::cdf(boost::math::complement(dist, res.statistic));
  return res;
}

WilcoxonResult WilcoxonSignedRank(const std::vector<double>& x, const std::vector<double>& y,
                                  std::size_t min_pairs) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kMismatchedTrials, "Wilcoxon needs paired samples of equal length");
  }
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) d.push_back(x[i] - y[i]);
  }
  WilcoxonResult res;
  res.n = d.size();
  if (d.empty()) {
    res.degenerate = true;
    res.exact = true;
    return res;
  }
  if (d.size() < min_pairs) {
    throw Error(ErrorCode::kTooFewPairs, std::to_string(d.size()) + " nonzero differences");
  }
  std::vector<double> abs_d(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) abs_d[i] = std::abs(d[i]);
  const auto ranks = RankRow(abs_d);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (d[i] > 0) res.w_plus += ranks[i];
  }
  const std::size_t n = d.size();
  if (n <= kExactWilcoxonLimit) {
    // Doubled ranks are integers even with ties; count sign patterns by sum.
    std::vector<std::size_t> twice(n);
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      twice[i] = static_cast<std::size_t>(std::llround(2.0 * ranks[i]));
      total += twice[i];
    }
    std::vector<double> ways(total + 1, 0.0);
    ways[0] = 1.0;
    for (std::size_t r : twice) {
      for (std::size_t s = total; s >= r; --s) {
        ways[s] += ways[s - r];
        if (s == r) break;
      }
    }
    const double patterns = std::ldexp(1.0, static_cast<int>(n));
    const auto observed = static_cast<std::size_t>(std::llround(2.0 * res.w_plus));
    double le = 0.0, ge = 0.0;
    for (std::size_t s = 0; s <= total; ++s) {
      if (s <= observed) le += ways[s];
      if (s >= observed) ge += ways[s];
    }
    res.p_less = le / patterns;
    res.p_greater = ge / patterns;
    res.exact = true;
  } else {
    const double nn = static_cast<double>(n);
    double tie_term = 0.0;
    std::vector<double> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t lo = 0; lo < n;) {
      std::size_t hi = lo + 1;
      while (hi < n && sorted[hi] == sorted[lo]) ++hi;
      const double t = static_cast<double>(hi - lo);
      tie_term += t * t * t - t;
      lo = hi;
    }
    const double mean = nn * (nn + 1.0) / 4.0;
    const double sd = std::sqrt(nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0);
    boost::math::normal normal;
    res.p_greater = boost::math::cdf(boost::math::complement(normal, (res.w_plus - mean - 0.5) / sd));
    res.p_less = boost::math::cdf(normal, (res.w_plus - mean + 0.5) / sd);
  }
  res.p_two_sided = std::min(1.0, 2.0 * std::min(res.p_less, res.p_greater));
  return res;
}

std::vector<double> HolmAdjust(const std::vector<double>& p) {
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> adj(m);
  double running = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    running = std::max(running, std::min(1.0, static_cast<double>(m - k) * p[order[k]]));
    adj[order[k]] = running;
  }
  return adj;
}

PostHoc ParsePostHoc(std::string_view text) {
  if (text == "wilcoxon-holm") return PostHoc::kWilcoxonHolm;
  if (text == "nemenyi") return PostHoc::kNemenyi;
  throw Error(ErrorCode::kInvalidArgument, "unknown post-hoc rule '" + std::string(text) + "'");
}

std::string_view PostHocName(PostHoc p) {
  return p == PostHoc::kNemenyi ? "nemenyi" : "wilcoxon-holm";
}

double NemenyiCriticalDifference(std::size_t measures, std::size_t trials, double alpha) {
  // Studentized range quantiles divided by sqrt(2), k = 2..10.
  static constexpr double kQ05[] = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
  static constexpr double kQ10[] = {1.645, 2.052, 2.291, 2.459, 2.589, 2.693, 2.780, 2.855, 2.920};
  if (measures < 2 || measures > 10) {
    throw Error(ErrorCode::kInvalidArgument, "Nemenyi table covers 2..10 measures");
  }
  const double* table = nullptr;
  if (std::abs(alpha - 0.05) < 1e-12) table = kQ05;
  else if (std::abs(alpha - 0.10) < 1e-12) table = kQ10;
  else throw Error(ErrorCode::kInvalidArgument, "Nemenyi supports alpha 0.05 or 0.10");
  const double k = static_cast<double>(measures);
  return table[measures - 2] * std::sqrt(k * (k + 1.0) / (6.0 * static_cast<double>(trials)));
}

CdDiagramData CdDiagram(const std::vector<std::vector<double>>& table,
                        const std::vector<std::string>& measures, double alpha, PostHoc posthoc,
                        bool higher_is_better) {
  CheckTable(table);
  const std::size_t m = table.front().size();
  if (measures.size() != m) {
    throw Error(ErrorCode::kInvalidArgument, "one name per measure column required");
  }
  CdDiagramData out;
  out.measures = measures;
  out.alpha = alpha;
  out.posthoc = posthoc;
  out.trials = table.size();
  const auto fr = Friedman(table, higher_is_better);
  out.average_ranks = fr.average_ranks;
  out.friedman_statistic = fr.statistic;
  out.friedman_p = fr.p_value;
  out.p_values.assign(m, std::vector<double>(m, 1.0));
  out.significant.assign(m, std::vector<bool>(m, false));

  if (posthoc == PostHoc::kWilcoxonHolm) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<double> raw;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        std::vector<double> a(table.size()), b(table.size());
        for (std::size_t t = 0; t < table.size(); ++t) {
          a[t] = table[t][i];
          b[t] = table[t][j];
        }
        pairs.emplace_back(i, j);
        // Too few informative pairs is no evidence of a difference.
        double p = 1.0;
        try {
          p = WilcoxonSignedRank(a, b).p_two_sided;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kTooFewPairs) throw;
        }
        raw.push_back(p);
      }
    }
    const auto adj = HolmAdjust(raw);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      const auto [i, j] = pairs[k];
      out.p_values[i][j] = out.p_values[j][i] = adj[k];
      out.significant[i][j] = out.significant[j][i] = adj[k] < alpha;
    }
  } else {
    out.critical_difference = NemenyiCriticalDifference(m, table.size(), alpha);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const bool sig = std::abs(out.average_ranks[i] - out.average_ranks[j]) > out.critical_difference;
        out.significant[i][j] = out.significant[j][i] = sig;
      }
    }
  }

  std::vector<std::vector<bool>> same(m, std::vector<bool>(m, false));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) same[i][j] = i != j && !out.significant[i][j];
  }
  std::vector<std::size_t> all(m);
  std::iota(all.begin(), all.end(), 0);
  std::vector<std::size_t> r;
  MaximalCliques(same, r, all, {}, out.cliques);
  auto by_rank = [&](std::size_t a, std::size_t b) {
    return out.average_ranks[a] != out.average_ranks[b] ? out.average_ranks[a] < out.average_ranks[b] : a < b;
  };
  for (auto& c : out.cliques) std::sort(c.begin(), c.end(), by_rank);
  std::sort(out.cliques.begin(), out.cliques.end(), [&](const auto& a, const auto& b) {
    return by_rank(a.front(), b.front()) || (a.front() == b.front() && a.size() > b.size());
  });
  return out;
}

}  // namespace rankcal::stats
