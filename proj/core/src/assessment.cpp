#include "rankcal/assessment.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rankcal/correctness.hpp"
#include "rankcal/error.hpp"

namespace rankcal::assessment {
namespace {

std::vector<std::size_t> StableOrder(const std::vector<double>& values, bool descending) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  if (descending) {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  } else {
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  }
  return order;
}

// Order in which points are deemed most likely correct first.
std::vector<std::size_t> CorrectFirstOrder(const MeasureSeries& s) {
  return StableOrder(s.values, s.orientation == Orientation::kConfidence);
}

std::vector<int> BinaryLabels(const MeasureSeries& s, double tau) {
  std::vector<int> y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) y[i] = correctness::Binarize(s.correctness[i], tau);
  return y;
}

void RequireNonEmpty(const MeasureSeries& s) {
  if (s.empty()) throw Error(ErrorCode::kTooFewPoints, "series '" + s.name + "' is empty");
  s.Validate();
}

std::pair<std::size_t, std::size_t> ClassCounts(const std::vector<int>& y, double tau) {
  const auto pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  const std::size_t neg = y.size() - pos;
  if (pos == 0 || neg == 0) {
    throw Error(ErrorCode::kOneClassOnly, "tau=" + std::to_string(tau));
  }
  return {pos, neg};
}

// [begin, end) ranges of equal values along `order`.
std::vector<std::pair<std::size_t, std::size_t>> TieGroups(const std::vector<double>& values,
                                                            const std::vector<std::size_t>& order) {
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  std::size_t start = 0;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    if (i == order.size() || values[order[i]] != values[order[start]]) {
      groups.emplace_back(start, i);
      start = i;
    }
  }
  return groups;
}

}  // namespace

std::vector<BinSummary> EqualMassBins(const MeasureSeries& series, std::size_t bins) {
  RequireNonEmpty(series);
  const std::size_t n = series.size();
  if (bins == 0 || n < bins) {
    throw Error(ErrorCode::kTooFewPoints,
                "n=" + std::to_string(n) + " < B=" + std::to_string(bins));
  }
  const auto order = StableOrder(series.values, /*descending=*/false);
  std::vector<BinSummary> out(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = b * n / bins;
    const std::size_t hi = (b + 1) * n / bins;
    BinSummary& bin = out[b];
    bin.index = b + 1;
    bin.members.assign(order.begin() + static_cast<std::ptrdiff_t>(lo),
                       order.begin() + static_cast<std::ptrdiff_t>(hi));
    double su = 0.0;
    double sa = 0.0;
    for (std::size_t i : bin.members) {
      su += series.values[i];
      sa += series.correctness[i];
    }
    // 0/0 := 0 for an empty bin.
    const double c = static_cast<double>(bin.members.size());
    bin.uct = bin.members.empty() ? 0.0 : su / c;
    bin.crc = bin.members.empty() ? 0.0 : sa / c;
  }
  return out;
}

RankTerms ComputeRankTerms(const MeasureSeries& series, std::size_t bins) {
  if (bins < 2) {
    throw Error(ErrorCode::kInvalidArgument, "rank-calibration error needs B >= 2");
  }
  RankTerms t;
  t.bins = EqualMassBins(series, bins);
  t.n = series.size();
  t.reg_rank.resize(bins);
  t.value_rank.resize(bins);
  const bool confidence = series.orientation == Orientation::kConfidence;
  const double denom = static_cast<double>(bins - 1);
  for (std::size_t b = 0; b < bins; ++b) {
    std::size_t reg = 0;
    std::size_t val = 0;
    for (std::size_t o = 0; o < bins; ++o) {
      if (o == b) continue;
      if (t.bins[o].crc >= t.bins[b].crc) ++reg;
      if (confidence ? t.bins[o].uct >= t.bins[b].uct : t.bins[o].uct <= t.bins[b].uct) ++val;
    }
    t.reg_rank[b] = static_cast<double>(reg) / denom;
    t.value_rank[b] = static_cast<double>(val) / denom;
  }
  return t;
}

double RceFromTerms(const RankTerms& t) {
  double sum = 0.0;
  for (std::size_t b = 0; b < t.bins.size(); ++b) {
    sum += static_cast<double>(t.bins[b].count()) * std::abs(t.reg_rank[b] - t.value_rank[b]);
  }
  return sum / static_cast<double>(t.n);
}

MetricResult EmpiricalRce(const MeasureSeries& series, std::size_t bins) {
  return {"rce", RceFromTerms(ComputeRankTerms(series, bins)),
          {{"bins", static_cast<double>(bins)}}};
}

MetricResult Ece(const MeasureSeries& series, std::size_t bins, std::optional<double> tau) {
  if (series.orientation != Orientation::kConfidence) {
    throw Error(ErrorCode::kWrongOrientation,
                "ECE needs a confidence measure, got '" + series.name + "'");
  }
  for (double c : series.values) {
    if (!(c >= 0.0 && c <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "ECE needs confidence values in [0,1]");
    }
  }
  MeasureSeries work = series;
  if (tau) {
    for (double& a : work.correctness) a = correctness::Binarize(a, *tau);
  }
  const auto summary = EqualMassBins(work, bins);
  double ece = 0.0;
  for (const auto& bin : summary) {
    ece += static_cast<double>(bin.count()) * std::abs(bin.uct - bin.crc);
  }
  MetricResult r{"ece", ece / static_cast<double>(work.size()),
                 {{"bins", static_cast<double>(bins)}}};
  if (tau) r.params["tau"] = *tau;
  return r;
}

MetricResult Auroc(const MeasureSeries& series, double tau) {
  RequireNonEmpty(series);
  const auto y = BinaryLabels(series, tau);
  const auto [pos, neg] = ClassCounts(y, tau);
  // Average ranks (1-based) of the values, ascending.
  const auto order = StableOrder(series.values, false);
  std::vector<double> rank(series.size());
  for (const auto& [lo, hi] : TieGroups(series.values, order)) {
    const double r = (static_cast<double>(lo + 1) + static_cast<double>(hi)) / 2.0;
    for (std::size_t k = lo; k < hi; ++k) rank[order[k]] = r;
  }
  // With ascending ranks, the U statistic of the class that should sit higher.
  const bool confidence = series.orientation == Orientation::kConfidence;
  const int high_label = confidence ? 1 : 0;
  const double high_count = static_cast<double>(confidence ? pos : neg);
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] == high_label) rank_sum += rank[i];
  }
  const double u = rank_sum - high_count * (high_count + 1.0) / 2.0;
  return {"auroc", u / (static_cast<double>(pos) * static_cast<double>(neg)), {{"tau", tau}}};
}

MetricResult Auprc(const MeasureSeries& series, double tau, Polarity polarity) {
  RequireNonEmpty(series);
  auto y = BinaryLabels(series, tau);
  ClassCounts(y, tau);
  auto order = CorrectFirstOrder(series);
  if (polarity == Polarity::kNegative) {
    for (int& v : y) v = 1 - v;
    order = StableOrder(series.values, series.orientation != Orientation::kConfidence);
  }
  const double positives = static_cast<double>(std::count(y.begin(), y.end(), 1));
  double tp = 0.0;
  double ap = 0.0;
  for (const auto& [lo, hi] : TieGroups(series.values, order)) {
    double group_tp = 0.0;
    for (std::size_t k = lo; k < hi; ++k) group_tp += y[order[k]];
    tp += group_tp;
    ap += (group_tp / positives) * (tp / static_cast<double>(hi));
  }
  return {polarity == Polarity::kPositive ? "auprc+" : "auprc-", ap, {{"tau", tau}}};
}

MetricResult Auarc(const MeasureSeries& series, double tau,
                   const std::vector<double>& rejection_grid) {
  RequireNonEmpty(series);
  const std::size_t n = series.size();
  std::vector<double> grid = rejection_grid;
  if (grid.empty()) {
    grid.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) grid[j] = static_cast<double>(j) / static_cast<double>(n);
  }
  if (grid.size() < 2 || !std::is_sorted(grid.begin(), grid.end()) || grid.front() < 0.0 ||
      grid.back() > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "rejection grid must be ascending within [0,1]");
  }
  const auto y = BinaryLabels(series, tau);
  const auto order = CorrectFirstOrder(series);
  const auto groups = TieGroups(series.values, order);

  // group_of[k]: tie group holding sorted position k; prefix[g]: correct count
  // before group g.
  std::vector<std::size_t> group_of(n);
  std::vector<double> prefix(groups.size() + 1, 0.0);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    double c = 0.0;
    for (std::size_t k = groups[g].first; k < groups[g].second; ++k) {
      group_of[k] = g;
      c += y[order[k]];
    }
    prefix[g + 1] = prefix[g] + c;
  }
  auto accuracy = [&](std::size_t kept) {
    kept = std::max<std::size_t>(kept, 1);  // full rejection: last nonempty prefix
    const std::size_t g = group_of[kept - 1];
    const auto [lo, hi] = groups[g];
    const double group_mean = (prefix[g + 1] - prefix[g]) / static_cast<double>(hi - lo);
    const double correct = prefix[g] + static_cast<double>(kept - lo) * group_mean;
    return correct / static_cast<double>(kept);
  };
  auto kept_at = [&](double r) {
    const auto rejected = static_cast<std::size_t>(std::floor(r * static_cast<double>(n) + 1e-9));
    return n - std::min(rejected, n);
  };

  double area = 0.0;
  double prev_acc = accuracy(kept_at(grid[0]));
  for (std::size_t j = 1; j < grid.size(); ++j) {
    const double acc = accuracy(kept_at(grid[j]));
    area += (grid[j] - grid[j - 1]) * (prev_acc + acc) / 2.0;
    prev_acc = acc;
  }
  return {"auarc", area, {{"tau", tau}, {"grid_points", static_cast<double>(grid.size())}}};
}

namespace {

struct MetricName {
  MetricKind kind;
  std::string_view name;
};

constexpr MetricName kMetricNames[] = {
    {MetricKind::kRce, "rce"},
    {MetricKind::kEce, "ece"},
    {MetricKind::kAuroc, "auroc"},
    {MetricKind::kAuprcPositive, "auprc+"},
    {MetricKind::kAuprcNegative, "auprc-"},
    {MetricKind::kAuarc, "auarc"},
};

}  // namespace

MetricKind ParseMetricKind(std::string_view name) {
  for (const auto& m : kMetricNames) {
    if (m.name == name) return m.kind;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown metric '" + std::string(name) + "'");
}

std::string_view MetricKindName(MetricKind kind) {
  for (const auto& m : kMetricNames) {
    if (m.kind == kind) return m.name;
  }
  return "?";
}

std::vector<MetricKind> ParseMetricList(std::string_view text) {
  std::vector<MetricKind> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const auto item = text.substr(start, end - start);
    if (!item.empty()) out.push_back(ParseMetricKind(item));
    start = end + 1;
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "empty metric list");
  return out;
}

bool NeedsThreshold(MetricKind kind) {
  return kind == MetricKind::kAuroc || kind == MetricKind::kAuprcPositive ||
         kind == MetricKind::kAuprcNegative || kind == MetricKind::kAuarc;
}

bool LowerIsBetter(MetricKind kind) {
  return kind == MetricKind::kRce || kind == MetricKind::kEce;
}

MetricResult Evaluate(const MeasureSeries& series, const MetricSpec& spec) {
  if (NeedsThreshold(spec.kind) && !spec.tau) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(MetricKindName(spec.kind)) + " needs a threshold tau");
  }
  switch (spec.kind) {
    case MetricKind::kRce: return EmpiricalRce(series, spec.bins);
    case MetricKind::kEce: return Ece(series, spec.bins, spec.tau);
    case MetricKind::kAuroc: return Auroc(series, *spec.tau);
    case MetricKind::kAuprcPositive: return Auprc(series, *spec.tau, Polarity::kPositive);
    case MetricKind::kAuprcNegative: return Auprc(series, *spec.tau, Polarity::kNegative);
    case MetricKind::kAuarc: return Auarc(series, *spec.tau);
  }
  throw Error(ErrorCode::kInvalidArgument, "unhandled metric");
}

std::vector<SweepPoint> ThresholdSweep(const MeasureSeries& series, MetricKind metric,
                                       const std::vector<double>& taus) {
  if (!NeedsThreshold(metric)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(MetricKindName(metric)) + " does not depend on tau");
  }
  std::vector<SweepPoint> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    SweepPoint p{tau, std::nullopt};
    try {
      p.value = Evaluate(series, {metric, kDefaultBins, tau}).value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kOneClassOnly) throw;
    }
    out.push_back(p);
  }
  return out;
}

std::vector<double> ParseTauGrid(std::string_view text) {
  double parts[3];
  std::size_t start = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t end = k < 2 ? text.find(':', start) : text.size();
    if (end == std::string_view::npos) {
      throw Error(ErrorCode::kInvalidArgument, "tau grid must look like a:b:step");
    }
    const std::string item(text.substr(start, end - start));
    std::size_t used = 0;
    try {
      parts[k] = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "bad number '" + item + "' in tau grid");
    }
    start = end + 1;
  }
  const double lo = parts[0], hi = parts[1], step = parts[2];
  if (!(step > 0.0) || hi < lo) {
    throw Error(ErrorCode::kInvalidArgument, "tau grid needs a <= b and step > 0");
  }
  std::vector<double> grid;
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
  for (std::size_t k = 0; k <= count; ++k) grid.push_back(lo + static_cast<double>(k) * step);
  return grid;
}

}  // namespace rankcal::assessment
