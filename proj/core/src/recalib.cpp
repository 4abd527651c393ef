#include "rankcal/recalib.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>

#include "rankcal/assessment.hpp"
#include "rankcal/error.hpp"
#include "rankcal/random.hpp"

namespace rankcal::recalib {
namespace {

std::vector<double> QuantileBoundaries(const MeasureSeries& series, std::size_t bins) {
  const auto summary = assessment::EqualMassBins(series, bins);
  std::vector<double> boundaries;
  boundaries.reserve(bins + 1);
  const auto& v = series.values;
  boundaries.push_back(*std::min_element(v.begin(), v.end()));
  for (const auto& bin : summary) {
    double hi = v[bin.members.front()];
    for (std::size_t i : bin.members) hi = std::max(hi, v[i]);
    boundaries.push_back(hi);
  }
  return boundaries;
}

}  // namespace

std::size_t RecalibrationMap::BinOf(double value) const {
  // First interior upper edge >= value; edges are boundaries[1..B-1].
  const auto first = boundaries.begin() + 1;
  const auto last = boundaries.end() - 1;
  return static_cast<std::size_t>(std::lower_bound(first, last, value) - first);
}

RecalibrationMap Fit(const MeasureSeries& calibration, std::size_t bins) {
  const auto summary = assessment::EqualMassBins(calibration, bins);
  RecalibrationMap map;
  map.boundaries = QuantileBoundaries(calibration, bins);
  for (const auto& bin : summary) map.values.push_back(bin.crc);
  return map;
}

RecalibrationMap FitWithBoundaries(const MeasureSeries& calibration,
                                   const MeasureSeries& boundary_source, std::size_t bins) {
  calibration.Validate();
  RecalibrationMap map;
  map.boundaries = QuantileBoundaries(boundary_source, bins);
  map.values.assign(bins, 0.0);
  std::vector<double> sums(bins, 0.0);
  std::vector<std::size_t> counts(bins, 0);
  for (std::size_t i = 0; i < calibration.size(); ++i) {
    const std::size_t b = map.BinOf(calibration.values[i]);
    sums[b] += calibration.correctness[i];
    ++counts[b];
  }
  for (std::size_t b = 0; b < bins; ++b) {
    map.values[b] = counts[b] == 0 ? 0.0 : sums[b] / static_cast<double>(counts[b]);
  }
  return map;
}

MeasureSeries Apply(const RecalibrationMap& map, const MeasureSeries& series) {
  MeasureSeries out;
  out.name = series.name + "-cal";
  out.orientation = Orientation::kConfidence;
  out.correctness = series.correctness;
  out.values.reserve(series.size());
  for (double v : series.values) out.values.push_back(map(v));
  return out;
}

Split RandomSplit(std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "split fraction must lie in (0, 1)");
  }
  const auto n_cal = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
  if (n_cal == 0 || n_cal >= n) {
    throw Error(ErrorCode::kInvalidArgument,
                "split of " + std::to_string(n) + " points leaves an empty side");
  }
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(idx));
  Split s;
  s.calibration.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_cal));
  s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_cal), idx.end());
  std::sort(s.calibration.begin(), s.calibration.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

std::pair<MeasureSeries, MeasureSeries> SplitSeries(const MeasureSeries& series,
                                                    double fraction, std::uint64_t seed) {
  const Split s = RandomSplit(series.size(), fraction, seed);
  return {series.Select(s.calibration), series.Select(s.test)};
}

}  // namespace rankcal::recalib
