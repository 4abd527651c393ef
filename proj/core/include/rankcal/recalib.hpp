#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rankcal/series.hpp"

namespace rankcal::recalib {

// Piecewise-constant map from measure values to expected correctness.
// Bin b covers (boundaries[b], boundaries[b+1]]; the first bin also takes
// boundaries[0] and anything below it, the last anything above.
struct RecalibrationMap {
  std::vector<double> boundaries;  // B + 1, ascending
  std::vector<double> values;      // B per-bin mean correctness

  std::size_t bins() const { return values.size(); }
  std::size_t BinOf(double value) const;
  double operator()(double value) const { return values[BinOf(value)]; }
};

// Equal-mass bins over the calibration values, each mapped to its mean
// correctness. Throws TooFewPoints when the series is shorter than B.
RecalibrationMap Fit(const MeasureSeries& calibration, std::size_t bins);

// Boundaries taken from `boundary_source` quantiles (e.g. a test split), bin
// values still from `calibration`. Empty calibration bins map to 0.
RecalibrationMap FitWithBoundaries(const MeasureSeries& calibration,
                                   const MeasureSeries& boundary_source, std::size_t bins);

// Replaces every value by its bin's calibrated correctness. The result is a
// confidence series named "<name>-cal".
MeasureSeries Apply(const RecalibrationMap& map, const MeasureSeries& series);

struct Split {
  std::vector<std::size_t> calibration;
  std::vector<std::size_t> test;
};

// Random disjoint split of [0, n); round(fraction * n) indices go to the
// calibration side. fraction must lie in (0, 1) and leave both sides nonempty.
Split RandomSplit(std::size_t n, double fraction, std::uint64_t seed);

std::pair<MeasureSeries, MeasureSeries> SplitSeries(const MeasureSeries& series,
                                                    double fraction, std::uint64_t seed);

}  // namespace rankcal::recalib
