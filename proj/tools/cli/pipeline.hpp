#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rankcal/correctness.hpp"
#include "rankcal/measures.hpp"
#include "rankcal/records.hpp"
#include "rankcal/series.hpp"

namespace rankcal::cli {

// Series for one measure over a dataset, with records the measure could not
// use counted by error code instead of failing the run.
struct BuiltSeries {
  MeasureSeries series;
  std::size_t coverage = 0;
  std::map<std::string, std::size_t> skipped;
};

// Correctness of every record's primary response; records whose correctness
// cannot be computed are reported in `skipped` and left as NaN.
struct CorrectnessColumn {
  std::vector<double> values;
  std::map<std::string, std::size_t> skipped;
  std::vector<std::string> warnings;
};

CorrectnessColumn ScoreDataset(const records::Dataset& dataset,
                               const correctness::CorrectnessSpec& spec);

BuiltSeries BuildSeries(const records::Dataset& dataset, const CorrectnessColumn& correctness,
                        measures::MeasureKind kind, const measures::MeasureOptions& options);

// Merges datasets in order; record ids must stay unique.
records::Dataset LoadDatasets(const std::vector<std::string>& paths);

// Runs task(i) for i in [0, count) on up to `jobs` threads.
void ParallelFor(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task);

}  // namespace rankcal::cli
