#include "pipeline.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <thread>

#include "rankcal/error.hpp"

namespace rankcal::cli {

CorrectnessColumn ScoreDataset(const records::Dataset& dataset,
                               const correctness::CorrectnessSpec& spec) {
  CorrectnessColumn col;
  col.values.reserve(dataset.records.size());
  for (const auto& rec : dataset.records) {
    try {
      col.values.push_back(correctness::Score(rec, spec, &col.warnings));
    } catch (const Error& e) {
      ++col.skipped[std::string(ErrorCodeName(e.code()))];
      col.values.push_back(std::numeric_limits<double>::quiet_NaN());
    }
  }
  return col;
}

BuiltSeries BuildSeries(const records::Dataset& dataset, const CorrectnessColumn& correctness,
                        measures::MeasureKind kind, const measures::MeasureOptions& options) {
  BuiltSeries out;
  out.series.name = std::string(measures::MeasureKindName(kind));
  out.series.orientation = kind == measures::MeasureKind::kStoredValue
                               ? options.stored_orientation
                               : measures::DefaultOrientation(kind);
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    if (std::isnan(correctness.values[i])) continue;
    try {
      const auto mv = measures::Compute(dataset.records[i], kind, options);
      out.series.push_back(mv.value, correctness.values[i]);
      ++out.coverage;
    } catch (const Error& e) {
      ++out.skipped[std::string(ErrorCodeName(e.code()))];
    }
  }
  return out;
}

records::Dataset LoadDatasets(const std::vector<std::string>& paths) {
  records::Dataset merged;
  std::set<std::string> ids;
  for (const auto& path : paths) {
    auto ds = records::ParseJsonlFile(path);
    for (auto& rec : ds.records) {
      if (!ids.insert(rec.id).second) {
        throw Error(ErrorCode::kDuplicateId, "record id '" + rec.id + "' in " + path);
      }
      merged.records.push_back(std::move(rec));
    }
    for (auto& [k, v] : ds.meta) merged.meta.emplace(k, std::move(v));
    for (auto& w : ds.warnings) merged.warnings.push_back(path + ": " + w);
  }
  return merged;
}

void ParallelFor(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& task) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < std::min(jobs, count); ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace rankcal::cli
