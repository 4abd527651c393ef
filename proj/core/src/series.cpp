#include "rankcal/series.hpp"

#include <cmath>
#include <string>

#include "rankcal/error.hpp"

namespace rankcal {

std::string_view OrientationName(Orientation o) {
  return o == Orientation::kConfidence ? "confidence" : "uncertainty";
}

Orientation ParseOrientation(std::string_view name) {
  if (name == "uncertainty") return Orientation::kUncertainty;
  if (name == "confidence") return Orientation::kConfidence;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown orientation '" + std::string(name) + "'");
}

MeasureSeries MeasureSeries::Select(const std::vector<std::size_t>& indices) const {
  MeasureSeries out;
  out.name = name;
  out.orientation = orientation;
  out.values.reserve(indices.size());
  out.correctness.reserve(indices.size());
  for (std::size_t i : indices) out.push_back(values.at(i), correctness.at(i));
  return out;
}

void MeasureSeries::Validate() const {
  if (values.size() != correctness.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "series '" + name + "' has mismatched value/correctness lengths");
  }
  for (std::size_t i = 0; i < correctness.size(); ++i) {
    const double a = correctness[i];
    if (!(a >= 0.0 && a <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "series '" + name + "': correctness[" + std::to_string(i) +
                      "] outside [0,1]");
    }
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "series '" + name + "': value[" + std::to_string(i) + "] is not finite");
    }
  }
}

}  // namespace rankcal
