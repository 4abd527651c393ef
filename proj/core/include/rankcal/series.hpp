#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace rankcal {

// Uncertainty measures: lower values should mean better generations.
// Confidence measures: higher values should mean better generations.
enum class Orientation { kUncertainty, kConfidence };

std::string_view OrientationName(Orientation o);
Orientation ParseOrientation(std::string_view name);

// Paired (measure value, correctness) observations over a benchmark. The
// orientation is carried explicitly instead of sign-flipping the values.
struct MeasureSeries {
  std::string name;
  Orientation orientation = Orientation::kUncertainty;
  std::vector<double> values;
  std::vector<double> correctness;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }

  void push_back(double value, double a) {
    values.push_back(value);
    correctness.push_back(a);
  }

  // Subseries at the given positions, same name and orientation.
  MeasureSeries Select(const std::vector<std::size_t>& indices) const;

  // Throws InvalidArgument when sizes differ or a correctness value leaves [0,1].
  void Validate() const;
};

}  // namespace rankcal
