#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "rankcal/records.hpp"

namespace rankcal::correctness {

enum class Kind { kRougeL, kRouge1, kExactMatch, kPrecomputed };

// How precision and recall of matched n-grams are combined.
enum class RougeVariant { kF1, kRecall };

struct CorrectnessSpec {
  Kind kind = Kind::kRougeL;
  std::string precomputed_name;  // only for kPrecomputed
  RougeVariant variant = RougeVariant::kF1;

  // "rougeL", "rouge1", "exact" or "pre:<name>".
  static CorrectnessSpec Parse(std::string_view text);
  std::string ToString() const;
};

RougeVariant ParseRougeVariant(std::string_view text);
std::string_view RougeVariantName(RougeVariant v);

// Lowercase, drop punctuation, split on whitespace.
std::vector<std::string> Normalize(std::string_view text);

double RougeN(const std::vector<std::string>& candidate,
              const std::vector<std::string>& reference, int n,
              RougeVariant variant = RougeVariant::kF1);

std::size_t LcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b);

double RougeL(const std::vector<std::string>& candidate,
              const std::vector<std::string>& reference,
              RougeVariant variant = RougeVariant::kF1);

// Scores a single (candidate, reference) pair of raw strings.
double ScorePair(std::string_view candidate, std::string_view reference,
                 const CorrectnessSpec& spec);

// Correctness of the record's primary response: max over references, or the
// stored value for precomputed scores. Zero references score 0 and append a
// warning when `warnings` is given.
double Score(const records::GenerationRecord& record, const CorrectnessSpec& spec,
             std::vector<std::string>* warnings = nullptr);

// 1 iff a >= tau.
inline int Binarize(double a, double tau) { return a >= tau ? 1 : 0; }

}  // namespace rankcal::correctness
