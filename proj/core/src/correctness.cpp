#include "rankcal/correctness.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "rankcal/error.hpp"

namespace rankcal::correctness {
namespace {

double Combine(std::size_t matched, std::size_t cand_len, std::size_t ref_len,
               RougeVariant variant) {
  if (cand_len == 0 && ref_len == 0) return 1.0;
  if (matched == 0) return 0.0;
  const double recall = static_cast<double>(matched) / static_cast<double>(ref_len);
  if (variant == RougeVariant::kRecall) return recall;
  const double precision = static_cast<double>(matched) / static_cast<double>(cand_len);
  return 2.0 * precision * recall / (precision + recall);
}

std::map<std::vector<std::string>, std::size_t> NGramCounts(
    const std::vector<std::string>& tokens, int n) {
  std::map<std::vector<std::string>, std::size_t> counts;
  const auto len = static_cast<std::size_t>(n);
  if (tokens.size() < len) return counts;
  for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + i, tokens.begin() + i + len)];
  }
  return counts;
}

}  // namespace

CorrectnessSpec CorrectnessSpec::Parse(std::string_view text) {
  CorrectnessSpec spec;
  if (text == "rougeL") {
    spec.kind = Kind::kRougeL;
  } else if (text == "rouge1") {
    spec.kind = Kind::kRouge1;
  } else if (text == "exact") {
    spec.kind = Kind::kExactMatch;
  } else if (text.starts_with("pre:") && text.size() > 4) {
    spec.kind = Kind::kPrecomputed;
    spec.precomputed_name = std::string(text.substr(4));
  } else {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown correctness spec '" + std::string(text) + "'");
  }
  return spec;
}

std::string CorrectnessSpec::ToString() const {
  switch (kind) {
    case Kind::kRougeL: return "rougeL";
    case Kind::kRouge1: return "rouge1";
    case Kind::kExactMatch: return "exact";
    case Kind::kPrecomputed: return "pre:" + precomputed_name;
  }
  return "";
}

RougeVariant ParseRougeVariant(std::string_view text) {
  if (text == "f1") return RougeVariant::kF1;
  if (text == "recall") return RougeVariant::kRecall;
  throw Error(ErrorCode::kInvalidArgument, "unknown rouge variant '" + std::string(text) + "'");
}

std::string_view RougeVariantName(RougeVariant v) {
  return v == RougeVariant::kRecall ? "recall" : "f1";
}

std::vector<std::string> Normalize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
    } else if (!std::ispunct(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double RougeN(const std::vector<std::string>& candidate,
              const std::vector<std::string>& reference, int n, RougeVariant variant) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "rouge n must be >= 1");
  const auto cand = NGramCounts(candidate, n);
  const auto ref = NGramCounts(reference, n);
  std::size_t cand_total = 0;
  std::size_t ref_total = 0;
  std::size_t matched = 0;
  for (const auto& [gram, c] : cand) cand_total += c;
  for (const auto& [gram, c] : ref) {
    ref_total += c;
    if (auto it = cand.find(gram); it != cand.end()) matched += std::min(c, it->second);
  }
  return Combine(matched, cand_total, ref_total, variant);
}

std::size_t LcsLength(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0);
  std::vector<std::size_t> cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double RougeL(const std::vector<std::string>& candidate,
              const std::vector<std::string>& reference, RougeVariant variant) {
  return Combine(LcsLength(candidate, reference), candidate.size(), reference.size(), variant);
}

double ScorePair(std::string_view candidate, std::string_view reference,
                 const CorrectnessSpec& spec) {
  const auto c = Normalize(candidate);
  const auto r = Normalize(reference);
  switch (spec.kind) {
    case Kind::kRougeL: return RougeL(c, r, spec.variant);
    case Kind::kRouge1: return RougeN(c, r, 1, spec.variant);
    case Kind::kExactMatch: return c == r ? 1.0 : 0.0;
    case Kind::kPrecomputed: break;
  }
  throw Error(ErrorCode::kInvalidArgument, "precomputed scores have no pairwise form");
}

double Score(const records::GenerationRecord& record, const CorrectnessSpec& spec,
             std::vector<std::string>* warnings) {
  const auto& response = record.primary();
  if (spec.kind == Kind::kPrecomputed) {
    auto it = response.correctness.find(spec.precomputed_name);
    if (it == response.correctness.end()) {
      throw Error(ErrorCode::kMissingPrecomputed,
                  "'" + spec.precomputed_name + "' in record '" + record.id + "'");
    }
    return it->second;
  }
  if (record.references.empty()) {
    if (warnings) warnings->push_back("record '" + record.id + "' has no references");
    return 0.0;
  }
  double best = 0.0;
  for (const auto& ref : record.references) {
    best = std::max(best, ScorePair(response.text, ref, spec));
  }
  return best;
}

}  // namespace rankcal::correctness
