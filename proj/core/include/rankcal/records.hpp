#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rankcal::records {

using Matrix = std::vector<std::vector<double>>;

struct ResponseSample {
  std::string text;
  std::vector<double> token_logprobs;  // nats
  std::optional<int> cluster_id;
  std::optional<double> verbalized_confidence;
  std::map<std::string, double> correctness;  // precomputed scores by name
  // Extension used by synthetic datasets: a measure value carried verbatim.
  std::optional<double> measure_value;

  bool operator==(const ResponseSample&) const = default;
};

struct GenerationRecord {
  std::string id;
  std::string question;
  std::vector<std::string> references;
  std::vector<ResponseSample> responses;
  std::optional<Matrix> affinity;  // always symmetric once ingested
  std::size_t primary_response_index = 0;

  const ResponseSample& primary() const { return responses.at(primary_response_index); }

  bool operator==(const GenerationRecord&) const = default;
};

struct Dataset {
  std::vector<GenerationRecord> records;
  std::map<std::string, std::string> meta;
  // Non-fatal ingest diagnostics, e.g. positive token logprobs.
  std::vector<std::string> warnings;
};

// Entry (i, j) becomes the mean of the two directed scores. Throws NotSquare.
Matrix SymmetrizeAffinity(const Matrix& raw);

// Checks record invariants; `line` is only used in messages (0 = unknown).
void ValidateRecord(const GenerationRecord& record, std::size_t line = 0);

// Newline-delimited JSON, one record per line. Blank lines are skipped. An
// optional first line of the form {"meta": {...}} fills Dataset::meta.
Dataset ParseJsonl(std::istream& in);
Dataset ParseJsonlFile(const std::string& path);

std::string SerializeJsonl(const Dataset& dataset);
void WriteJsonlFile(const Dataset& dataset, const std::string& path);

}  // namespace rankcal::records
