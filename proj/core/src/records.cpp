#include "rankcal/records.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rankcal/error.hpp"

namespace rankcal::records {
namespace {

using nlohmann::json;

constexpr double kSymmetryTolerance = 1e-9;

std::string At(std::size_t line) {
  return line == 0 ? std::string() : " (line " + std::to_string(line) + ")";
}

[[noreturn]] void Schema(const std::string& field, std::size_t line,
                         const std::string& what = "has the wrong type") {
  throw Error(ErrorCode::kSchemaViolation, "field '" + field + "' " + what + At(line));
}

bool IsNull(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null();
}

double ReadNumber(const json& v, const std::string& field, std::size_t line) {
  if (!v.is_number()) Schema(field, line);
  return v.get<double>();
}

std::string ReadString(const json& obj, const char* key, std::size_t line, bool required) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    if (required) Schema(key, line, "is missing");
    return {};
  }
  if (!it->is_string()) Schema(key, line);
  return it->get<std::string>();
}

Matrix ReadMatrix(const json& v, const std::string& field, std::size_t line) {
  if (!v.is_array()) Schema(field, line);
  Matrix m;
  m.reserve(v.size());
  for (const auto& row : v) {
    if (!row.is_array()) Schema(field, line);
    std::vector<double>& out = m.emplace_back();
    out.reserve(row.size());
    for (const auto& x : row) out.push_back(ReadNumber(x, field, line));
  }
  return m;
}

ResponseSample ReadResponse(const json& r, std::size_t k, std::size_t line,
                            std::vector<std::string>& warnings, const std::string& id) {
  const std::string prefix = "responses[" + std::to_string(k) + "].";
  if (!r.is_object()) Schema("responses[" + std::to_string(k) + "]", line);
  ResponseSample s;
  if (!IsNull(r, "text")) {
    if (!r["text"].is_string()) Schema(prefix + "text", line);
    s.text = r["text"].get<std::string>();
  }
  if (!IsNull(r, "token_logprobs")) {
    const json& lp = r["token_logprobs"];
    if (!lp.is_array()) Schema(prefix + "token_logprobs", line);
    bool warned = false;
    for (const auto& x : lp) {
      const double v = ReadNumber(x, prefix + "token_logprobs", line);
      if (!std::isfinite(v)) Schema(prefix + "token_logprobs", line, "is not finite");
      if (v > 0.0 && !warned) {
        warnings.push_back("record '" + id + "' response " + std::to_string(k) +
                           ": positive token logprob" + At(line));
        warned = true;
      }
      s.token_logprobs.push_back(v);
    }
  }
  if (!IsNull(r, "cluster_id")) {
    const json& c = r["cluster_id"];
    if (!c.is_number_integer() || c.get<long long>() < 0) {
      Schema(prefix + "cluster_id", line, "must be a non-negative integer");
    }
    s.cluster_id = c.get<int>();
  }
  if (!IsNull(r, "verbalized_confidence")) {
    s.verbalized_confidence = ReadNumber(r["verbalized_confidence"],
                                         prefix + "verbalized_confidence", line);
  }
  if (!IsNull(r, "measure_value")) {
    s.measure_value = ReadNumber(r["measure_value"], prefix + "measure_value", line);
  }
  if (!IsNull(r, "correctness")) {
    const json& c = r["correctness"];
    if (!c.is_object()) Schema(prefix + "correctness", line);
    for (const auto& [name, value] : c.items()) {
      s.correctness[name] = ReadNumber(value, prefix + "correctness." + name, line);
    }
  }
  return s;
}

GenerationRecord ReadRecord(const json& obj, std::size_t line,
                            std::vector<std::string>& warnings) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kMalformedLine, "expected a JSON object" + At(line));
  }
  GenerationRecord rec;
  rec.id = ReadString(obj, "id", line, /*required=*/true);
  rec.question = ReadString(obj, "question", line, /*required=*/false);

  if (!IsNull(obj, "references")) {
    const json& refs = obj["references"];
    if (!refs.is_array()) Schema("references", line);
    for (const auto& r : refs) {
      if (!r.is_string()) Schema("references", line);
      rec.references.push_back(r.get<std::string>());
    }
  }

  if (IsNull(obj, "responses")) Schema("responses", line, "is missing");
  const json& responses = obj["responses"];
  if (!responses.is_array()) Schema("responses", line);
  for (std::size_t k = 0; k < responses.size(); ++k) {
    rec.responses.push_back(ReadResponse(responses[k], k, line, warnings, rec.id));
  }

  if (!IsNull(obj, "primary_response_index")) {
    const json& p = obj["primary_response_index"];
    if (!p.is_number_integer() || p.get<long long>() < 0) {
      Schema("primary_response_index", line, "must be a non-negative integer");
    }
    rec.primary_response_index = p.get<std::size_t>();
  }

  const bool has_sym = !IsNull(obj, "affinity");
  const bool has_dir = !IsNull(obj, "affinity_directed");
  if (has_sym && has_dir) {
    Schema("affinity_directed", line, "must not be combined with 'affinity'");
  }
  if (has_sym) {
    rec.affinity = ReadMatrix(obj["affinity"], "affinity", line);
  } else if (has_dir) {
    Matrix raw = ReadMatrix(obj["affinity_directed"], "affinity_directed", line);
    try {
      rec.affinity = SymmetrizeAffinity(raw);
    } catch (const Error&) {
      Schema("affinity_directed", line, "is not square");
    }
  }
  return rec;
}

json ToJson(const GenerationRecord& rec) {
  json responses = json::array();
  for (const auto& s : rec.responses) {
    json r;
    r["text"] = s.text;
    r["token_logprobs"] = s.token_logprobs;
    r["cluster_id"] = s.cluster_id ? json(*s.cluster_id) : json(nullptr);
    r["verbalized_confidence"] =
        s.verbalized_confidence ? json(*s.verbalized_confidence) : json(nullptr);
    r["correctness"] = json::object();
    for (const auto& [k, v] : s.correctness) r["correctness"][k] = v;
    if (s.measure_value) r["measure_value"] = *s.measure_value;
    responses.push_back(std::move(r));
  }
  json obj;
  obj["id"] = rec.id;
  obj["question"] = rec.question;
  obj["references"] = rec.references;
  obj["primary_response_index"] = rec.primary_response_index;
  obj["responses"] = std::move(responses);
  obj["affinity"] = rec.affinity ? json(*rec.affinity) : json(nullptr);
  return obj;
}

}  // namespace

Matrix SymmetrizeAffinity(const Matrix& raw) {
  const std::size_t k = raw.size();
  for (const auto& row : raw) {
    if (row.size() != k) {
      throw Error(ErrorCode::kNotSquare, "affinity matrix is not square");
    }
  }
  Matrix out(k, std::vector<double>(k));
  for (std::size_t i = 0; i < k; ++i) {
    out[i][i] = raw[i][i];
    for (std::size_t j = i + 1; j < k; ++j) {
      const double w = (raw[i][j] + raw[j][i]) / 2.0;
      out[i][j] = w;
      out[j][i] = w;
    }
  }
  return out;
}

void ValidateRecord(const GenerationRecord& rec, std::size_t line) {
  if (rec.responses.empty()) Schema("responses", line, "must hold at least one sample");
  if (rec.primary_response_index >= rec.responses.size()) {
    Schema("primary_response_index", line, "does not index a response");
  }
  for (std::size_t k = 0; k < rec.responses.size(); ++k) {
    const auto& s = rec.responses[k];
    const std::string prefix = "responses[" + std::to_string(k) + "].";
    if (s.verbalized_confidence &&
        !(*s.verbalized_confidence >= 0.0 && *s.verbalized_confidence <= 1.0)) {
      Schema(prefix + "verbalized_confidence", line, "must lie in [0,1]");
    }
    for (const auto& [name, v] : s.correctness) {
      if (!(v >= 0.0 && v <= 1.0)) {
        Schema(prefix + "correctness." + name, line, "must lie in [0,1]");
      }
    }
  }
  if (rec.affinity) {
    const Matrix& w = *rec.affinity;
    const std::size_t k = rec.responses.size();
    if (w.size() != k) Schema("affinity", line, "must have one row per response");
    for (const auto& row : w) {
      if (row.size() != k) Schema("affinity", line, "must be square");
      for (double x : row) {
        if (!(x >= 0.0 && x <= 1.0)) Schema("affinity", line, "entries must lie in [0,1]");
      }
    }
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = i + 1; j < k; ++j) {
        if (std::abs(w[i][j] - w[j][i]) > kSymmetryTolerance) {
          throw Error(ErrorCode::kAsymmetricAffinity, "record '" + rec.id + "'" + At(line));
        }
      }
    }
  }
}

Dataset ParseJsonl(std::istream& in) {
  Dataset ds;
  std::set<std::string> seen;
  std::string text;
  std::size_t line = 0;
  bool first_content = true;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::kMalformedLine, std::string(e.what()) + At(line));
    }
    const bool header = first_content && obj.is_object() && obj.size() == 1 &&
                        obj.contains("meta");
    first_content = false;
    if (header) {
      if (!obj["meta"].is_object()) Schema("meta", line);
      for (const auto& [k, v] : obj["meta"].items()) {
        ds.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
      }
      continue;
    }
    GenerationRecord rec = ReadRecord(obj, line, ds.warnings);
    ValidateRecord(rec, line);
    if (!seen.insert(rec.id).second) {
      throw Error(ErrorCode::kDuplicateId, "record id '" + rec.id + "'" + At(line));
    }
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

Dataset ParseJsonlFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path + "'");
  return ParseJsonl(in);
}

std::string SerializeJsonl(const Dataset& dataset) {
  std::ostringstream out;
  if (!dataset.meta.empty()) {
    json meta = json::object();
    for (const auto& [k, v] : dataset.meta) meta[k] = v;
    out << json{{"meta", meta}}.dump() << '\n';
  }
  for (const auto& rec : dataset.records) out << ToJson(rec).dump() << '\n';
  return out.str();
}

void WriteJsonlFile(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write '" + path + "'");
  out << SerializeJsonl(dataset);
}

}  // namespace rankcal::records
