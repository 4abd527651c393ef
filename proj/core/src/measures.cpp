#include "rankcal/measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include <Eigen/Dense>

#include "rankcal/error.hpp"

namespace rankcal::measures {
namespace {

using records::GenerationRecord;
using records::Matrix;

const std::vector<double>& Logprobs(const GenerationRecord& record, std::size_t k) {
  const auto& lp = record.responses.at(k).token_logprobs;
  if (lp.empty()) {
    throw Error(ErrorCode::kMissingLogprobs,
                "record '" + record.id + "' response " + std::to_string(k));
  }
  return lp;
}

double TotalLogLikelihood(const std::vector<double>& lp, bool length_normalized) {
  const double total = std::accumulate(lp.begin(), lp.end(), 0.0);
  return length_normalized ? total / static_cast<double>(lp.size()) : total;
}

const Matrix& RequireAffinity(const GenerationRecord& record) {
  if (!record.affinity) {
    throw Error(ErrorCode::kMissingAffinity, "record '" + record.id + "'");
  }
  return *record.affinity;
}

std::size_t CheckSquare(const Matrix& w) {
  for (const auto& row : w) {
    if (row.size() != w.size()) throw Error(ErrorCode::kNotSquare, "affinity matrix");
  }
  if (w.empty()) throw Error(ErrorCode::kInvalidArgument, "empty affinity matrix");
  return w.size();
}

}  // namespace

MeasureValue NegativeLogLikelihood(const GenerationRecord& record) {
  const auto& lp = Logprobs(record, record.primary_response_index);
  return {"nll", -TotalLogLikelihood(lp, false), Orientation::kUncertainty};
}

MeasureValue LengthNormalizedNll(const GenerationRecord& record) {
  const auto& lp = Logprobs(record, record.primary_response_index);
  return {"nll-ln", -TotalLogLikelihood(lp, true), Orientation::kUncertainty};
}

MeasureValue Perplexity(const GenerationRecord& record) {
  return {"perp", std::exp(LengthNormalizedNll(record).value), Orientation::kUncertainty};
}

MeasureValue PredictiveEntropy(const GenerationRecord& record, bool length_normalized) {
  double sum = 0.0;
  for (std::size_t k = 0; k < record.responses.size(); ++k) {
    sum += TotalLogLikelihood(Logprobs(record, k), length_normalized);
  }
  return {length_normalized ? "entropy-ln" : "entropy",
          -sum / static_cast<double>(record.responses.size()), Orientation::kUncertainty};
}

MeasureValue SemanticEntropy(const GenerationRecord& record, bool length_normalized) {
  const std::size_t k_total = record.responses.size();
  std::vector<double> loglik(k_total);
  std::vector<int> cluster(k_total);
  for (std::size_t k = 0; k < k_total; ++k) {
    const auto& s = record.responses[k];
    if (!s.cluster_id) {
      throw Error(ErrorCode::kMissingClusterId,
                  "record '" + record.id + "' response " + std::to_string(k));
    }
    cluster[k] = *s.cluster_id;
    loglik[k] = TotalLogLikelihood(Logprobs(record, k), length_normalized);
  }
  // Log-sum-exp per cluster and overall, shifted by the max for stability.
  const double shift = *std::max_element(loglik.begin(), loglik.end());
  std::map<int, double> cluster_mass;
  double total_mass = 0.0;
  for (std::size_t k = 0; k < k_total; ++k) {
    const double m = std::exp(loglik[k] - shift);
    cluster_mass[cluster[k]] += m;
    total_mass += m;
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < k_total; ++k) {
    sum += std::log(cluster_mass[cluster[k]] / total_mass);
  }
  // -0.0 when every response shares a cluster; report +0.
  const double value = -sum / static_cast<double>(k_total);
  return {length_normalized ? "se-ln" : "se", value == 0.0 ? 0.0 : value,
          Orientation::kUncertainty};
}

SpectralSummary SpectralDecompose(const Matrix& affinity, double diagonal_shift) {
  const std::size_t k = CheckSquare(affinity);
  Eigen::MatrixXd w(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) w(i, j) = affinity[i][j];
    w(i, i) += diagonal_shift;
  }
  SpectralSummary out;
  out.degrees.resize(k);
  Eigen::VectorXd inv_sqrt(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double d = w.row(i).sum();
    if (!(d > 0.0)) {
      throw Error(ErrorCode::kZeroDegreeRow, "row " + std::to_string(i));
    }
    out.degrees[i] = d;
    out.degree_trace += d;
    inv_sqrt(i) = 1.0 / std::sqrt(d);
  }
  const Eigen::MatrixXd laplacian = Eigen::MatrixXd::Identity(k, k) -
                                    inv_sqrt.asDiagonal() * w * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kInvalidArgument, "eigendecomposition did not converge");
  }
  out.eigenvalues.resize(k);
  out.eigenvectors.assign(k, std::vector<double>(k));
  for (std::size_t j = 0; j < k; ++j) {
    out.eigenvalues[j] = std::clamp(solver.eigenvalues()(j), 0.0, 2.0);
    for (std::size_t i = 0; i < k; ++i) out.eigenvectors[i][j] = solver.eigenvectors()(i, j);
  }
  return out;
}

MeasureValue EigenvalueSum(const SpectralSummary& summary) {
  double sum = 0.0;
  for (double lambda : summary.eigenvalues) sum += std::max(0.0, 1.0 - lambda);
  return {"eigv", sum, Orientation::kUncertainty};
}

MeasureValue DegreeUncertainty(const Matrix& affinity) {
  const std::size_t k = CheckSquare(affinity);
  double trace = 0.0;
  for (const auto& row : affinity) trace += std::accumulate(row.begin(), row.end(), 0.0);
  const double kk = static_cast<double>(k);
  return {"deg", 1.0 - trace / (kk * kk), Orientation::kUncertainty};
}

MeasureValue DegreeConfidence(const Matrix& affinity, std::size_t response_index) {
  const std::size_t k = CheckSquare(affinity);
  if (response_index >= k) {
    throw Error(ErrorCode::kInvalidArgument, "response index outside affinity matrix");
  }
  const auto& row = affinity[response_index];
  return {"cdeg", std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(k),
          Orientation::kConfidence};
}

MeasureValue Eccentricity(const SpectralSummary& summary, double eig_threshold) {
  const std::size_t k = summary.eigenvalues.size();
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < k; ++j) {
    if (summary.eigenvalues[j] < eig_threshold) cols.push_back(j);
  }
  double sq = 0.0;
  for (std::size_t c : cols) {
    double mean = 0.0;
    for (std::size_t i = 0; i < k; ++i) mean += summary.eigenvectors[i][c];
    mean /= static_cast<double>(k);
    for (std::size_t i = 0; i < k; ++i) {
      const double v = summary.eigenvectors[i][c] - mean;
      sq += v * v;
    }
  }
  return {"ecc", std::sqrt(sq), Orientation::kUncertainty};
}

MeasureValue VerbalizedConfidence(const GenerationRecord& record) {
  const auto& conf = record.primary().verbalized_confidence;
  if (!conf) throw Error(ErrorCode::kMissingConfidence, "record '" + record.id + "'");
  return {"verb", *conf, Orientation::kConfidence};
}

MeasureValue StoredValue(const GenerationRecord& record, Orientation orientation) {
  const auto& v = record.primary().measure_value;
  if (!v) throw Error(ErrorCode::kMissingMeasureValue, "record '" + record.id + "'");
  return {"value", *v, orientation};
}

namespace {

struct KindName {
  MeasureKind kind;
  std::string_view name;
};

constexpr KindName kKindNames[] = {
    {MeasureKind::kNll, "nll"},
    {MeasureKind::kNllLn, "nll-ln"},
    {MeasureKind::kPerplexity, "perp"},
    {MeasureKind::kEntropy, "entropy"},
    {MeasureKind::kEntropyLn, "entropy-ln"},
    {MeasureKind::kSemanticEntropy, "se"},
    {MeasureKind::kSemanticEntropyLn, "se-ln"},
    {MeasureKind::kEigV, "eigv"},
    {MeasureKind::kDeg, "deg"},
    {MeasureKind::kEcc, "ecc"},
    {MeasureKind::kCDeg, "cdeg"},
    {MeasureKind::kVerbalized, "verb"},
    {MeasureKind::kStoredValue, "value"},
};

}  // namespace

MeasureKind ParseMeasureKind(std::string_view name) {
  for (const auto& kn : kKindNames) {
    if (kn.name == name) return kn.kind;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown measure '" + std::string(name) + "'");
}

std::string_view MeasureKindName(MeasureKind kind) {
  for (const auto& kn : kKindNames) {
    if (kn.kind == kind) return kn.name;
  }
  return "?";
}

std::vector<MeasureKind> ParseMeasureList(std::string_view text) {
  std::vector<MeasureKind> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(',', start), text.size());
    const auto item = text.substr(start, end - start);
    if (!item.empty()) out.push_back(ParseMeasureKind(item));
    start = end + 1;
  }
  if (out.empty()) throw Error(ErrorCode::kInvalidArgument, "empty measure list");
  return out;
}

Orientation DefaultOrientation(MeasureKind kind) {
  return kind == MeasureKind::kCDeg || kind == MeasureKind::kVerbalized
             ? Orientation::kConfidence
             : Orientation::kUncertainty;
}

MeasureValue Compute(const GenerationRecord& record, MeasureKind kind,
                     const MeasureOptions& options) {
  switch (kind) {
    case MeasureKind::kNll: return NegativeLogLikelihood(record);
    case MeasureKind::kNllLn: return LengthNormalizedNll(record);
    case MeasureKind::kPerplexity: return Perplexity(record);
    case MeasureKind::kEntropy: return PredictiveEntropy(record, false);
    case MeasureKind::kEntropyLn: return PredictiveEntropy(record, true);
    case MeasureKind::kSemanticEntropy: return SemanticEntropy(record, false);
    case MeasureKind::kSemanticEntropyLn: return SemanticEntropy(record, true);
    case MeasureKind::kEigV:
      return EigenvalueSum(SpectralDecompose(RequireAffinity(record), options.laplacian_eps));
    case MeasureKind::kDeg: return DegreeUncertainty(RequireAffinity(record));
    case MeasureKind::kEcc:
      return Eccentricity(SpectralDecompose(RequireAffinity(record), options.laplacian_eps),
                          options.eig_threshold);
    case MeasureKind::kCDeg:
      return DegreeConfidence(RequireAffinity(record), record.primary_response_index);
    case MeasureKind::kVerbalized: return VerbalizedConfidence(record);
    case MeasureKind::kStoredValue: return StoredValue(record, options.stored_orientation);
  }
  throw Error(ErrorCode::kInvalidArgument, "unhandled measure kind");
}

}  // namespace rankcal::measures
