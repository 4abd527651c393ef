#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankcal/records.hpp"
#include "rankcal/series.hpp"

namespace rankcal::measures {

struct MeasureValue {
  std::string name;
  double value = 0.0;
  Orientation orientation = Orientation::kUncertainty;
};

// Eigen-decomposition of the normalized graph Laplacian
// L = I - D^{-1/2} W D^{-1/2}, eigenvalues ascending and clamped into [0, 2].
struct SpectralSummary {
  std::vector<double> eigenvalues;
  records::Matrix eigenvectors;  // eigenvectors[row][col], column j pairs with eigenvalues[j]
  std::vector<double> degrees;
  double degree_trace = 0.0;
};

// Likelihood-based measures over the primary response.
MeasureValue NegativeLogLikelihood(const records::GenerationRecord& record);
MeasureValue LengthNormalizedNll(const records::GenerationRecord& record);
MeasureValue Perplexity(const records::GenerationRecord& record);

// Monte Carlo predictive entropy over all K sampled responses.
MeasureValue PredictiveEntropy(const records::GenerationRecord& record, bool length_normalized);

// Semantic entropy with cluster masses estimated from normalized sampled
// likelihoods: p(c) = sum_{j in c} exp(l_j) / sum_j exp(l_j), and the
// estimate -(1/K) sum_k log p(c_k).
MeasureValue SemanticEntropy(const records::GenerationRecord& record, bool length_normalized);

// `diagonal_shift` adds shift * I to W before normalizing.
SpectralSummary SpectralDecompose(const records::Matrix& affinity, double diagonal_shift = 0.0);

MeasureValue EigenvalueSum(const SpectralSummary& summary);
MeasureValue DegreeUncertainty(const records::Matrix& affinity);
MeasureValue DegreeConfidence(const records::Matrix& affinity, std::size_t response_index);

// Frobenius norm of the row-centred embedding formed by the eigenvectors
// whose eigenvalue is below `eig_threshold`.
MeasureValue Eccentricity(const SpectralSummary& summary, double eig_threshold = 0.9);

MeasureValue VerbalizedConfidence(const records::GenerationRecord& record);

// Passthrough of the primary response's measure_value extension field.
MeasureValue StoredValue(const records::GenerationRecord& record, Orientation orientation);

enum class MeasureKind {
  kNll, kNllLn, kPerplexity, kEntropy, kEntropyLn, kSemanticEntropy,
  kSemanticEntropyLn, kEigV, kDeg, kEcc, kCDeg, kVerbalized, kStoredValue,
};

MeasureKind ParseMeasureKind(std::string_view name);
std::string_view MeasureKindName(MeasureKind kind);
std::vector<MeasureKind> ParseMeasureList(std::string_view comma_separated);
Orientation DefaultOrientation(MeasureKind kind);

struct MeasureOptions {
  double eig_threshold = 0.9;
  double laplacian_eps = 0.0;
  // Orientation reported for kStoredValue.
  Orientation stored_orientation = Orientation::kUncertainty;
};

// Dispatches to the measure; throws rankcal::Error when the record lacks the
// fields the measure depends on.
MeasureValue Compute(const records::GenerationRecord& record, MeasureKind kind,
                     const MeasureOptions& options = {});

}  // namespace rankcal::measures
