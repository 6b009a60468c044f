#pragma once

#include <span>
#include <string>
#include <vector>

#include "sieve/embedding.hpp"

namespace sieve {

// How tokens missing from the embedding vocabulary are treated.
enum class OovPolicy {
  Ignore,          // skipped entirely
  ZeroVector,      // contribute a zero vector and count in the denominator
  LowFreqAverage,  // contribute the mean vector of the rarest 10% of the vocabulary
};

struct SentenceVector {
  std::vector<double> values;
  std::size_t n_in_vocab = 0;
  // No in-vocabulary token: values are all zero regardless of policy.
  bool degenerate = true;
};

// Averages word vectors into fixed-length sentence vectors. Contributions
// are summed in ascending vocabulary index, so the result does not depend on
// token order.
class SentenceEncoder {
 public:
  explicit SentenceEncoder(const EmbeddingModel& model, OovPolicy policy = OovPolicy::Ignore);

  SentenceVector encode(std::span<const std::string> tokens) const;

  const EmbeddingModel& model() const noexcept { return *model_; }
  OovPolicy policy() const noexcept { return policy_; }
  std::size_t dim() const noexcept { return model_->dim(); }
  const std::vector<double>& low_frequency_mean() const noexcept { return low_freq_mean_; }

 private:
  const EmbeddingModel* model_;
  OovPolicy policy_;
  std::vector<double> low_freq_mean_;
};

// Mean of the last max(1, V/10) rows; rows are ordered by descending frequency.
std::vector<double> low_frequency_mean(const EmbeddingModel& model);

SentenceVector vectorize(std::span<const std::string> tokens, const EmbeddingModel& model,
                         OovPolicy policy = OovPolicy::Ignore);

// Cosine similarity, clamped to [-1, 1]. Returns 0 when either vector has
// norm below 1e-12. Throws DataError on a dimension mismatch.
double cosine(std::span<const double> a, std::span<const double> b);
inline double cosine(const SentenceVector& a, const SentenceVector& b) {
  return cosine(a.values, b.values);
}

}  // namespace sieve
