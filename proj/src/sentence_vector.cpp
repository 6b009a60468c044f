#include "sieve/sentence_vector.hpp"

#include <algorithm>
#include <cmath>

#include "sieve/error.hpp"

namespace sieve {

std::vector<double> low_frequency_mean(const EmbeddingModel& model) {
  std::vector<double> mean(model.dim(), 0.0);
  const std::size_t n = model.size();
  if (n == 0) return mean;
  const std::size_t take = std::max<std::size_t>(1, n / 10);
  for (std::size_t i = n - take; i < n; ++i) {
    const auto v = model.vector(static_cast<std::int32_t>(i));
    for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += v[d];
  }
  for (double& x : mean) x /= static_cast<double>(take);
  return mean;
}

SentenceEncoder::SentenceEncoder(const EmbeddingModel& model, OovPolicy policy)
    : model_(&model), policy_(policy) {
  if (policy_ == OovPolicy::LowFreqAverage) low_freq_mean_ = sieve::low_frequency_mean(model);
}

SentenceVector SentenceEncoder::encode(std::span<const std::string> tokens) const {
  SentenceVector out;
  out.values.assign(model_->dim(), 0.0);
  std::vector<std::int32_t> ids;
  ids.reserve(tokens.size());
  std::size_t oov = 0;
  for (const auto& token : tokens) {
    if (auto id = model_->vocab().find(token)) {
      ids.push_back(*id);
    } else {
      ++oov;
    }
  }
  out.n_in_vocab = ids.size();
  out.degenerate = ids.empty();
  if (out.degenerate) return out;

  std::sort(ids.begin(), ids.end());
  for (std::int32_t id : ids) {
    const auto v = model_->vector(id);
    for (std::size_t d = 0; d < out.values.size(); ++d) out.values[d] += v[d];
  }
  std::size_t denominator = ids.size();
  if (policy_ != OovPolicy::Ignore) {
    denominator += oov;
    if (policy_ == OovPolicy::LowFreqAverage) {
      for (std::size_t k = 0; k < oov; ++k) {
        for (std::size_t d = 0; d < out.values.size(); ++d) out.values[d] += low_freq_mean_[d];
      }
    }
  }
  for (double& x : out.values) x /= static_cast<double>(denominator);
  return out;
}

SentenceVector vectorize(std::span<const std::string> tokens, const EmbeddingModel& model,
                         OovPolicy policy) {
  return SentenceEncoder(model, policy).encode(tokens);
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DataError("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  na = std::sqrt(na);
  nb = std::sqrt(nb);
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  return std::clamp(dot / (na * nb), -1.0, 1.0);
}

}  // namespace sieve
