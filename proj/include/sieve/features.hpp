#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sieve/corpus_io.hpp"
#include "sieve/sentence_vector.hpp"

namespace sieve {

// Maps a comment's tokens to a dense feature vector. fit() sees only the
// training part of each cross-validation split.
class FeatureSpace {
 public:
  virtual ~FeatureSpace() = default;

  virtual void fit(std::span<const LabeledComment> training) = 0;
  virtual std::size_t dim() const = 0;
  virtual std::vector<double> features(std::span<const std::string> tokens) const = 0;
  virtual std::string name() const = 0;
};

// Averaged word vectors from a trained embedding. fit() is a no-op.
class EmbeddingFeatures final : public FeatureSpace {
 public:
  explicit EmbeddingFeatures(const EmbeddingModel& model, OovPolicy policy = OovPolicy::Ignore)
      : encoder_(model, policy) {}

  void fit(std::span<const LabeledComment>) override {}
  std::size_t dim() const override { return encoder_.dim(); }
  std::vector<double> features(std::span<const std::string> tokens) const override {
    return encoder_.encode(tokens).values;
  }
  std::string name() const override { return "embedding"; }

 private:
  SentenceEncoder encoder_;
};

// Words occurring in at least min_df comments, sorted. No stemming and no
// stopword removal.
std::vector<std::string> build_ntf_vocabulary(std::span<const LabeledComment> comments,
                                              std::size_t min_df = 2);

// Count of each vocabulary word divided by the comment's total token count.
// vocab must be sorted.
std::vector<double> normalized_tf_features(std::span<const std::string> tokens,
                                           std::span<const std::string> vocab);

class NormalizedTfFeatures final : public FeatureSpace {
 public:
  explicit NormalizedTfFeatures(std::size_t min_df = 2) : min_df_(min_df) {}

  void fit(std::span<const LabeledComment> training) override {
    vocab_ = build_ntf_vocabulary(training, min_df_);
  }
  std::size_t dim() const override { return vocab_.size(); }
  std::vector<double> features(std::span<const std::string> tokens) const override {
    return normalized_tf_features(tokens, vocab_);
  }
  std::string name() const override { return "ntf"; }

  const std::vector<std::string>& vocabulary() const noexcept { return vocab_; }

 private:
  std::size_t min_df_;
  std::vector<std::string> vocab_;
};

}  // namespace sieve
