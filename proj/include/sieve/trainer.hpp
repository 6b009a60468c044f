#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sieve/embedding.hpp"
#include "sieve/random.hpp"
#include "sieve/text.hpp"

namespace sieve {

// Skip-gram training parameters. Defaults are the settings used for the
// Stack Exchange / Stack Overflow models.
struct TrainingConfig {
  int window = 5;
  int dim = 300;
  int negatives = 10;
  std::int64_t min_count = 5;
  int epochs = 5;
  int chunk_size = 50;  // sentences handed to a worker at a time
  double initial_lr = 0.025;
  std::uint64_t seed = 1;
  int workers = 1;
  // Frequent-word subsampling threshold; 0 disables it (the default).
  double subsample = 0.0;

  // Throws DataError describing the first violated constraint.
  void validate() const;
};

// Unigram^0.75 distribution used to draw negative samples.
class NegativeSamplingTable {
 public:
  explicit NegativeSamplingTable(std::span<const std::int64_t> counts, double power = 0.75);

  // Maps u in [0, 1) to an index by inverse-CDF lookup.
  std::int32_t sample(double u) const;
  std::int32_t sample(Rng& rng) const { return sample(rng.uniform()); }

  double probability(std::int32_t index) const;
  std::size_t size() const noexcept { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;  // cumulative_[i] = P(index <= i); back() == 1
};

// Holds the full training state (vocabulary, input and output matrices) so
// callers can inspect the context matrix before releasing the published
// model.
class SgnsTrainer {
 public:
  // Builds the vocabulary and initializes the matrices: input rows uniform in
  // [-0.5/dim, 0.5/dim], output rows zero.
  SgnsTrainer(std::span<const CleanSentence> corpus, TrainingConfig config);

  // Runs all configured epochs. With workers == 1 the result is a pure
  // function of (corpus, config). With more workers, OpenMP threads update
  // the shared matrices without locking and the result is nondeterministic.
  void train();

  const TrainingConfig& config() const noexcept { return config_; }
  const Vocabulary& vocab() const noexcept { return vocab_; }
  const DenseMatrix<float>& input_vectors() const noexcept { return input_; }
  const DenseMatrix<float>& output_vectors() const noexcept { return output_; }
  const NegativeSamplingTable& negative_table() const noexcept { return table_; }

  // Total number of (center, context) updates scheduled over all epochs.
  std::uint64_t scheduled_updates() const noexcept { return scheduled_updates_; }

  double learning_rate(std::uint64_t step) const;

  EmbeddingModel release() &&;

 private:
  // Returns the number of pairs processed.
  std::uint64_t train_sentence(std::span<const std::int32_t> sentence, Rng& rng,
                               std::uint64_t step, std::vector<std::int32_t>& negatives,
                               std::vector<std::int32_t>& kept, std::vector<double>& scratch);
  void train_serial();
  void train_parallel();

  TrainingConfig config_;
  Vocabulary vocab_;
  std::vector<std::vector<std::int32_t>> encoded_;
  NegativeSamplingTable table_;
  DenseMatrix<float> input_;
  DenseMatrix<float> output_;
  std::uint64_t pairs_per_epoch_ = 0;
  std::uint64_t scheduled_updates_ = 0;
};

// Number of (center, context) pairs in a sentence of `length` tokens with a
// fixed window.
std::uint64_t pairs_in_sentence(std::size_t length, int window);

EmbeddingModel train(std::span<const CleanSentence> corpus, const TrainingConfig& config);

}  // namespace sieve
