#include "sieve/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sieve/error.hpp"
#include "sieve/sgns.hpp"

namespace sieve {

namespace {

constexpr double kFinalLrFraction = 1e-4;
constexpr int kCollisionRetries = 8;

std::uint64_t chunk_seed(std::uint64_t seed, int epoch, std::size_t chunk) {
  return Rng::mix(Rng::mix(seed ^ 0x5eedULL) + static_cast<std::uint64_t>(epoch) * 0x100000001ULL +
                  chunk);
}

}  // namespace

void TrainingConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw DataError(std::string("invalid training config: ") + what);
  };
  require(window >= 1, "window must be >= 1");
  require(dim >= 1, "dim must be >= 1");
  require(negatives >= 1, "negatives must be >= 1");
  require(min_count >= 1, "min_count must be >= 1");
  require(epochs >= 1, "epochs must be >= 1");
  require(chunk_size >= 1, "chunk_size must be >= 1");
  require(initial_lr > 0.0 && std::isfinite(initial_lr), "initial_lr must be > 0");
  require(workers >= 1, "workers must be >= 1");
  require(subsample >= 0.0, "subsample must be >= 0");
}

NegativeSamplingTable::NegativeSamplingTable(std::span<const std::int64_t> counts, double power) {
  if (counts.empty()) throw DataError("negative sampling table: empty vocabulary");
  cumulative_.resize(counts.size());
  const bool all_zero =
      std::all_of(counts.begin(), counts.end(), [](std::int64_t c) { return c <= 0; });
  double total = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    total += all_zero ? 1.0 : std::pow(static_cast<double>(std::max<std::int64_t>(counts[i], 0)), power);
    cumulative_[i] = total;
  }
  for (double& c : cumulative_) c /= total;
  cumulative_.back() = 1.0;
}

std::int32_t NegativeSamplingTable::sample(double u) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  return static_cast<std::int32_t>(it - cumulative_.begin());
}

double NegativeSamplingTable::probability(std::int32_t index) const {
  const auto i = static_cast<std::size_t>(index);
  return i == 0 ? cumulative_[0] : cumulative_[i] - cumulative_[i - 1];
}

std::uint64_t pairs_in_sentence(std::size_t length, int window) {
  std::uint64_t pairs = 0;
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t i = 0; i < length; ++i) {
    const std::size_t left = std::min(i, w);
    const std::size_t right = std::min(length - 1 - i, w);
    pairs += left + right;
  }
  return pairs;
}

SgnsTrainer::SgnsTrainer(std::span<const CleanSentence> corpus, TrainingConfig config)
    : config_(config),
      vocab_((config.validate(), Vocabulary::build(corpus, config.min_count))),
      table_(vocab_.counts()) {
  for (const auto& sentence : corpus) {
    std::vector<std::int32_t> ids;
    ids.reserve(sentence.tokens.size());
    for (const auto& token : sentence.tokens) {
      if (auto id = vocab_.find(token)) ids.push_back(*id);
    }
    // Sentences with fewer than two in-vocabulary tokens have no pairs.
    if (ids.size() >= 2) {
      pairs_per_epoch_ += pairs_in_sentence(ids.size(), config_.window);
      encoded_.push_back(std::move(ids));
    }
  }
  scheduled_updates_ = pairs_per_epoch_ * static_cast<std::uint64_t>(config_.epochs);

  const auto dim = static_cast<std::size_t>(config_.dim);
  input_ = DenseMatrix<float>(vocab_.size(), dim);
  output_ = DenseMatrix<float>(vocab_.size(), dim, 0.0f);
  Rng init(config_.seed);
  const double half_range = 0.5 / static_cast<double>(dim);
  for (float& x : input_.data()) x = static_cast<float>(init.uniform(-half_range, half_range));
}

double SgnsTrainer::learning_rate(std::uint64_t step) const {
  if (scheduled_updates_ == 0) return config_.initial_lr;
  const double progress =
      std::min(1.0, static_cast<double>(step) / static_cast<double>(scheduled_updates_));
  return config_.initial_lr * (1.0 - (1.0 - kFinalLrFraction) * progress);
}

std::uint64_t SgnsTrainer::train_sentence(std::span<const std::int32_t> sentence, Rng& rng,
                                          std::uint64_t step,
                                          std::vector<std::int32_t>& negatives,
                                          std::vector<std::int32_t>& kept,
                                          std::vector<double>& scratch) {
  std::span<const std::int32_t> tokens = sentence;
  if (config_.subsample > 0.0) {
    const double threshold = config_.subsample * static_cast<double>(vocab_.total_tokens());
    kept.clear();
    for (std::int32_t id : sentence) {
      const double freq = static_cast<double>(vocab_.count(id));
      const double keep = (std::sqrt(freq / threshold) + 1.0) * threshold / freq;
      if (keep >= 1.0 || rng.uniform() < keep) kept.push_back(id);
    }
    tokens = kept;
  }
  const auto len = static_cast<std::ptrdiff_t>(tokens.size());
  if (len < 2) return 0;

  std::uint64_t done = 0;
  for (std::ptrdiff_t i = 0; i < len; ++i) {
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - config_.window);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, i + config_.window);
    for (std::ptrdiff_t j = lo; j <= hi; ++j) {
      if (j == i) continue;
      const std::int32_t context = tokens[static_cast<std::size_t>(j)];
      negatives.clear();
      for (int k = 0; k < config_.negatives; ++k) {
        std::int32_t draw = table_.sample(rng);
        for (int retry = 0; draw == context && retry < kCollisionRetries; ++retry) {
          draw = table_.sample(rng);
        }
        if (draw != context) negatives.push_back(draw);
      }
      const SgnsPair pair{tokens[static_cast<std::size_t>(i)], context, negatives};
      detail::sgns_step_unchecked(input_, output_, pair, learning_rate(step + done), scratch);
      ++done;
    }
  }
  return done;
}

void SgnsTrainer::train_serial() {
  const std::size_t chunk = static_cast<std::size_t>(config_.chunk_size);
  std::vector<std::int32_t> negatives;
  std::vector<std::int32_t> kept;
  std::vector<double> scratch(detail::sgns_scratch_size(input_.cols(),
                                                        static_cast<std::size_t>(config_.negatives)));
  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    std::uint64_t step = static_cast<std::uint64_t>(epoch) * pairs_per_epoch_;
    for (std::size_t begin = 0; begin < encoded_.size(); begin += chunk) {
      Rng rng(chunk_seed(config_.seed, epoch, begin / chunk));
      const std::size_t end = std::min(encoded_.size(), begin + chunk);
      for (std::size_t s = begin; s < end; ++s) {
        train_sentence(encoded_[s], rng, step, negatives, kept, scratch);
        step += pairs_in_sentence(encoded_[s].size(), config_.window);
      }
    }
  }
}

// Lock-free parallel variant: workers share input_/output_ and may overwrite
// each other's updates. Each chunk draws from its own seeded stream and uses
// the learning rate of its position in the serial schedule.
void SgnsTrainer::train_parallel() {
  const std::size_t chunk = static_cast<std::size_t>(config_.chunk_size);
  const std::size_t n_chunks = (encoded_.size() + chunk - 1) / chunk;
  std::vector<std::uint64_t> chunk_offset(n_chunks + 1, 0);
  for (std::size_t c = 0; c < n_chunks; ++c) {
    std::uint64_t pairs = 0;
    for (std::size_t s = c * chunk; s < std::min(encoded_.size(), (c + 1) * chunk); ++s) {
      pairs += pairs_in_sentence(encoded_[s].size(), config_.window);
    }
    chunk_offset[c + 1] = chunk_offset[c] + pairs;
  }
  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
#pragma omp parallel num_threads(config_.workers)
    {
      std::vector<std::int32_t> negatives;
      std::vector<std::int32_t> kept;
      std::vector<double> scratch(detail::sgns_scratch_size(
          input_.cols(), static_cast<std::size_t>(config_.negatives)));
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
        const auto cu = static_cast<std::size_t>(c);
        Rng rng(chunk_seed(config_.seed, epoch, cu));
        std::uint64_t step = static_cast<std::uint64_t>(epoch) * pairs_per_epoch_ + chunk_offset[cu];
        const std::size_t end = std::min(encoded_.size(), (cu + 1) * chunk);
        for (std::size_t s = cu * chunk; s < end; ++s) {
          train_sentence(encoded_[s], rng, step, negatives, kept, scratch);
          step += pairs_in_sentence(encoded_[s].size(), config_.window);
        }
      }
    }
  }
}

void SgnsTrainer::train() {
  if (config_.workers == 1) {
    train_serial();
  } else {
    train_parallel();
  }
}

EmbeddingModel SgnsTrainer::release() && {
  return EmbeddingModel(std::move(vocab_), std::move(input_));
}

EmbeddingModel train(std::span<const CleanSentence> corpus, const TrainingConfig& config) {
  SgnsTrainer trainer(corpus, config);
  trainer.train();
  return std::move(trainer).release();
}

}  // namespace sieve
