#include <doctest.h>

#include <cmath>

#include "sieve/error.hpp"
#include "sieve/sgns.hpp"
#include "sieve/trainer.hpp"
#include "synthetic.hpp"

using namespace sieve;

namespace {

double cosine(std::span<const float> a, std::span<const float> b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += double(a[i]) * b[i];
    na += double(a[i]) * a[i];
    nb += double(b[i]) * b[i];
  }
  return dot / std::sqrt(na * nb);
}

std::vector<CleanSentence> planted_corpus(std::uint64_t seed, std::size_t per_topic) {
  Rng rng(seed);
  testing::PlantedTopics topics;
  auto c = topics.corpus(rng, true, per_topic, "a");
  auto b = topics.corpus(rng, false, per_topic, "b");
  c.insert(c.end(), b.begin(), b.end());
  shuffle(c, rng);
  return c;
}

// Mean SGNS loss over a fixed sample of pairs with fixed negatives.
double sampled_loss(const SgnsTrainer& t, const std::vector<CleanSentence>& corpus) {
  Rng rng(77);
  const auto& v = t.vocab();
  double total = 0.0;
  int n = 0;
  std::vector<std::int32_t> neg;
  for (std::size_t s = 0; s < corpus.size(); s += 7) {
    const auto& tok = corpus[s].tokens;
    for (std::size_t i = 0; i + 1 < tok.size(); ++i) {
      auto c = v.find(tok[i]);
      auto x = v.find(tok[i + 1]);
      if (!c || !x) continue;
      neg.clear();
      while (neg.size() < 5) {
        const auto d = t.negative_table().sample(rng);
        if (d != *x) neg.push_back(d);
      }
      total += sgns_pair_loss(t.input_vectors(), t.output_vectors(), {*c, *x, neg});
      ++n;
    }
  }
  return total / n;
}

}  // namespace

TEST_CASE("config validation") {
  TrainingConfig c;
  CHECK_NOTHROW(c.validate());
  auto bad = [](auto mutate) {
    TrainingConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), DataError);
  };
  bad([](TrainingConfig& c) { c.window = 0; });
  bad([](TrainingConfig& c) { c.dim = 0; });
  bad([](TrainingConfig& c) { c.negatives = 0; });
  bad([](TrainingConfig& c) { c.min_count = 0; });
  bad([](TrainingConfig& c) { c.epochs = 0; });
  bad([](TrainingConfig& c) { c.chunk_size = 0; });
  bad([](TrainingConfig& c) { c.initial_lr = 0; });
  bad([](TrainingConfig& c) { c.initial_lr = NAN; });
  bad([](TrainingConfig& c) { c.workers = 0; });
  bad([](TrainingConfig& c) { c.subsample = -1; });
}

TEST_CASE("pairs_in_sentence") {
  CHECK(pairs_in_sentence(0, 5) == 0);
  CHECK(pairs_in_sentence(1, 5) == 0);
  CHECK(pairs_in_sentence(2, 1) == 2);
  CHECK(pairs_in_sentence(5, 1) == 8);
  CHECK(pairs_in_sentence(5, 2) == 14);
  CHECK(pairs_in_sentence(4, 10) == 12);
}

TEST_CASE("negative table follows count^0.75") {
  const std::vector<std::int64_t> counts = {16, 1, 81};
  const NegativeSamplingTable t(counts);
  const double z = 8.0 + 1.0 + 27.0;
  CHECK(t.probability(0) == doctest::Approx(8.0 / z));
  CHECK(t.probability(1) == doctest::Approx(1.0 / z));
  CHECK(t.probability(2) == doctest::Approx(27.0 / z));
  CHECK(t.sample(0.0) == 0);
  CHECK(t.sample(8.0 / z - 1e-9) == 0);
  CHECK(t.sample(8.0 / z + 1e-9) == 1);
  CHECK(t.sample(0.999999) == 2);

  Rng rng(4);
  std::vector<int> hits(3);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++hits[static_cast<std::size_t>(t.sample(rng))];
  for (int i = 0; i < 3; ++i) CHECK(hits[i] / double(n) == doctest::Approx(t.probability(i)).epsilon(0.02));

  const std::vector<std::int64_t> zeros = {0, 0};
  CHECK(NegativeSamplingTable(zeros).probability(1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(NegativeSamplingTable(std::span<const std::int64_t>{}), DataError);
}

TEST_CASE("learning rate decays linearly to lr0 * 1e-4") {
  const std::vector<CleanSentence> corpus = {normalize("a b c"), normalize("a b c")};
  TrainingConfig c;
  c.min_count = 1;
  c.dim = 4;
  c.window = 1;
  c.epochs = 2;
  c.initial_lr = 0.5;
  const SgnsTrainer t(corpus, c);
  REQUIRE(t.scheduled_updates() == 2 * 2 * 4);
  CHECK(t.learning_rate(0) == 0.5);
  CHECK(t.learning_rate(8) == doctest::Approx(0.5 * (1 - (1 - 1e-4) * 0.5)));
  CHECK(t.learning_rate(16) == doctest::Approx(0.5e-4));
  CHECK(t.learning_rate(1000) == doctest::Approx(0.5e-4));
}

TEST_CASE("initialization ranges") {
  const auto corpus = planted_corpus(1, 100);
  TrainingConfig c;
  c.dim = 10;
  c.min_count = 1;
  const SgnsTrainer t(corpus, c);
  float lo = 1, hi = -1;
  for (float x : t.input_vectors().data()) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  CHECK(lo >= -0.05f);
  CHECK(hi <= 0.05f);
  CHECK(hi - lo > 0.08f);
  for (float x : t.output_vectors().data()) CHECK(x == 0.0f);
}

TEST_CASE("single-worker training is deterministic") {
  const std::vector<CleanSentence> tiny = {normalize("a b")};
  TrainingConfig c;
  c.dim = 2;
  c.window = 1;
  c.min_count = 1;
  c.seed = 42;
  const auto m1 = train(tiny, c);
  const auto m2 = train(tiny, c);
  CHECK(m1 == m2);
  CHECK(m1.size() == 2);
  c.seed = 43;
  CHECK_FALSE(train(tiny, c) == m1);

  const auto corpus = planted_corpus(2, 200);
  c = TrainingConfig{};
  c.dim = 16;
  c.epochs = 2;
  CHECK(train(corpus, c) == train(corpus, c));
}

TEST_CASE("sentences with fewer than two in-vocabulary tokens cause no update") {
  std::vector<CleanSentence> corpus = {normalize("a b"), normalize("a"), normalize("b c")};
  TrainingConfig c;
  c.dim = 3;
  c.window = 2;
  c.min_count = 2;  // c is dropped, so only "a b" trains
  SgnsTrainer t(corpus, c);
  CHECK(t.scheduled_updates() == 2 * 5);

  const std::vector<CleanSentence> singles = {normalize("a"), normalize("a")};
  SgnsTrainer idle(singles, c);
  const auto before = idle.input_vectors();
  idle.train();
  CHECK(idle.scheduled_updates() == 0);
  CHECK(idle.input_vectors() == before);
}

TEST_CASE("planted topics separate in the embedding space") {
  const auto corpus = planted_corpus(3, 1500);
  TrainingConfig c;
  c.dim = 24;
  c.epochs = 3;
  c.negatives = 5;
  SgnsTrainer t(corpus, c);
  const double loss_before = sampled_loss(t, corpus);
  t.train();
  const double loss_after = sampled_loss(t, corpus);
  CHECK(loss_after < loss_before);
  const auto model = std::move(t).release();

  testing::PlantedTopics topics;
  double intra = 0, inter = 0;
  int n_intra = 0, n_inter = 0;
  for (std::size_t i = 0; i < 15; ++i) {
    for (std::size_t j = 0; j < 15; ++j) {
      if (i != j) {
        intra += cosine(*model.find(topics.a_core[i]), *model.find(topics.a_core[j]));
        intra += cosine(*model.find(topics.b_core[i]), *model.find(topics.b_core[j]));
        n_intra += 2;
      }
      inter += cosine(*model.find(topics.a_core[i]), *model.find(topics.b_core[j]));
      ++n_inter;
    }
  }
  CHECK(intra / n_intra > inter / n_inter + 0.2);

  for (std::size_t i = 0; i < 5; ++i) {
    const auto nn = nearest_neighbors(model, topics.a_core[i], 1);
    CHECK(nn[0].first.starts_with("code"));
  }
}

TEST_CASE("multi-worker training produces finite vectors") {
  const auto corpus = planted_corpus(4, 300);
  TrainingConfig c;
  c.dim = 8;
  c.workers = 2;
  c.chunk_size = 10;
  const auto m = train(corpus, c);
  for (float x : m.input_vectors().data()) CHECK(std::isfinite(x));
}
