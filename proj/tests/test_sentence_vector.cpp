#include <doctest.h>

#include "sieve/error.hpp"
#include "sieve/sentence_vector.hpp"
#include "synthetic.hpp"

using namespace sieve;

namespace {

// w_i = (i, 1, -i) for i = 0..9
EmbeddingModel ladder() {
  DenseMatrix<float> m(10, 3);
  for (std::size_t i = 0; i < 10; ++i) {
    m(i, 0) = float(i);
    m(i, 1) = 1.0f;
    m(i, 2) = -float(i);
  }
  return EmbeddingModel(Vocabulary::from_words(testing::word_list("w", 10)), std::move(m));
}

using Tokens = std::vector<std::string>;

}  // namespace

TEST_CASE("OOV policies") {
  const auto m = ladder();
  const Tokens t = {"w2", "zz", "w4"};

  const auto ignore = vectorize(t, m, OovPolicy::Ignore);
  CHECK(ignore.values == std::vector<double>{3, 1, -3});
  CHECK(ignore.n_in_vocab == 2);
  CHECK_FALSE(ignore.degenerate);

  const auto zero = vectorize(t, m, OovPolicy::ZeroVector);
  CHECK(zero.values == std::vector<double>{2, 2.0 / 3, -2});

  // Rarest 10% of 10 rows is the single row w9.
  const auto low = vectorize(t, m, OovPolicy::LowFreqAverage);
  CHECK(low.values == std::vector<double>{5, 1, -5});
  CHECK(low.n_in_vocab == 2);
}

TEST_CASE("no in-vocabulary token is degenerate under every policy") {
  const auto m = ladder();
  for (auto p : {OovPolicy::Ignore, OovPolicy::ZeroVector, OovPolicy::LowFreqAverage}) {
    for (const Tokens& t : {Tokens{}, Tokens{"x", "y"}}) {
      const auto v = vectorize(t, m, p);
      CHECK(v.degenerate);
      CHECK(v.n_in_vocab == 0);
      CHECK(v.values == std::vector<double>(3, 0.0));
    }
  }
}

TEST_CASE("low-frequency mean covers the last max(1, V/10) rows") {
  const auto m = ladder();
  CHECK(low_frequency_mean(m) == std::vector<double>{9, 1, -9});

  DenseMatrix<float> big(25, 1);
  for (std::size_t i = 0; i < 25; ++i) big(i, 0) = float(i);
  const EmbeddingModel b(Vocabulary::from_words(testing::word_list("w", 25)), big);
  CHECK(low_frequency_mean(b) == std::vector<double>{23.5});
}

TEST_CASE("policies agree when every token is in vocabulary") {
  const auto m = ladder();
  const Tokens t = {"w1", "w7", "w7", "w0"};
  const auto a = vectorize(t, m, OovPolicy::Ignore);
  CHECK(vectorize(t, m, OovPolicy::ZeroVector).values == a.values);
  CHECK(vectorize(t, m, OovPolicy::LowFreqAverage).values == a.values);
}

TEST_CASE("token order does not change the bits") {
  Rng rng(3);
  DenseMatrix<float> mat(200, 16);
  for (float& x : mat.data()) x = float(testing::normal(rng));
  const EmbeddingModel m(Vocabulary::from_words(testing::word_list("w", 200)), mat);
  const SentenceEncoder enc(m, OovPolicy::LowFreqAverage);
  for (int trial = 0; trial < 50; ++trial) {
    Tokens t;
    for (int i = 0; i < 30; ++i) t.push_back("w" + std::to_string(rng.below(260)));
    const auto v = enc.encode(t);
    shuffle(t, rng);
    CHECK(enc.encode(t).values == v.values);
  }
}

TEST_CASE("cosine") {
  const std::vector<double> a = {1, 0};
  const std::vector<double> b = {1, 1};
  CHECK(cosine(a, b) == doctest::Approx(0.70710678).epsilon(1e-8));
  CHECK(cosine(a, a) == 1.0);
  const std::vector<double> neg = {-2, 0};
  CHECK(cosine(a, neg) == -1.0);
  CHECK(cosine(a, std::vector<double>{0, 0}) == 0.0);
  CHECK(cosine(a, std::vector<double>{1e-13, 0}) == 0.0);
  CHECK_THROWS_AS(cosine(a, std::vector<double>{1, 2, 3}), DataError);

  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x(5), y(5);
    for (auto& v : x) v = testing::normal(rng);
    for (auto& v : y) v = testing::normal(rng);
    const double c = cosine(x, y);
    CHECK(c >= -1.0);
    CHECK(c <= 1.0);
    auto scaled = x;
    for (auto& v : scaled) v *= 37.5;
    CHECK(cosine(scaled, y) == doctest::Approx(c).epsilon(1e-12));
    CHECK(cosine(x, x) == doctest::Approx(1.0).epsilon(1e-15));
  }
}
