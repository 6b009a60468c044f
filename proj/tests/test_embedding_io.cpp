#include <doctest.h>

#include <sstream>

#include "sieve/embedding.hpp"
#include "sieve/error.hpp"
#include "sieve/trainer.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

using namespace sieve;

namespace {

EmbeddingModel random_model(std::uint64_t seed, std::size_t n, std::size_t dim) {
  Rng rng(seed);
  DenseMatrix<float> m(n, dim);
  for (float& x : m.data()) x = static_cast<float>(testing::normal(rng) * std::pow(10.0, rng.uniform(-6, 3)));
  return EmbeddingModel(Vocabulary::from_words(testing::word_list("w", n)), std::move(m));
}

std::string to_text(const EmbeddingModel& m) {
  std::ostringstream out;
  save_model(m, out);
  return out.str();
}

EmbeddingModel from_text(const std::string& text) {
  std::istringstream in(text);
  return load_model(in, "m.txt");
}

std::size_t error_line(const std::string& text) {
  try {
    from_text(text);
  } catch (const LineError& e) {
    return e.line();
  }
  FAIL("expected LineError");
  return 0;
}

}  // namespace

TEST_CASE("save and load round-trip exactly") {
  const auto m = random_model(1, 50, 7);
  const std::string text = to_text(m);
  CHECK(text.starts_with("50 7\nw0 "));
  const auto back = from_text(text);
  CHECK(back.input_vectors() == m.input_vectors());
  CHECK(std::equal(back.vocab().words().begin(), back.vocab().words().end(), m.vocab().words().begin()));
  CHECK(to_text(back) == text);
}

TEST_CASE("file round-trip of a trained model") {
  testing::TempDir dir;
  Rng rng(5);
  testing::PlantedTopics topics;
  const auto corpus = topics.corpus(rng, true, 200, "s");
  TrainingConfig c;
  c.dim = 6;
  const auto m = train(corpus, c);
  save_model(m, dir.file("model.txt"));
  const auto back = load_model(dir.file("model.txt"));
  CHECK(back.input_vectors() == m.input_vectors());
  CHECK(back.vocab().word(0) == m.vocab().word(0));
  CHECK(back.vocab().count(0) == 0);
  CHECK_THROWS_AS(load_model(dir.file("missing.txt")), DataError);
}

TEST_CASE("external files with mixed number formats load") {
  const auto m = from_text("3 2\r\nthe 0.1 -2\nof\t1e-3  +0\nand -1.5E+02 3.\n\n");
  REQUIRE(m.size() == 3);
  CHECK(m.dim() == 2);
  CHECK((*m.find("of"))[0] == 1e-3f);
  CHECK((*m.find("and"))[0] == -150.0f);
  CHECK((*m.find("and"))[1] == 3.0f);
}

TEST_CASE("malformed files name the offending line") {
  std::string short_row = "2 300\nok";
  for (int i = 0; i < 300; ++i) short_row += " 0.5";
  short_row += "\nbad";
  for (int i = 0; i < 299; ++i) short_row += " 0.5";
  short_row += "\n";
  CHECK(error_line(short_row) == 3);
  try {
    from_text(short_row);
  } catch (const LineError& e) {
    CHECK(std::string(e.what()) == "m.txt: line 3: expected a word and 300 values, found 299 values");
  }

  CHECK(error_line("") == 1);
  CHECK(error_line("3\n") == 1);
  CHECK(error_line("x 2\n") == 1);
  CHECK(error_line("1 0\na\n") == 1);
  CHECK(error_line("2 1\na 1\n") == 3);
  CHECK(error_line("1 1\na 1\nb 2\n") == 3);
  CHECK(error_line("1 2\na 1 zz\n") == 2);
  CHECK(error_line("1 1\na nan\n") == 2);
  CHECK(error_line("3000000 300\nthe 1\n") == 2);
  CHECK_THROWS_AS(from_text("2 1\na 1\na 2\n"), DataError);
}

TEST_CASE("model construction checks") {
  CHECK_THROWS_AS(EmbeddingModel(Vocabulary::from_words({"a"}), DenseMatrix<float>(2, 3)), DataError);
  DenseMatrix<float> inf(1, 1);
  inf(0, 0) = INFINITY;
  CHECK_THROWS_AS(EmbeddingModel(Vocabulary::from_words({"a"}), inf), DataError);
}

TEST_CASE("nearest_neighbors matches brute force") {
  const auto m = random_model(9, 300, 12);
  const std::string query = "w17";
  const auto q = *m.find(query);
  std::vector<std::pair<double, std::int32_t>> all;
  for (std::int32_t i = 0; i < 300; ++i) {
    if (i == 17) continue;
    const auto v = m.vector(i);
    long double dot = 0, nq = 0, nv = 0;
    for (std::size_t d = 0; d < 12; ++d) {
      dot += (long double)q[d] * v[d];
      nq += (long double)q[d] * q[d];
      nv += (long double)v[d] * v[d];
    }
    all.emplace_back(-(double)(dot / std::sqrt(nq * nv)), i);
  }
  std::sort(all.begin(), all.end());
  const auto nn = nearest_neighbors(m, query, 10);
  REQUIRE(nn.size() == 10);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(nn[i].first == m.vocab().word(all[i].second));
    CHECK(nn[i].second == doctest::Approx(-all[i].first).epsilon(1e-12));
  }
  CHECK(nearest_neighbors(m, query, 10, Execution::Serial) == nn);
  CHECK(nearest_neighbors(m, query, 1000).size() == 299);
  CHECK_THROWS_AS(nearest_neighbors(m, "zzz", 3), DataError);
  CHECK_THROWS_AS(nearest_neighbors(m, query, 0), DataError);
}
