#include <doctest.h>

#include <map>

#include "sieve/error.hpp"
#include "sieve/vocabulary.hpp"
#include "synthetic.hpp"

using namespace sieve;

namespace {

std::vector<CleanSentence> corpus(std::initializer_list<const char*> lines) {
  std::vector<CleanSentence> out;
  for (const char* l : lines) out.push_back(normalize(l));
  return out;
}

}  // namespace

TEST_CASE("min_count filter") {
  const auto v = Vocabulary::build(corpus({"a a a b"}), 2);
  REQUIRE(v.size() == 1);
  CHECK(v.word(0) == "a");
  CHECK(v.count(0) == 3);
  CHECK(v.total_tokens() == 3);
  CHECK_FALSE(v.contains("b"));
}

TEST_CASE("equal counts are ordered lexicographically") {
  const auto v = Vocabulary::build(corpus({"b a", "a b"}), 2);
  REQUIRE(v.size() == 2);
  CHECK(v.word(0) == "a");
  CHECK(v.word(1) == "b");
  CHECK(*v.find("b") == 1);
}

TEST_CASE("an empty result is an error") {
  try {
    Vocabulary::build(corpus({"a b c"}), 5);
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()) == "corpus too small for min_count");
  }
  CHECK_THROWS_AS(Vocabulary::build({}, 1), DataError);
}

TEST_CASE("matches a brute-force frequency count on a 10k-sentence corpus") {
  Rng rng(99);
  testing::PlantedTopics topics;
  auto sentences = topics.corpus(rng, true, 5000, "a");
  auto more = topics.corpus(rng, false, 5000, "b");
  sentences.insert(sentences.end(), more.begin(), more.end());

  std::map<std::string, std::int64_t> counts;
  for (const auto& s : sentences) {
    for (const auto& t : s.tokens) ++counts[t];
  }
  const std::int64_t min_count = 50;
  std::vector<std::pair<std::int64_t, std::string>> expected;
  std::int64_t total = 0;
  for (const auto& [w, c] : counts) {
    if (c >= min_count) {
      expected.emplace_back(-c, w);
      total += c;
    }
  }
  std::sort(expected.begin(), expected.end());

  const auto v = Vocabulary::build(sentences, min_count);
  REQUIRE(v.size() == expected.size());
  CHECK(v.total_tokens() == total);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto idx = static_cast<std::int32_t>(i);
    CHECK(v.word(idx) == expected[i].second);
    CHECK(v.count(idx) == -expected[i].first);
    CHECK(*v.find(expected[i].second) == idx);
  }
}

TEST_CASE("from_words") {
  const auto v = Vocabulary::from_words({"x", "y"});
  CHECK(v.size() == 2);
  CHECK(v.count(1) == 0);
  CHECK(*v.find("y") == 1);
  CHECK_THROWS_AS(Vocabulary::from_words({"x", "x"}), DataError);
  const auto w = Vocabulary::from_words({"p", "q"}, {5, 2});
  CHECK(w.total_tokens() == 7);
}
