#include <doctest.h>

#include <set>

#include "sieve/cross_validation.hpp"
#include "sieve/error.hpp"
#include "sieve/features.hpp"
#include "synthetic.hpp"

using namespace sieve;

namespace {

std::vector<LabeledComment> comments(std::initializer_list<std::pair<const char*, int>> items) {
  std::vector<LabeledComment> out;
  for (auto [t, l] : items) out.push_back({normalize(t), l ? CommentLabel::Informative : CommentLabel::NonInformative});
  return out;
}

}  // namespace

TEST_CASE("normalized term frequencies") {
  const std::vector<std::string> vocab = {"good", "video"};
  const std::vector<std::string> t = {"good", "good", "video"};
  const auto f = normalized_tf_features(t, vocab);
  CHECK(f[0] == doctest::Approx(2.0 / 3));
  CHECK(f[1] == doctest::Approx(1.0 / 3));
  const std::vector<std::string> other = {"bad", "good"};
  CHECK(normalized_tf_features(other, vocab) == std::vector<double>{0.5, 0.0});
  CHECK(normalized_tf_features(std::vector<std::string>{}, vocab) == std::vector<double>{0.0, 0.0});
}

TEST_CASE("vocabulary keeps words in at least min_df comments") {
  const auto c = comments({{"good good video", 1}, {"bad video", 0}, {"nice", 1}, {"good job", 1}, {"video video", 0}});
  // df: good 2, video 3, bad 1, nice 1, job 1
  CHECK(build_ntf_vocabulary(c, 2) == std::vector<std::string>{"good", "video"});
  CHECK(build_ntf_vocabulary(c, 3) == std::vector<std::string>{"video"});
  CHECK(build_ntf_vocabulary(c, 1).size() == 5);
  NormalizedTfFeatures ntf;
  ntf.fit(c);
  CHECK(ntf.dim() == 2);
  CHECK(ntf.name() == "ntf");
}

TEST_CASE("fold assignment") {
  const auto a = assign_folds(20, 10, 7);
  std::set<std::size_t> seen;
  for (std::size_t f = 0; f < 10; ++f) {
    const auto m = a.members(f);
    CHECK(m.size() == 2);
    seen.insert(m.begin(), m.end());
  }
  CHECK(seen.size() == 20);
  CHECK(assign_folds(20, 10, 7) == a);
  CHECK_FALSE(assign_folds(20, 10, 8) == a);
  const auto uneven = assign_folds(23, 10, 1);
  for (std::size_t f = 0; f < 10; ++f) CHECK(uneven.members(f).size() == (f < 3 ? 3u : 2u));
  CHECK_THROWS_AS(assign_folds(5, 10, 1), DataError);
  CHECK_THROWS_AS(assign_folds(5, 0, 1), DataError);
}

TEST_CASE("separable comments give perfect cross-validated F") {
  Rng rng(1);
  testing::PlantedTopics topics;
  topics.core_share = 1.0;
  const auto data = testing::planted_comments(topics, rng, 30, 70);
  NormalizedTfFeatures ntf(2);
  CvConfig cfg;
  cfg.smo.kernel = LinearKernel{};
  cfg.smo.C = 10.0;
  const auto r = cross_validate(data, ntf, cfg);
  CHECK(r.folds.size() == 10);
  CHECK(*r.aggregate.f_measure == 1.0);
  CHECK(r.pooled.tp == 30);
  CHECK(r.pooled.tn == 70);
  CHECK(r.predictions.size() == 100);
  for (std::size_t i = 0; i < 100; ++i) CHECK(r.predictions[i] == (data[i].label == CommentLabel::Informative));

  ConfusionCounts sum;
  for (const auto& f : r.folds) sum += f.counts;
  CHECK(sum == r.pooled);

  const auto again = cross_validate(data, ntf, cfg);
  CHECK(again.predictions == r.predictions);
  CHECK(again.assignment == r.assignment);
}

TEST_CASE("single-class training splits trigger a reseed") {
  // One positive among 20: any fold holding it leaves a negative-only
  // training split, so every partition fails.
  std::vector<LabeledComment> c;
  for (int i = 0; i < 20; ++i) c.push_back({normalize("word" + std::to_string(i % 3) + " x y"), i == 0 ? CommentLabel::Informative : CommentLabel::NonInformative});
  NormalizedTfFeatures ntf(1);
  CvConfig cfg;
  cfg.folds = 10;
  cfg.max_reseeds = 3;
  CHECK_THROWS_AS(cross_validate(c, ntf, cfg), DataError);

  // Two positives: partitions placing both in one fold work; others reseed.
  c[1].label = CommentLabel::Informative;
  cfg.folds = 2;
  cfg.max_reseeds = 50;
  const auto r = cross_validate(c, ntf, cfg);
  for (std::size_t f = 0; f < 2; ++f) {
    int pos = 0;
    for (auto i : r.assignment.members(f)) pos += c[i].label == CommentLabel::Informative;
    CHECK(pos == 1);
  }
}

TEST_CASE("too few examples for the fold count") {
  const auto c = comments({{"a b", 1}, {"c d", 0}});
  NormalizedTfFeatures ntf;
  CHECK_THROWS_AS(cross_validate(c, ntf, CvConfig{}), DataError);
}
