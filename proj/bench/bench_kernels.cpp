// Serial reference vs OpenMP kernel for each parallel hot path.

#include <benchmark/benchmark.h>

#include "sieve/embedding.hpp"
#include "sieve/ranking.hpp"
#include "sieve/svm.hpp"
#include "sieve/tfidf.hpp"
#include "sieve/trainer.hpp"
#include "synthetic.hpp"

using namespace sieve;

namespace {

Execution exec_of(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::Serial : Execution::Parallel;
}

struct RankFixture {
  std::vector<CleanSentence> corpus;
  std::vector<CleanSentence> tweets;
  EmbeddingModel model;
  QuerySet query;

  RankFixture() {
    Rng rng(1);
    testing::PlantedTopics topics;
    corpus = topics.corpus(rng, true, 1000, "a");
    auto b = topics.corpus(rng, false, 1000, "b");
    corpus.insert(corpus.end(), b.begin(), b.end());
    TrainingConfig c;
    c.dim = 100;
    c.epochs = 1;
    model = train(corpus, c);
    for (int i = 0; i < 2000; ++i) tweets.push_back(normalize(topics.sentence(rng, i % 2 == 0), std::to_string(i)));
    query = select_instances(corpus, 140, 200, 1);
  }
};

const RankFixture& rank_fixture() {
  static const RankFixture f;
  return f;
}

void BM_rank(benchmark::State& state) {
  const auto& f = rank_fixture();
  const SentenceEncoder enc(f.model);
  QuerySet q = f.query;
  embed_queries(q, enc);
  for (auto _ : state) benchmark::DoNotOptimize(rank(f.tweets, q, enc, Aggregation::Max, exec_of(state)));
}

void BM_rank_tfidf(benchmark::State& state) {
  const auto& f = rank_fixture();
  const TfidfModel m = TfidfModel::fit(f.corpus);
  for (auto _ : state) benchmark::DoNotOptimize(rank_tfidf(f.tweets, f.query, m, Aggregation::Max, exec_of(state)));
}

void BM_nearest_neighbors(benchmark::State& state) {
  const auto& f = rank_fixture();
  for (auto _ : state) benchmark::DoNotOptimize(nearest_neighbors(f.model, "code0", 10, exec_of(state)));
}

void BM_gram_matrix(benchmark::State& state) {
  Rng rng(2);
  const auto d = testing::gaussian_blobs(rng, 500, 100, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrix(d.x, PukKernel{}, exec_of(state)));
}

// range(0) = workers; 1 is the deterministic serial path.
void BM_train(benchmark::State& state) {
  const auto& f = rank_fixture();
  TrainingConfig c;
  c.dim = 50;
  c.epochs = 1;
  c.workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(train(f.corpus, c));
}

}  // namespace

BENCHMARK(BM_rank)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_rank_tfidf)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_nearest_neighbors)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_gram_matrix)->ArgName("parallel")->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_train)->ArgName("workers")->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
