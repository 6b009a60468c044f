#include "sieve/ranking.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "sieve/error.hpp"
#include "sieve/reservoir.hpp"

namespace sieve {

RankedList order_ranking(std::vector<RankedEntry> entries, Aggregation aggregation) {
  for (auto& e : entries) {
    if (e.degenerate) e.score = -1.0;
  }
  std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
    if (a.degenerate != b.degenerate) return !a.degenerate;
    if (a.score != b.score) return a.score > b.score;
    return a.input_index < b.input_index;
  });
  return RankedList{std::move(entries), aggregation};
}

void write_ranked_tsv(std::ostream& out, const RankedList& ranked,
                      std::span<const std::string> original_text) {
  char score[64];
  for (std::size_t r = 0; r < ranked.entries.size(); ++r) {
    const auto& e = ranked.entries[r];
    std::snprintf(score, sizeof score, "%.6f", e.score);
    std::string text = e.input_index < original_text.size() ? original_text[e.input_index] : "";
    std::replace_if(text.begin(), text.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
    out << (r + 1) << '\t' << e.tweet_id << '\t' << score << '\t' << text << '\n';
  }
}

QuerySet select_instances(std::span<const CleanSentence> sentences, std::size_t max_chars,
                          std::size_t sample_size, std::uint64_t seed) {
  if (sample_size == 0) throw DataError("select_instances: sample_size must be >= 1");
  ReservoirSampler<std::size_t> sampler(sample_size, seed);
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (sentences[i].char_len <= max_chars) sampler.offer(i);
  }
  if (sampler.seen() == 0) {
    throw DataError("select_instances: no sentence of at most " + std::to_string(max_chars) +
                    " characters");
  }
  QuerySet query;
  query.max_chars = max_chars;
  query.sample_size = sample_size;
  query.seed = seed;
  for (std::size_t i : sampler.items()) query.sentences.push_back(sentences[i]);
  return query;
}

void embed_queries(QuerySet& query, const SentenceEncoder& encoder) {
  query.vectors.clear();
  query.vectors.reserve(query.sentences.size());
  for (const auto& s : query.sentences) query.vectors.push_back(encoder.encode(s.tokens));
}

double score(const SentenceVector& tweet, const QuerySet& query, Aggregation aggregation) {
  if (query.vectors.empty()) throw DataError("score: empty query set");
  if (tweet.degenerate) return -1.0;
  double best = -1.0;
  double sum = 0.0;
  for (const auto& q : query.vectors) {
    const double c = cosine(tweet, q);
    best = std::max(best, c);
    sum += c;
  }
  return aggregation == Aggregation::Max ? best
                                         : sum / static_cast<double>(query.vectors.size());
}

RankedList rank(std::span<const CleanSentence> tweets, const QuerySet& query,
                const SentenceEncoder& encoder, Aggregation aggregation, Execution exec) {
  if (query.vectors.empty()) throw DataError("rank: query set has no vectors");
  if (query.vectors.front().values.size() != encoder.dim()) {
    throw DataError("rank: query vectors and model differ in dimension");
  }
  const auto n = static_cast<std::int64_t>(tweets.size());
  std::vector<RankedEntry> entries(tweets.size());
  auto score_one = [&](std::int64_t i) {
    const auto& tweet = tweets[static_cast<std::size_t>(i)];
    const SentenceVector v = encoder.encode(tweet.tokens);
    auto& e = entries[static_cast<std::size_t>(i)];
    e.tweet_id = tweet.origin_id;
    e.input_index = static_cast<std::size_t>(i);
    e.degenerate = v.degenerate;
    e.score = score(v, query, aggregation);
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) score_one(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) score_one(i);
  }
  return order_ranking(std::move(entries), aggregation);
}

}  // namespace sieve
