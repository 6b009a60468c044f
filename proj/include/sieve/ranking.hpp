#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sieve/execution.hpp"
#include "sieve/ranked_list.hpp"
#include "sieve/sentence_vector.hpp"
#include "sieve/text.hpp"

namespace sieve {

// Source-platform sentences used as ranking anchors. vectors is empty until
// embed_queries is called and then parallel to sentences.
struct QuerySet {
  std::vector<CleanSentence> sentences;
  std::vector<SentenceVector> vectors;
  std::size_t max_chars = 140;
  std::size_t sample_size = 1000;
  std::uint64_t seed = 0;
};

// Reservoir sample of sample_size sentences among those with
// char_len <= max_chars. Throws DataError when no sentence is eligible.
QuerySet select_instances(std::span<const CleanSentence> sentences, std::size_t max_chars = 140,
                          std::size_t sample_size = 1000, std::uint64_t seed = 0);

void embed_queries(QuerySet& query, const SentenceEncoder& encoder);

// Collapses the per-query cosines of one tweet. Degenerate tweets score -1.
// Throws DataError if the query set has no vectors.
double score(const SentenceVector& tweet, const QuerySet& query, Aggregation aggregation);

RankedList rank(std::span<const CleanSentence> tweets, const QuerySet& query,
                const SentenceEncoder& encoder, Aggregation aggregation = Aggregation::Max,
                Execution exec = Execution::Parallel);

}  // namespace sieve
