#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sieve {

enum class Aggregation { Max, Mean };

struct RankedEntry {
  std::string tweet_id;
  std::size_t input_index = 0;
  double score = 0.0;
  bool degenerate = false;
};

// Entries sorted by non-increasing score, ties by ascending input index;
// degenerate items come last with score -1.
struct RankedList {
  std::vector<RankedEntry> entries;
  Aggregation aggregation = Aggregation::Max;
};

// Orders scored items according to the RankedList rules. Scores of degenerate
// items are forced to -1.
RankedList order_ranking(std::vector<RankedEntry> entries, Aggregation aggregation);

// TSV "rank<TAB>tweet_id<TAB>score<TAB>original_text" with 1-based rank and
// six-decimal scores. original_text is indexed by input_index; tabs and
// newlines in it are replaced by spaces.
void write_ranked_tsv(std::ostream& out, const RankedList& ranked,
                      std::span<const std::string> original_text);

}  // namespace sieve
