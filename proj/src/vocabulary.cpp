#include "sieve/vocabulary.hpp"

#include <algorithm>
#include <numeric>

#include "sieve/error.hpp"

namespace sieve {

Vocabulary Vocabulary::build(std::span<const CleanSentence> corpus, std::int64_t min_count) {
  std::unordered_map<std::string, std::int64_t, StringHash, std::equal_to<>> freq;
  for (const auto& sentence : corpus) {
    for (const auto& token : sentence.tokens) {
      auto it = freq.find(token);
      if (it == freq.end()) {
        freq.emplace(token, 1);
      } else {
        ++it->second;
      }
    }
  }
  std::vector<std::pair<std::string, std::int64_t>> kept;
  for (auto& [word, count] : freq) {
    if (count >= min_count) kept.emplace_back(word, count);
  }
  if (kept.empty()) throw DataError("corpus too small for min_count");
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::vector<std::string> words;
  std::vector<std::int64_t> counts;
  words.reserve(kept.size());
  counts.reserve(kept.size());
  for (auto& [word, count] : kept) {
    words.push_back(std::move(word));
    counts.push_back(count);
  }
  return from_words(std::move(words), std::move(counts));
}

Vocabulary Vocabulary::from_words(std::vector<std::string> words,
                                  std::vector<std::int64_t> counts) {
  if (counts.empty()) counts.assign(words.size(), 0);
  if (counts.size() != words.size()) {
    throw DataError("vocabulary: word and count lists differ in length");
  }
  Vocabulary vocab;
  vocab.index_.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!vocab.index_.emplace(words[i], static_cast<std::int32_t>(i)).second) {
      throw DataError("vocabulary: duplicate word '" + words[i] + "'");
    }
  }
  vocab.total_tokens_ = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
  vocab.words_ = std::move(words);
  vocab.counts_ = std::move(counts);
  return vocab;
}

std::optional<std::int32_t> Vocabulary::find(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

}  // namespace sieve
