#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sieve/text.hpp"

namespace sieve {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept {
    return std::hash<std::string_view>{}(s);
  }
};

// Word <-> dense index map. Words are ordered by descending corpus count,
// ties broken lexicographically, so the last indices hold the rarest words.
class Vocabulary {
 public:
  Vocabulary() = default;

  // Keeps exactly the words occurring at least min_count times. Throws
  // DataError("corpus too small for min_count") when nothing survives.
  static Vocabulary build(std::span<const CleanSentence> corpus, std::int64_t min_count);

  // Words in index order with known counts (counts may be 0 when unknown,
  // e.g. for models loaded from disk). Throws DataError on duplicates.
  static Vocabulary from_words(std::vector<std::string> words,
                               std::vector<std::int64_t> counts = {});

  std::optional<std::int32_t> find(std::string_view word) const;
  bool contains(std::string_view word) const { return find(word).has_value(); }

  const std::string& word(std::int32_t index) const { return words_[index]; }
  std::int64_t count(std::int32_t index) const { return counts_[index]; }
  std::size_t size() const noexcept { return words_.size(); }
  bool empty() const noexcept { return words_.empty(); }

  // Sum of the counts of retained words.
  std::int64_t total_tokens() const noexcept { return total_tokens_; }

  std::span<const std::string> words() const noexcept { return words_; }
  std::span<const std::int64_t> counts() const noexcept { return counts_; }

  bool operator==(const Vocabulary& other) const {
    return words_ == other.words_ && counts_ == other.counts_;
  }

 private:
  std::vector<std::string> words_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, std::int32_t, StringHash, std::equal_to<>> index_;
  std::int64_t total_tokens_ = 0;
};

}  // namespace sieve
