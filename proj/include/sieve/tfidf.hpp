#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sieve/execution.hpp"
#include "sieve/ranked_list.hpp"
#include "sieve/ranking.hpp"
#include "sieve/text.hpp"
#include "sieve/vocabulary.hpp"

namespace sieve {

// The bundled English stopword list (data/stopwords_en.txt).
const std::unordered_set<std::string, StringHash, std::equal_to<>>& english_stopwords();
bool is_stopword(std::string_view token);

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens);

// Stopword removal followed by Porter stemming.
std::vector<std::string> tfidf_terms(std::span<const std::string> tokens);

// (index, weight) pairs with strictly increasing indices.
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> weights;

  bool empty() const noexcept { return indices.empty(); }
  std::size_t size() const noexcept { return indices.size(); }
};

double sparse_dot(const SparseVector& a, const SparseVector& b);
// 0 when either vector is empty.
double sparse_cosine(const SparseVector& a, const SparseVector& b);

// Smooth idf over stemmed, stopword-filtered terms:
//   idf(t) = ln((1 + n_docs) / (1 + df(t))) + 1
// Terms are indexed in lexicographic order.
class TfidfModel {
 public:
  // Throws DataError when the corpus has no terms.
  static TfidfModel fit(std::span<const CleanSentence> corpus);

  // Raw term counts times idf, L2-normalized. Unseen terms are ignored;
  // an all-unseen document gives an empty vector.
  SparseVector transform(std::span<const std::string> tokens) const;

  std::optional<std::uint32_t> find(std::string_view term) const;
  const std::string& term(std::uint32_t index) const { return terms_[index]; }
  double idf(std::uint32_t index) const { return idf_[index]; }
  std::int64_t df(std::uint32_t index) const { return df_[index]; }
  std::size_t size() const noexcept { return terms_.size(); }
  std::int64_t n_docs() const noexcept { return n_docs_; }

 private:
  std::vector<std::string> terms_;
  std::vector<std::int64_t> df_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>> index_;
  std::int64_t n_docs_ = 0;
};

// Counterpart of rank() in tf-idf space: query sentences and tweets are
// transformed with the model, per-query cosines aggregated, empty tweet
// vectors ranked last with score -1.
RankedList rank_tfidf(std::span<const CleanSentence> tweets, const QuerySet& query,
                      const TfidfModel& model, Aggregation aggregation = Aggregation::Max,
                      Execution exec = Execution::Parallel);

}  // namespace sieve
