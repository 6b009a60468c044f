#include "sieve/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "sieve/error.hpp"
#include "sieve/porter.hpp"

namespace sieve {

namespace detail {
extern const std::string_view kStopwordsText;
}

const std::unordered_set<std::string, StringHash, std::equal_to<>>& english_stopwords() {
  static const auto words = [] {
    std::unordered_set<std::string, StringHash, std::equal_to<>> set;
    std::string_view text = detail::kStopwordsText;
    while (!text.empty()) {
      const std::size_t nl = text.find('\n');
      std::string_view line = text.substr(0, nl);
      text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
      if (line.empty() || line.front() == '#') continue;
      set.emplace(line);
    }
    return set;
  }();
  return words;
}

bool is_stopword(std::string_view token) { return english_stopwords().contains(token); }

std::vector<std::string> remove_stopwords(std::span<const std::string> tokens) {
  std::vector<std::string> kept;
  for (const auto& t : tokens) {
    if (!is_stopword(t)) kept.push_back(t);
  }
  return kept;
}

std::vector<std::string> tfidf_terms(std::span<const std::string> tokens) {
  std::vector<std::string> terms;
  terms.reserve(tokens.size());
  for (const auto& t : tokens) {
    if (!is_stopword(t)) terms.push_back(porter_stem(t));
  }
  return terms;
}

double sparse_dot(const SparseVector& a, const SparseVector& b) {
  double dot = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (a.indices[i] == b.indices[j]) {
      dot += a.weights[i++] * b.weights[j++];
    } else if (a.indices[i] < b.indices[j]) {
      ++i;
    } else {
      ++j;
    }
  }
  return dot;
}

double sparse_cosine(const SparseVector& a, const SparseVector& b) {
  if (a.empty() || b.empty()) return 0.0;
  const double na = std::sqrt(sparse_dot(a, a));
  const double nb = std::sqrt(sparse_dot(b, b));
  if (na < 1e-12 || nb < 1e-12) return 0.0;
  return std::clamp(sparse_dot(a, b) / (na * nb), -1.0, 1.0);
}

TfidfModel TfidfModel::fit(std::span<const CleanSentence> corpus) {
  std::map<std::string, std::int64_t, std::less<>> df;
  for (const auto& doc : corpus) {
    auto terms = tfidf_terms(doc.tokens);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    for (auto& t : terms) ++df[t];
  }
  if (df.empty()) throw DataError("tf-idf: corpus has no terms after stopword removal");
  TfidfModel model;
  model.n_docs_ = static_cast<std::int64_t>(corpus.size());
  const double n = static_cast<double>(model.n_docs_);
  for (auto& [term, count] : df) {
    model.index_.emplace(term, static_cast<std::uint32_t>(model.terms_.size()));
    model.terms_.push_back(term);
    model.df_.push_back(count);
    model.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
  }
  return model;
}

std::optional<std::uint32_t> TfidfModel::find(std::string_view term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SparseVector TfidfModel::transform(std::span<const std::string> tokens) const {
  std::vector<std::uint32_t> ids;
  for (const auto& term : tfidf_terms(tokens)) {
    if (auto id = find(term)) ids.push_back(*id);
  }
  std::sort(ids.begin(), ids.end());
  SparseVector v;
  for (std::size_t i = 0; i < ids.size();) {
    std::size_t j = i;
    while (j < ids.size() && ids[j] == ids[i]) ++j;
    v.indices.push_back(ids[i]);
    v.weights.push_back(static_cast<double>(j - i) * idf_[ids[i]]);
    i = j;
  }
  double norm = 0.0;
  for (double w : v.weights) norm += w * w;
  norm = std::sqrt(norm);
  if (norm > 0.0) {
    for (double& w : v.weights) w /= norm;
  }
  return v;
}

RankedList rank_tfidf(std::span<const CleanSentence> tweets, const QuerySet& query,
                      const TfidfModel& model, Aggregation aggregation, Execution exec) {
  if (query.sentences.empty()) throw DataError("rank_tfidf: empty query set");
  std::vector<SparseVector> queries;
  queries.reserve(query.sentences.size());
  for (const auto& s : query.sentences) queries.push_back(model.transform(s.tokens));

  const auto n = static_cast<std::int64_t>(tweets.size());
  std::vector<RankedEntry> entries(tweets.size());
  auto score_one = [&](std::int64_t i) {
    const auto& tweet = tweets[static_cast<std::size_t>(i)];
    const SparseVector v = model.transform(tweet.tokens);
    auto& e = entries[static_cast<std::size_t>(i)];
    e.tweet_id = tweet.origin_id;
    e.input_index = static_cast<std::size_t>(i);
    e.degenerate = v.empty();
    if (e.degenerate) {
      e.score = -1.0;
      return;
    }
    double best = -1.0;
    double sum = 0.0;
    for (const auto& q : queries) {
      const double c = sparse_cosine(v, q);
      best = std::max(best, c);
      sum += c;
    }
    e.score = aggregation == Aggregation::Max ? best : sum / static_cast<double>(queries.size());
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
