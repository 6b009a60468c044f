#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>

#include "sieve/ranked_list.hpp"

namespace sieve {

struct ConfusionCounts {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const noexcept { return tp + fp + fn + tn; }
  ConfusionCounts& operator+=(const ConfusionCounts& other) noexcept;
  bool operator==(const ConfusionCounts&) const = default;
};

// Counts from parallel lists of predicted and true labels, 1 = positive and
// 0 (or -1) = negative. Throws DataError on a length mismatch.
ConfusionCounts confusion(std::span<const int> predicted, std::span<const int> actual);

// Either the accuracy@K curve or P/R/F, plus optional extras.
struct MetricReport {
  std::map<std::size_t, double> accuracy_at_k;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f_measure;
  std::optional<double> kappa;
  std::optional<ConfusionCounts> counts;

  // "key=value" lines, e.g. "accuracy@50=0.98" or "precision=0.75".
  std::string to_key_value() const;
  std::string to_json() const;
};

// (# relevant among the top K) / K. Throws DataError when K is 0 or larger
// than the list, or when an entry in the top K has no label (the message
// names the id).
double accuracy_at_k(const RankedList& ranked,
                     const std::unordered_map<std::string, bool>& labels, std::size_t k);

MetricReport accuracy_report(const RankedList& ranked,
                             const std::unordered_map<std::string, bool>& labels,
                             std::span<const std::size_t> ks);

// P = tp/(tp+fp), R = tp/(tp+fn), F = 2PR/(P+R), each 0 when its
// denominator is 0.
MetricReport prf(const ConfusionCounts& counts);

// Two-rater Cohen's kappa over binary 0/1 labels. When chance agreement is
// total (p_e = 1) the result is 1 if the raters agree everywhere, else 0.
// Throws DataError on empty input, a length mismatch or a non-binary label.
double cohen_kappa(std::span<const int> a, std::span<const int> b);

}  // namespace sieve
