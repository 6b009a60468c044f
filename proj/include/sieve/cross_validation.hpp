#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sieve/corpus_io.hpp"
#include "sieve/features.hpp"
#include "sieve/metrics.hpp"
#include "sieve/svm.hpp"

namespace sieve {

// fold_of[i] is the validation fold of example i. Fold sizes differ by at
// most one.
struct FoldAssignment {
  std::vector<std::size_t> fold_of;
  std::size_t k = 0;
  std::uint64_t seed = 0;

  std::vector<std::size_t> members(std::size_t fold) const;
  bool operator==(const FoldAssignment&) const = default;
};

// Seeded shuffle of 0..n-1; the example at shuffled position p goes to fold
// p mod k. Throws DataError when k is 0 or n < k.
FoldAssignment assign_folds(std::size_t n, std::size_t k, std::uint64_t seed);

struct CvConfig {
  std::size_t folds = 10;
  std::uint64_t seed = 1;
  SmoConfig smo;
  // Extra partitions tried when some training split holds a single class.
  int max_reseeds = 10;
};

struct FoldResult {
  ConfusionCounts counts;
  MetricReport metrics;
  std::size_t support_vectors = 0;
  bool converged = false;
};

struct CvReport {
  FoldAssignment assignment;
  std::vector<FoldResult> folds;
  ConfusionCounts pooled;
  MetricReport aggregate;  // P/R/F of the pooled confusion matrix
  std::vector<int> predictions;  // 0/1 per example, from its validation fold
};

// k-fold cross-validation of an SVM over the given feature space.
// Informative is the positive class. The feature space is refitted on every
// training split.
CvReport cross_validate(std::span<const LabeledComment> dataset, FeatureSpace& features,
                        const CvConfig& config);

}  // namespace sieve
