#include "sieve/cross_validation.hpp"

#include <numeric>

#include "sieve/error.hpp"
#include "sieve/log.hpp"
#include "sieve/random.hpp"

namespace sieve {

std::vector<std::size_t> FoldAssignment::members(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

FoldAssignment assign_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
  if (k == 0) throw DataError("cross-validation: folds must be >= 1");
  if (n < k) {
    throw DataError("cross-validation: " + std::to_string(n) + " examples for " +
                    std::to_string(k) + " folds");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle(order, rng);
  FoldAssignment a;
  a.k = k;
  a.seed = seed;
  a.fold_of.resize(n);
  for (std::size_t p = 0; p < n; ++p) a.fold_of[order[p]] = p % k;
  return a;
}

namespace {

int to_svm_label(CommentLabel label) { return label == CommentLabel::Informative ? 1 : -1; }

// Every training split (all folds but one) must contain both classes.
bool splits_have_both_classes(const FoldAssignment& a, std::span<const int> labels) {
  std::vector<std::size_t> pos(a.k, 0);
  std::vector<std::size_t> neg(a.k, 0);
  std::size_t total_pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == 1) {
      ++pos[a.fold_of[i]];
      ++total_pos;
    } else {
      ++neg[a.fold_of[i]];
    }
  }
  const std::size_t total_neg = labels.size() - total_pos;
  for (std::size_t f = 0; f < a.k; ++f) {
    if (total_pos == pos[f] || total_neg == neg[f]) return false;
  }
  return true;
}

}  // namespace

CvReport cross_validate(std::span<const LabeledComment> dataset, FeatureSpace& features,
                        const CvConfig& config) {
  const std::size_t n = dataset.size();
  std::vector<int> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = to_svm_label(dataset[i].label);

  CvReport report;
  bool ok = false;
  for (int attempt = 0; attempt <= config.max_reseeds; ++attempt) {
    const std::uint64_t seed =
        attempt == 0 ? config.seed : Rng::mix(config.seed + static_cast<std::uint64_t>(attempt));
    report.assignment = assign_folds(n, config.folds, seed);
    if (splits_have_both_classes(report.assignment, labels)) {
      ok = true;
      break;
    }
    log(LogLevel::Info, "cross-validation: partition with seed " + std::to_string(seed) +
                            " has a single-class training split, re-seeding");
  }
  if (!ok) {
    throw DataError("cross-validation: every partition tried has a training split with a single class");
  }

  report.predictions.assign(n, 0);
  for (std::size_t fold = 0; fold < config.folds; ++fold) {
    std::vector<LabeledComment> train_set;
    std::vector<int> train_labels;
    std::vector<std::size_t> validation;
    for (std::size_t i = 0; i < n; ++i) {
      if (report.assignment.fold_of[i] == fold) {
        validation.push_back(i);
      } else {
        train_set.push_back(dataset[i]);
        train_labels.push_back(labels[i]);
      }
    }
    features.fit(train_set);
    const std::size_t dim = features.dim();
    DenseMatrix<double> x(0, dim);
    for (const auto& c : train_set) x.append_row(features.features(c.sentence.tokens));

    FoldResult result;
    if (dim == 0) {
      // Nothing to learn from; everything is predicted negative.
      log(LogLevel::Warn, "cross-validation: fold " + std::to_string(fold) + " has no features");
      for (std::size_t i : validation) report.predictions[i] = 0;
    } else {
      SmoResult trained = train_smo(x, train_labels, config.smo);
      result.support_vectors = trained.model.dual_coefs.size();
      result.converged = trained.converged;
      for (std::size_t i : validation) {
        const auto f = features.features(dataset[i].sentence.tokens);
        report.predictions[i] = trained.model.predict(f) == 1 ? 1 : 0;
      }
    }
    std::vector<int> predicted;
    std::vector<int> actual;
    for (std::size_t i : validation) {
      predicted.push_back(report.predictions[i]);
      actual.push_back(labels[i] == 1 ? 1 : 0);
    }
    result.counts = confusion(predicted, actual);
    result.metrics = prf(result.counts);
    report.pooled += result.counts;
    report.folds.push_back(std::move(result));
  }
  report.aggregate = prf(report.pooled);
  return report;
}

}  // namespace sieve
