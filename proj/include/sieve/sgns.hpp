#pragma once

// Skip-gram negative-sampling objective for one (center, context) pair:
//
//   L = -log sigma(u_ctx . v_c) - sum_k log sigma(-u_k . v_c)
//
// v_c is a row of the input (word) matrix; u_ctx and u_k are rows of the
// output (context) matrix. The kernels are templated on the matrix scalar so
// training can run in float while gradient checks run in double.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "sieve/matrix.hpp"

namespace sieve {

struct SgnsPair {
  std::int32_t center = 0;
  std::int32_t context = 0;
  std::span<const std::int32_t> negatives;
};

// log(sigma(x)) without overflow for large |x|.
inline double log_sigmoid(double x) {
  return x >= 0.0 ? -std::log1p(std::exp(-x)) : x - std::log1p(std::exp(x));
}

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

namespace detail {

template <typename T>
double dot(std::span<const T> a, std::span<const T> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  }
  return sum;
}

template <typename T>
void check_pair(const DenseMatrix<T>& input, const DenseMatrix<T>& output, const SgnsPair& p) {
  auto in_range = [](std::int32_t i, std::size_t n) {
    return i >= 0 && static_cast<std::size_t>(i) < n;
  };
  if (!in_range(p.center, input.rows())) {
    throw std::out_of_range("sgns: center index " + std::to_string(p.center) + " out of range");
  }
  if (!in_range(p.context, output.rows())) {
    throw std::out_of_range("sgns: context index " + std::to_string(p.context) + " out of range");
  }
  for (std::int32_t k : p.negatives) {
    if (!in_range(k, output.rows())) {
      throw std::out_of_range("sgns: negative index " + std::to_string(k) + " out of range");
    }
    if (k == p.context) throw std::invalid_argument("sgns: negative sample equals the context");
  }
  if (input.cols() != output.cols()) throw std::invalid_argument("sgns: dimension mismatch");
}

inline std::size_t sgns_scratch_size(std::size_t dim, std::size_t negatives) {
  return dim + negatives;
}

// One SGD step without argument checks. scratch must hold
// sgns_scratch_size(dim, negatives) values. Every gradient term is evaluated
// at the pre-step parameters.
template <std::floating_point T>
void sgns_step_unchecked(DenseMatrix<T>& input, DenseMatrix<T>& output, const SgnsPair& p,
                         double lr, std::span<double> scratch) {
  auto v = input.row(static_cast<std::size_t>(p.center));
  const std::size_t dim = v.size();
  std::span<double> grad_center = scratch.first(dim);
  std::span<double> g_neg = scratch.subspan(dim, p.negatives.size());
  std::fill(grad_center.begin(), grad_center.end(), 0.0);

  auto accumulate = [&](std::int32_t row, double label) {
    auto u = output.row(static_cast<std::size_t>(row));
    // dL/ds where s = u . v: sigma(s) - 1 for the true context, sigma(s) for a negative.
    const double g = sigmoid(dot<T>(u, v)) - label;
    for (std::size_t d = 0; d < dim; ++d) grad_center[d] += g * static_cast<double>(u[d]);
    return g;
  };

  // Gradients w.r.t. output rows depend only on v, which is updated last.
  const double g_ctx = accumulate(p.context, 1.0);
  for (std::size_t k = 0; k < p.negatives.size(); ++k) g_neg[k] = accumulate(p.negatives[k], 0.0);

  auto update_output = [&](std::int32_t row, double g) {
    auto u = output.row(static_cast<std::size_t>(row));
    for (std::size_t d = 0; d < dim; ++d) {
      u[d] = static_cast<T>(static_cast<double>(u[d]) - lr * g * static_cast<double>(v[d]));
    }
  };
  update_output(p.context, g_ctx);
  for (std::size_t k = 0; k < p.negatives.size(); ++k) update_output(p.negatives[k], g_neg[k]);

  for (std::size_t d = 0; d < dim; ++d) {
    v[d] = static_cast<T>(static_cast<double>(v[d]) - lr * grad_center[d]);
  }
}

}  // namespace detail

template <std::floating_point T>
double sgns_pair_loss(const DenseMatrix<T>& input, const DenseMatrix<T>& output,
                      const SgnsPair& p) {
  detail::check_pair(input, output, p);
  auto v = input.row(static_cast<std::size_t>(p.center));
  double loss = -log_sigmoid(detail::dot<T>(output.row(static_cast<std::size_t>(p.context)), v));
  for (std::int32_t k : p.negatives) {
    loss -= log_sigmoid(-detail::dot<T>(output.row(static_cast<std::size_t>(k)), v));
  }
  return loss;
}

// Analytic gradient of sgns_pair_loss. Rows appearing several times among
// the negatives receive one entry per occurrence.
struct SgnsGradient {
  std::vector<double> center;                 // dL/dv_c
  std::vector<double> context;                // dL/du_ctx
  std::vector<std::vector<double>> negatives; // dL/du_k, in negatives order
};

template <std::floating_point T>
SgnsGradient sgns_gradient(const DenseMatrix<T>& input, const DenseMatrix<T>& output,
                           const SgnsPair& p) {
  detail::check_pair(input, output, p);
  const std::size_t dim = input.cols();
  auto v = input.row(static_cast<std::size_t>(p.center));
  SgnsGradient grad;
  grad.center.assign(dim, 0.0);
  auto term = [&](std::int32_t row, double label) {
    auto u = output.row(static_cast<std::size_t>(row));
    const double g = sigmoid(detail::dot<T>(u, v)) - label;
    std::vector<double> du(dim);
    for (std::size_t d = 0; d < dim; ++d) {
      grad.center[d] += g * static_cast<double>(u[d]);
      du[d] = g * static_cast<double>(v[d]);
    }
    return du;
  };
  grad.context = term(p.context, 1.0);
  for (std::int32_t k : p.negatives) grad.negatives.push_back(term(k, 0.0));
  return grad;
}

// In-place SGD step: every touched row moves by -lr times its gradient. Rows
// not named in the pair are left untouched.
template <std::floating_point T>
void sgns_step(DenseMatrix<T>& input, DenseMatrix<T>& output, const SgnsPair& p, double lr) {
  detail::check_pair(input, output, p);
  std::vector<double> scratch(detail::sgns_scratch_size(input.cols(), p.negatives.size()));
  detail::sgns_step_unchecked(input, output, p, lr, scratch);
}

}  // namespace sieve
