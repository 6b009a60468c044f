#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sieve/execution.hpp"
#include "sieve/matrix.hpp"

namespace sieve {

struct LinearKernel {
  bool operator==(const LinearKernel&) const = default;
};
struct RbfKernel {
  double gamma = 1.0;
  bool operator==(const RbfKernel&) const = default;
};
// Pearson VII universal kernel:
//   K(x, y) = 1 / (1 + (2 * ||x - y|| * sqrt(2^(1/omega) - 1) / sigma)^2)^omega
struct PukKernel {
  double omega = 1.0;
  double sigma = 1.0;
  bool operator==(const PukKernel&) const = default;
};

using KernelSpec = std::variant<LinearKernel, RbfKernel, PukKernel>;

// Throws DataError for non-positive parameters.
void validate_kernel(const KernelSpec& kernel);

// Throws DataError on a dimension mismatch.
double kernel_eval(const KernelSpec& kernel, std::span<const double> x, std::span<const double> y);

// Symmetric Gram matrix of the rows of `points`.
DenseMatrix<double> gram_matrix(const DenseMatrix<double>& points, const KernelSpec& kernel,
                                Execution exec = Execution::Parallel);

std::string kernel_name(const KernelSpec& kernel);

// Binary SVM: f(x) = sum_i dual_coefs[i] * K(sv_i, x) + bias, with
// dual_coefs[i] = alpha_i * y_i. Labels are +1 / -1; f(x) = 0 maps to -1.
struct SvmModel {
  KernelSpec kernel = PukKernel{};
  double C = 1.0;
  double bias = 0.0;
  std::size_t dim = 0;
  DenseMatrix<double> support_vectors;
  std::vector<double> dual_coefs;

  double decision(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return decision(x) > 0.0 ? 1 : -1; }
};

struct SmoConfig {
  double C = 1.0;
  KernelSpec kernel = PukKernel{};
  double tol = 1e-3;
  std::size_t max_iterations = 1'000'000;
  std::uint64_t seed = 1;
  Execution exec = Execution::Parallel;  // Gram matrix computation
};

struct SmoResult {
  SvmModel model;
  std::vector<double> alphas;  // one per training example, in input order
  std::size_t iterations = 0;
  bool converged = false;
};

// Sequential minimal optimization of the soft-margin dual
//   max  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K(x_i, x_j)
//   s.t. 0 <= a_i <= C,  sum_i a_i y_i = 0
// using maximal-violating-pair working sets with second-order selection of
// the partner. Stops when the KKT gap falls below tol. Candidates are scanned
// in a seeded permutation, which fixes how ties are broken.
// Throws DataError if labels are not +/-1 or only one class is present.
SmoResult train_smo(const DenseMatrix<double>& features, std::span<const int> labels,
                    const SmoConfig& config);

// Dual objective value for the given multipliers.
double dual_objective(const DenseMatrix<double>& gram, std::span<const int> labels,
                      std::span<const double> alphas);

// Self-describing text format:
//   sieve-svm 1
//   kernel puk <omega> <sigma> | kernel rbf <gamma> | kernel linear
//   C <value>
//   bias <value>
//   dim <d>
//   n_sv <n>
//   <dual_coef> <f1> ... <fd>      (n lines)
// Doubles are written in shortest round-trip form.
void save_svm(const SvmModel& model, std::ostream& out);
void save_svm(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_svm(std::istream& in, const std::string& name = "<stream>");
SvmModel load_svm(const std::filesystem::path& path);

}  // namespace sieve
