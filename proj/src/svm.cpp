#include "sieve/svm.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "sieve/error.hpp"
#include "sieve/log.hpp"
#include "sieve/random.hpp"

namespace sieve {

namespace {

constexpr double kTau = 1e-12;
constexpr std::size_t kMaxPrecomputedGram = 8000;

double squared_distance(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - y[i];
    sum += d * d;
  }
  return sum;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

double eval_unchecked(const KernelSpec& kernel, std::span<const double> x,
                      std::span<const double> y) {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LinearKernel>) {
          return dot(x, y);
        } else if constexpr (std::is_same_v<K, RbfKernel>) {
          return std::exp(-k.gamma * squared_distance(x, y));
        } else {
          const double dist = std::sqrt(squared_distance(x, y));
          const double t = 2.0 * dist * std::sqrt(std::pow(2.0, 1.0 / k.omega) - 1.0) / k.sigma;
          return 1.0 / std::pow(1.0 + t * t, k.omega);
        }
      },
      kernel);
}

// Columns of the kernel matrix, either precomputed or computed on demand
// with a bounded FIFO cache for large problems.
class KernelColumns {
 public:
  KernelColumns(const DenseMatrix<double>& x, const KernelSpec& kernel, Execution exec)
      : x_(x), kernel_(kernel), n_(x.rows()) {
    if (n_ <= kMaxPrecomputedGram) {
      gram_ = gram_matrix(x, kernel, exec);
      precomputed_ = true;
    }
    diagonal_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) diagonal_[i] = eval_unchecked(kernel_, x_.row(i), x_.row(i));
  }

  std::span<const double> column(std::size_t i) {
    if (precomputed_) return gram_.row(i);
    if (auto it = cache_.find(i); it != cache_.end()) return it->second;
    if (order_.size() >= kCacheColumns) {
      cache_.erase(order_.front());
      order_.pop_front();
    }
    std::vector<double> col(n_);
    for (std::size_t j = 0; j < n_; ++j) col[j] = eval_unchecked(kernel_, x_.row(i), x_.row(j));
    order_.push_back(i);
    return cache_.emplace(i, std::move(col)).first->second;
  }

  double diagonal(std::size_t i) const { return diagonal_[i]; }

 private:
  static constexpr std::size_t kCacheColumns = 256;
  const DenseMatrix<double>& x_;
  const KernelSpec& kernel_;
  std::size_t n_;
  bool precomputed_ = false;
  DenseMatrix<double> gram_;
  std::vector<double> diagonal_;
  std::unordered_map<std::size_t, std::vector<double>> cache_;
  std::deque<std::size_t> order_;
};

void write_double(std::ostream& out, double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.write(buf, end - buf);
}

}  // namespace

void validate_kernel(const KernelSpec& kernel) {
  std::visit(
      [](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, RbfKernel>) {
          if (!(k.gamma > 0.0)) throw DataError("rbf kernel: gamma must be > 0");
        } else if constexpr (std::is_same_v<K, PukKernel>) {
          if (!(k.omega > 0.0)) throw DataError("puk kernel: omega must be > 0");
          if (!(k.sigma > 0.0)) throw DataError("puk kernel: sigma must be > 0");
        }
      },
      kernel);
}

double kernel_eval(const KernelSpec& kernel, std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw DataError("kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
  }
  return eval_unchecked(kernel, x, y);
}

DenseMatrix<double> gram_matrix(const DenseMatrix<double>& points, const KernelSpec& kernel,
                                Execution exec) {
  const auto n = static_cast<std::int64_t>(points.rows());
  DenseMatrix<double> gram(points.rows(), points.rows());
  // Each (i, j >= i) entry is computed once and mirrored, so serial and
  // parallel runs give identical matrices.
  auto fill_row = [&](std::int64_t i) {
    const auto iu = static_cast<std::size_t>(i);
    for (std::size_t j = iu; j < points.rows(); ++j) {
      const double k = eval_unchecked(kernel, points.row(iu), points.row(j));
      gram(iu, j) = k;
      gram(j, iu) = k;
    }
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t i = 0; i < n; ++i) fill_row(i);
  } else {
    for (std::int64_t i = 0; i < n; ++i) fill_row(i);
  }
  return gram;
}

std::string kernel_name(const KernelSpec& kernel) {
  std::ostringstream out;
  std::visit(
      [&](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, LinearKernel>) {
          out << "linear";
        } else if constexpr (std::is_same_v<K, RbfKernel>) {
          out << "rbf ";
          write_double(out, k.gamma);
        } else {
          out << "puk ";
          write_double(out, k.omega);
          out << ' ';
          write_double(out, k.sigma);
        }
      },
      kernel);
  return out.str();
}

double SvmModel::decision(std::span<const double> x) const {
  if (x.size() != dim) {
    throw DataError("svm: feature dimension " + std::to_string(x.size()) + ", model expects " +
                    std::to_string(dim));
  }
  double f = bias;
  for (std::size_t i = 0; i < dual_coefs.size(); ++i) {
    f += dual_coefs[i] * eval_unchecked(kernel, support_vectors.row(i), x);
  }
  return f;
}

SmoResult train_smo(const DenseMatrix<double>& features, std::span<const int> labels,
                    const SmoConfig& config) {
  const std::size_t n = features.rows();
  if (labels.size() != n) throw DataError("train_smo: feature and label counts differ");
  if (!(config.C > 0.0)) throw DataError("train_smo: C must be > 0");
  validate_kernel(config.kernel);
  std::size_t positives = 0;
  for (int y : labels) {
    if (y != 1 && y != -1) throw DataError("train_smo: labels must be +1 or -1");
    positives += y == 1;
  }
  if (positives == 0 || positives == n) {
    throw DataError("train_smo: training data must contain both classes");
  }

  const double C = config.C;
  KernelColumns kernel(features, config.kernel, config.exec);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> grad(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  shuffle(order, rng);

  auto y = [&](std::size_t i) { return static_cast<double>(labels[i]); };
  auto in_up = [&](std::size_t t) { return labels[t] == 1 ? alpha[t] < C : alpha[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return labels[t] == 1 ? alpha[t] > 0.0 : alpha[t] < C; };

  SmoResult result;
  std::size_t iter = 0;
  for (; iter < config.max_iterations; ++iter) {
    // i: maximal violator in I_up by -y_t * grad_t.
    double g_max = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t : order) {
      if (in_up(t) && -y(t) * grad[t] >= g_max) {
        g_max = -y(t) * grad[t];
        i = t;
      }
    }
    if (i == n) break;
    const auto k_i = kernel.column(i);
    // j: second-order selection within I_low.
    double g_min = std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t : order) {
      if (!in_low(t)) continue;
      const double v = -y(t) * grad[t];
      g_min = std::min(g_min, v);
      const double b = g_max - v;
      if (b > 0.0) {
        double a = kernel.diagonal(i) + kernel.diagonal(t) - 2.0 * k_i[t];
        if (a <= 0.0) a = kTau;
        const double obj = -(b * b) / a;
        if (obj <= best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    if (g_max - g_min < config.tol || j == n) {
      result.converged = true;
      break;
    }
    const auto k_j = kernel.column(j);

    const double old_ai = alpha[i];
    const double old_aj = alpha[j];
    const double q_ij = y(i) * y(j) * k_i[j];
    if (labels[i] != labels[j]) {
      double quad = kernel.diagonal(i) + kernel.diagonal(j) + 2.0 * q_ij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (-grad[i] - grad[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = kernel.diagonal(i) + kernel.diagonal(j) - 2.0 * q_ij;
      if (quad <= 0.0) quad = kTau;
      const double delta = (grad[i] - grad[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }
    const double d_i = alpha[i] - old_ai;
    const double d_j = alpha[j] - old_aj;
    for (std::size_t t = 0; t < n; ++t) {
      grad[t] += y(t) * (y(i) * k_i[t] * d_i + y(j) * k_j[t] * d_j);
    }
  }
  result.iterations = iter;
  if (!result.converged) {
    log(LogLevel::Warn, "train_smo: stopped after " + std::to_string(iter) +
                            " iterations without reaching tol");
  }

  // Bias from free multipliers, or the midpoint of the feasible interval.
  double upper = std::numeric_limits<double>::infinity();
  double lower = -std::numeric_limits<double>::infinity();
  double free_sum = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y(t) * grad[t];
    if (alpha[t] >= C) {
      if (labels[t] == -1) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else if (alpha[t] <= 0.0) {
      if (labels[t] == 1) upper = std::min(upper, yg);
      else lower = std::max(lower, yg);
    } else {
      ++n_free;
      free_sum += yg;
    }
  }
  const double rho = n_free > 0 ? free_sum / static_cast<double>(n_free) : (upper + lower) / 2.0;

  SvmModel& model = result.model;
  model.kernel = config.kernel;
  model.C = C;
  model.bias = -rho;
  model.dim = features.cols();
  model.support_vectors = DenseMatrix<double>(0, features.cols());
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] > 0.0) {
      model.support_vectors.append_row(features.row(t));
      model.dual_coefs.push_back(alpha[t] * y(t));
    }
  }
  result.alphas = std::move(alpha);
  return result;
}

double dual_objective(const DenseMatrix<double>& gram, std::span<const int> labels,
                      std::span<const double> alphas) {
  double linear = 0.0;
  double quadratic = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    linear += alphas[i];
    for (std::size_t j = 0; j < alphas.size(); ++j) {
      quadratic += alphas[i] * alphas[j] * labels[i] * labels[j] * gram(i, j);
    }
  }
  return linear - 0.5 * quadratic;
}

void save_svm(const SvmModel& model, std::ostream& out) {
  out << "sieve-svm 1\n";
  out << "kernel " << kernel_name(model.kernel) << '\n';
  out << "C ";
  write_double(out, model.C);
  out << "\nbias ";
  write_double(out, model.bias);
  out << "\ndim " << model.dim << '\n';
  out << "n_sv " << model.dual_coefs.size() << '\n';
  for (std::size_t i = 0; i < model.dual_coefs.size(); ++i) {
    write_double(out, model.dual_coefs[i]);
    for (double x : model.support_vectors.row(i)) {
      out << ' ';
      write_double(out, x);
    }
    out << '\n';
  }
}

void save_svm(const SvmModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path.string() + "' for writing");
  save_svm(model, out);
  if (!out) throw DataError("write error on '" + path.string() + "'");
}

namespace {

class LineReader {
 public:
  LineReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  std::vector<std::string> fields() {
    std::string line;
    if (!std::getline(in_, line)) throw LineError(name_, line_ + 1, "unexpected end of file");
    ++line_;
    std::istringstream ss(line);
    std::vector<std::string> out;
    for (std::string f; ss >> f;) out.push_back(f);
    return out;
  }

  double number(const std::string& field) const {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) fail("bad number '" + field + "'");
    return v;
  }

  std::size_t count(const std::string& field) const {
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size()) fail("bad count '" + field + "'");
    return v;
  }

  // "key value" line; returns value.
  std::string keyed(const std::string& key) {
    auto f = fields();
    if (f.size() != 2 || f[0] != key) fail("expected '" + key + " <value>'");
    return f[1];
  }

  [[noreturn]] void fail(const std::string& what) const { throw LineError(name_, line_, what); }

 private:
  std::istream& in_;
  std::string name_;
  std::size_t line_ = 0;
};

}  // namespace

SvmModel load_svm(std::istream& in, const std::string& name) {
  LineReader reader(in, name);
  auto magic = reader.fields();
  if (magic.size() != 2 || magic[0] != "sieve-svm" || magic[1] != "1") {
    reader.fail("not a sieve-svm version 1 file");
  }
  SvmModel model;
  auto k = reader.fields();
  if (k.size() == 2 && k[0] == "kernel" && k[1] == "linear") {
    model.kernel = LinearKernel{};
  } else if (k.size() == 3 && k[0] == "kernel" && k[1] == "rbf") {
    model.kernel = RbfKernel{reader.number(k[2])};
  } else if (k.size() == 4 && k[0] == "kernel" && k[1] == "puk") {
    model.kernel = PukKernel{reader.number(k[2]), reader.number(k[3])};
  } else {
    reader.fail("bad kernel line");
  }
  try {
    validate_kernel(model.kernel);
  } catch (const DataError& e) {
    reader.fail(e.what());
  }
  model.C = reader.number(reader.keyed("C"));
  model.bias = reader.number(reader.keyed("bias"));
  model.dim = reader.count(reader.keyed("dim"));
  const std::size_t n_sv = reader.count(reader.keyed("n_sv"));
  model.support_vectors = DenseMatrix<double>(0, model.dim);
  std::vector<double> row(model.dim);
  for (std::size_t i = 0; i < n_sv; ++i) {
    auto f = reader.fields();
    if (f.size() != model.dim + 1) {
      reader.fail("expected a coefficient and " + std::to_string(model.dim) + " features");
    }
    model.dual_coefs.push_back(reader.number(f[0]));
    for (std::size_t d = 0; d < model.dim; ++d) row[d] = reader.number(f[d + 1]);
    model.support_vectors.append_row(row);
  }
  return model;
}

SvmModel load_svm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return load_svm(in, path.string());
}

}  // namespace sieve
