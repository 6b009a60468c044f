#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "sieve/error.hpp"
#include "sieve/svm.hpp"
#include "synthetic.hpp"

using namespace sieve;

namespace {

DenseMatrix<double> points(std::initializer_list<std::initializer_list<double>> rows) {
  DenseMatrix<double> m;
  for (auto r : rows) m.append_row(std::vector<double>(r));
  return m;
}

SmoConfig config(KernelSpec k, double C = 1.0, double tol = 1e-3) {
  SmoConfig c;
  c.kernel = k;
  c.C = C;
  c.tol = tol;
  return c;
}

}  // namespace

TEST_CASE("kernel values") {
  const std::vector<double> x = {0, 0};
  const std::vector<double> y = {0.5, 0};
  // ||x - y|| = sigma/2 gives exactly 1/2 for any omega.
  for (double omega : {0.5, 1.0, 3.0}) {
    CHECK(kernel_eval(PukKernel{omega, 1.0}, x, y) == doctest::Approx(0.5).epsilon(1e-14));
  }
  CHECK(kernel_eval(PukKernel{}, x, x) == 1.0);
  const std::vector<double> z = {std::sqrt(std::log(2.0)), 0};
  CHECK(kernel_eval(RbfKernel{1.0}, x, z) == doctest::Approx(0.5).epsilon(1e-14));
  const std::vector<double> a = {1, 2};
  const std::vector<double> b = {3, -1};
  CHECK(kernel_eval(LinearKernel{}, a, b) == 1.0);
  CHECK_THROWS_AS(kernel_eval(LinearKernel{}, a, std::vector<double>{1}), DataError);
  CHECK_THROWS_AS(validate_kernel(PukKernel{0.0, 1.0}), DataError);
  CHECK_THROWS_AS(validate_kernel(PukKernel{1.0, -1.0}), DataError);
  CHECK_THROWS_AS(validate_kernel(RbfKernel{0.0}), DataError);
  CHECK(kernel_name(PukKernel{}) == "puk 1 1");
  CHECK(kernel_name(RbfKernel{0.5}) == "rbf 0.5");
  CHECK(kernel_name(LinearKernel{}) == "linear");
}

TEST_CASE("Gram matrices are symmetric and positive semidefinite") {
  Rng rng(1);
  for (const KernelSpec& k : {KernelSpec{PukKernel{}}, KernelSpec{PukKernel{2.0, 0.5}},
                              KernelSpec{RbfKernel{0.3}}, KernelSpec{LinearKernel{}}}) {
    const auto d = testing::gaussian_blobs(rng, 40, 5, 1.0);
    const auto g = gram_matrix(d.x, k);
    CHECK(g == gram_matrix(d.x, k, Execution::Serial));
    for (std::size_t i = 0; i < 40; ++i) {
      for (std::size_t j = 0; j < 40; ++j) {
        CHECK(g(i, j) == g(j, i));
        CHECK(g(i, j) == doctest::Approx(kernel_eval(k, d.x.row(i), d.x.row(j))).epsilon(1e-15));
      }
    }
    CHECK(testing::min_eigenvalue(g) > -1e-9);
  }
}

TEST_CASE("SMO solutions satisfy KKT on random toy sets") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = testing::gaussian_blobs(rng, 30 + rng.below(30), 2 + rng.below(4), 1.5);
    const double C = trial % 2 ? 1.0 : 10.0;
    const KernelSpec k = trial % 3 == 0 ? KernelSpec{LinearKernel{}} : KernelSpec{PukKernel{}};
    const auto r = train_smo(d.x, d.y, config(k, C, 1e-4));
    CHECK(r.converged);
    CHECK(testing::max_kkt_violation(r, d.x, d.y, C) < 1e-3);
    double balance = 0;
    for (std::size_t i = 0; i < d.y.size(); ++i) {
      CHECK(r.alphas[i] >= 0.0);
      CHECK(r.alphas[i] <= C);
      balance += r.alphas[i] * d.y[i];
    }
    CHECK(std::abs(balance) < 1e-9);
  }
}

TEST_CASE("SMO reaches the brute-force dual optimum on six points") {
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = testing::gaussian_blobs(rng, 6, 2, 0.8);
    const KernelSpec k = trial % 2 ? KernelSpec{PukKernel{}} : KernelSpec{RbfKernel{0.7}};
    const double C = trial < 5 ? 1.0 : 0.3;
    const auto g = gram_matrix(d.x, k);
    const auto best = testing::brute_force_dual(g, d.y, C);
    REQUIRE(best.alphas.size() == 6);
    const auto r = train_smo(d.x, d.y, config(k, C, 1e-6));
    CHECK(dual_objective(g, d.y, r.alphas) == doctest::Approx(best.objective).epsilon(1e-6));
    for (std::size_t i = 0; i < 6; ++i) CHECK(r.alphas[i] == doctest::Approx(best.alphas[i]).epsilon(1e-3).scale(C));
  }
}

TEST_CASE("two separable points") {
  const auto x = points({{0.0}, {2.0}});
  const std::vector<int> y = {-1, 1};
  const auto r = train_smo(x, y, config(LinearKernel{}));
  CHECK(r.alphas[0] == doctest::Approx(0.5));
  CHECK(r.alphas[1] == doctest::Approx(0.5));
  CHECK(r.model.bias == doctest::Approx(-1.0));
  CHECK(r.model.decision(std::vector<double>{2.0}) == doctest::Approx(1.0));
  CHECK(r.model.predict(std::vector<double>{3.0}) == 1);
  CHECK(r.model.predict(std::vector<double>{-1.0}) == -1);
}

TEST_CASE("a zero decision value predicts -1") {
  SvmModel m;
  m.kernel = LinearKernel{};
  m.dim = 1;
  m.support_vectors = points({{1.0}});
  m.dual_coefs = {1.0};
  CHECK(m.predict(std::vector<double>{0.0}) == -1);
  CHECK(m.predict(std::vector<double>{1e-300}) == 1);
}

TEST_CASE("XOR is separable with PUK but not linearly") {
  const auto d = testing::xor_points();
  const auto puk = train_smo(d.x, d.y, config(PukKernel{}, 10.0));
  for (std::size_t i = 0; i < 4; ++i) CHECK(puk.model.predict(d.x.row(i)) == d.y[i]);
  const auto lin = train_smo(d.x, d.y, config(LinearKernel{}, 10.0));
  int right = 0;
  for (std::size_t i = 0; i < 4; ++i) right += lin.model.predict(d.x.row(i)) == d.y[i];
  CHECK(right < 4);
}

TEST_CASE("label validation") {
  const auto x = points({{0.0}, {1.0}, {2.0}});
  CHECK_THROWS_AS(train_smo(x, std::vector<int>{1, 1, 1}, config(PukKernel{})), DataError);
  CHECK_THROWS_AS(train_smo(x, std::vector<int>{1, 0, -1}, config(PukKernel{})), DataError);
  CHECK_THROWS_AS(train_smo(x, std::vector<int>{1, -1}, config(PukKernel{})), DataError);
  CHECK_THROWS_AS(train_smo(x, std::vector<int>{1, -1, 1}, config(PukKernel{}, 0.0)), DataError);
}

TEST_CASE("training is deterministic and nearly order independent") {
  Rng rng(4);
  const auto d = testing::gaussian_blobs(rng, 80, 3, 1.0);
  const auto c = config(PukKernel{}, 1.0, 1e-5);
  const auto a = train_smo(d.x, d.y, c);
  const auto b = train_smo(d.x, d.y, c);
  CHECK(a.alphas == b.alphas);
  CHECK(a.model.bias == b.model.bias);

  // Reversed example order: same problem, so the decision function agrees
  // up to the stopping tolerance.
  DenseMatrix<double> rx;
  std::vector<int> ry;
  for (std::size_t i = 80; i-- > 0;) {
    rx.append_row(d.x.row(i));
    ry.push_back(d.y[i]);
  }
  const auto r = train_smo(rx, ry, c);
  for (std::size_t i = 0; i < 80; ++i) {
    CHECK(r.model.decision(d.x.row(i)) == doctest::Approx(a.model.decision(d.x.row(i))).epsilon(1e-3).scale(1.0));
  }
}

TEST_CASE("model save and load round-trip") {
  Rng rng(5);
  const auto d = testing::gaussian_blobs(rng, 40, 4, 1.0);
  for (const KernelSpec& k : {KernelSpec{PukKernel{1.5, 0.7}}, KernelSpec{RbfKernel{0.1}}, KernelSpec{LinearKernel{}}}) {
    const auto r = train_smo(d.x, d.y, config(k));
    std::stringstream s;
    save_svm(r.model, s);
    const std::string text = s.str();
    const auto back = load_svm(s);
    CHECK(back.kernel == r.model.kernel);
    CHECK(back.bias == r.model.bias);
    CHECK(back.support_vectors == r.model.support_vectors);
    CHECK(back.dual_coefs == r.model.dual_coefs);
    std::ostringstream again;
    save_svm(back, again);
    CHECK(again.str() == text);
    for (std::size_t i = 0; i < 40; ++i) CHECK(back.decision(d.x.row(i)) == r.model.decision(d.x.row(i)));
  }
  std::istringstream bad("sieve-svm 1\nkernel cubic\n");
  CHECK_THROWS_AS(load_svm(bad), LineError);
  std::istringstream truncated("sieve-svm 1\nkernel linear\nC 1\nbias 0\ndim 1\nn_sv 2\n1 0\n");
  CHECK_THROWS_AS(load_svm(truncated), LineError);
}
