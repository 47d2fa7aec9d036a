#include <doctest.h>

#include <cmath>
#include <random>

#include "culift/matrix.hpp"

using namespace culift;

namespace {

CMatrix haar_ish(std::mt19937_64& g, Eigen::Index n) {
  std::normal_distribution<double> nd;
  CMatrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = {nd(g), nd(g)};
  Eigen::HouseholderQR<CMatrix> qr(a);
  return qr.householderQ();
}

NormalMatrix random_normal(std::mt19937_64& g, Eigen::Index n) {
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Complex> ev(n);
  for (auto& l : ev) l = {u(g), u(g)};
  return NormalMatrix::from_spectrum(ev, haar_ish(g, n));
}

ContinuousFunction fn(std::string name, std::function<Complex(Complex)> f) { return {std::move(name), std::move(f), 1.0}; }

}  // namespace

TEST_CASE("normal matrix construction") {
  std::mt19937_64 g(1);
  const auto x = random_normal(g, 5);
  CHECK(x.normality_defect() < 1e-10);
  const NormalMatrix again(x.entries());
  CHECK(hausdorff_distance(again.eigenvalues(), x.eigenvalues()) < 1e-10);
  CHECK(x.norm() == doctest::Approx(operator_norm(x.entries())));

  CMatrix jordan = CMatrix::Zero(2, 2);
  jordan(0, 1) = 1.0;
  CHECK_THROWS(NormalMatrix{jordan});
  CHECK_THROWS(NormalMatrix::from_spectrum({1.0, 2.0}, CMatrix::Ones(2, 2)));
}

TEST_CASE("functional calculus") {
  std::mt19937_64 g(2);
  const auto x = random_normal(g, 4);
  const auto id = fn("id", [](Complex z) { return z; });
  CHECK((functional_calculus(x, id).entries() - x.entries()).norm() < 1e-12);

  const Complex c{0.3, -2.0};
  const auto k = functional_calculus(x, fn("c", [c](Complex) { return c; }));
  CHECK((k.entries() - c * CMatrix::Identity(4, 4)).norm() < 1e-12);

  // (fg)(x) = f(x) g(x)
  const auto f = fn("sq", [](Complex z) { return z * z; });
  const auto h = fn("conj", [](Complex z) { return std::conj(z); });
  const auto fh = fn("fh", [](Complex z) { return z * z * std::conj(z); });
  const CMatrix prod = functional_calculus(x, f).entries() * functional_calculus(x, h).entries();
  CHECK((functional_calculus(x, fh).entries() - prod).norm() < 1e-12);

  // conj gives the adjoint
  CHECK((functional_calculus(x, h).entries() - x.entries().adjoint()).norm() < 1e-12);

  CHECK_THROWS(functional_calculus(x, fn("bad", [](Complex) { return Complex(NAN, 0); })));
}

TEST_CASE("conjugation") {
  std::mt19937_64 g(3);
  const auto x = random_normal(g, 4);
  const CMatrix eye = CMatrix::Identity(4, 4);
  CHECK((conjugate(x, eye).entries() - x.entries()).norm() < 1e-12);

  const auto u = haar_ish(g, 4);
  const auto y = conjugate(x, u);
  CHECK((y.entries() - u * x.entries() * u.adjoint()).norm() < 1e-12);
  CHECK(hausdorff_distance(y.eigenvalues(), x.eigenvalues()) < 1e-10);

  // f(u x u*) = u f(x) u*
  const auto f = fn("exp", [](Complex z) { return std::exp(z); });
  const CMatrix lhs = functional_calculus(y, f).entries();
  const CMatrix rhs = u * functional_calculus(x, f).entries() * u.adjoint();
  CHECK((lhs - rhs).norm() < 1e-10);

  CHECK_THROWS(conjugate(x, 2.0 * eye));
}

TEST_CASE("convergence check") {
  const std::vector<Complex> d{0.0, 1.0, Complex(0, 1)};
  const auto x = NormalMatrix::diagonal(d);
  const std::vector<ContinuousFunction> id{fn("id", [](Complex z) { return z; })};

  std::vector<NormalMatrix> same(5, x);
  CHECK(convergence_check(same, x, id, 1e-6) == 1);

  std::vector<NormalMatrix> xs;
  for (int k = 1; k <= 30; ++k) {
    std::vector<Complex> dk = d;
    for (auto& l : dk) l += std::ldexp(1.0, -k);
    xs.push_back(NormalMatrix::diagonal(dk));
  }
  for (double eps : {0.1, 1e-3, 1e-6}) {
    const auto n = convergence_check(xs, x, id, eps);
    CHECK(std::ldexp(1.0, -static_cast<int>(n)) < eps);
    CHECK(std::ldexp(1.0, -static_cast<int>(n - 1)) >= eps);
  }
  CHECK_THROWS(convergence_check(xs, x, id, 1e-12));
}

TEST_CASE("spectral perturbation") {
  std::mt19937_64 g(4);
  for (int t = 0; t < 40; ++t) {
    const auto x = random_normal(g, 5), y = random_normal(g, 5);
    // Bauer-Fike for normal matrices
    CHECK(hausdorff_distance(x.eigenvalues(), y.eigenvalues()) <= operator_norm(x.entries() - y.entries()) + 1e-10);
  }
  const std::vector<Complex> a{0.0, 1.0}, b{0.0};
  CHECK(hausdorff_distance(a, b) == doctest::Approx(1.0));
  CHECK(hausdorff_distance(a, a) == 0.0);
}

TEST_CASE("monomial bound") {
  std::mt19937_64 g(5);
  std::uniform_int_distribution<int> deg(0, 3);
  for (int t = 0; t < 60; ++t) {
    const auto x = random_normal(g, 4);
    const NormalMatrix y = conjugate(x, haar_ish(g, 4));
    const int s = deg(g), k = deg(g);
    if (s + k == 0) continue;
    const auto mono = fn("m", [s, k](Complex z) { return std::pow(z, s) * std::pow(std::conj(z), k); });
    const double lhs = operator_norm(functional_calculus(x, mono).entries() - functional_calculus(y, mono).entries());
    const double m = std::max({1.0, x.norm(), y.norm()});
    const double d = operator_norm(x.entries() - y.entries());
    CHECK(lhs <= (s + k) * std::pow(m, s + k - 1) * d + 1e-9);
    CHECK(lhs <= (s + k) * std::pow(m, s + k) * d + 1e-9);
  }
}
