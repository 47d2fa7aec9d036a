#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "culift/metrics.hpp"

using namespace culift;

namespace {

// Bottleneck value by enumerating every bijection of the expanded multisets.
double permutation_oracle(std::span<const Atom> a, std::span<const Atom> b) {
  std::vector<Complex> xa, xb;
  for (const auto& t : a) xa.insert(xa.end(), t.weight, t.z);
  for (const auto& t : b) xb.insert(xb.end(), t.weight, t.z);
  if (xa.size() != xb.size()) return INFINITY;
  std::vector<std::size_t> p(xa.size());
  std::iota(p.begin(), p.end(), 0);
  double best = INFINITY;
  do {
    double worst = 0;
    for (std::size_t i = 0; i < p.size(); ++i) worst = std::max(worst, std::abs(xa[i] - xb[p[i]]));
    best = std::min(best, worst);
  } while (std::next_permutation(p.begin(), p.end()));
  return best;
}

std::vector<Atom> random_atoms(std::mt19937_64& g, std::size_t mass, const Region& r) {
  std::uniform_int_distribution<std::size_t> pick(0, r.size() - 1);
  std::vector<Atom> atoms;
  while (mass > 0) {
    const std::uint64_t w = 1 + g() % std::min<std::size_t>(mass, 3);
    atoms.push_back({r.point(pick(g)), w});
    mass -= w;
  }
  return atoms;
}

RankMeasure rm(const RegionPtr& r, std::uint64_t n, std::vector<Atom> atoms) { return {r, n, std::move(atoms)}; }

}  // namespace

TEST_CASE("d_cu basics") {
  auto r = Region::segment({0, 0}, {1, 0}, 21);
  const auto a = rm(r, 2, {{{0, 0}, 1}, {{1, 0}, 1}});
  const auto b = rm(r, 2, {{{0.5, 0}, 1}, {{1, 0}, 1}});
  CHECK(d_cu(a, a).value == 0.0);
  CHECK(d_cu(a, b).value == doctest::Approx(0.5));
  CHECK(permutation_oracle(a.atoms(), b.atoms()) == doctest::Approx(0.5));

  std::vector<OpenSet> singles;
  for (const auto& z : {Complex(0, 0), Complex(0.5, 0), Complex(1, 0)}) singles.push_back(OpenSet::ball(r, z, 1e-6));
  singles.push_back(OpenSet::whole(r));
  CHECK(d_cu_bruteforce(a, b, singles) == doctest::Approx(0.5));
  CHECK(d_cu_bruteforce(a, a, singles) == 0.0);

  const auto three = rm(r, 4, {{{0, 0}, 3}});
  const auto four = rm(r, 4, {{{0, 0}, 4}});
  const auto m = d_cu(three, four);
  CHECK(std::isinf(m.value));
  CHECK_FALSE(m.finite());
  CHECK(m.pairing.empty());
}

TEST_CASE("bottleneck matching against permutations") {
  auto r = Region::disk({0, 0}, 1.0, 0.2);
  std::mt19937_64 g(31);
  for (int t = 0; t < 80; ++t) {
    const std::size_t mass = 1 + g() % 6;
    const auto a = random_atoms(g, mass, *r), b = random_atoms(g, mass, *r);
    const auto m = bottleneck_matching(a, b);
    CHECK(m.value == doctest::Approx(permutation_oracle(a, b)).epsilon(1e-12));

    // the returned plan is a transport plan within the bottleneck value
    std::vector<std::uint64_t> out(a.size()), in(b.size());
    for (const auto& p : m.pairing) {
      out[p.alpha_index] += p.mass;
      in[p.beta_index] += p.mass;
      CHECK(std::abs(a[p.alpha_index].z - b[p.beta_index].z) <= m.value + 1e-12);
    }
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(out[i] == a[i].weight);
    for (std::size_t j = 0; j < b.size(); ++j) CHECK(in[j] == b[j].weight);
  }
}

TEST_CASE("open-set oracle agrees with matching") {
  auto r = Region::segment({0, 0}, {1, 0}, 15);
  std::mt19937_64 g(37);
  for (int t = 0; t < 25; ++t) {
    const std::size_t mass = 1 + g() % 4;
    const auto a = rm(r, mass, random_atoms(g, mass, *r)), b = rm(r, mass, random_atoms(g, mass, *r));
    const double eps = 1e-9;
    const auto family = oracle_family(a, b, eps);
    CHECK(d_cu_bruteforce(a, b, family) == doctest::Approx(d_cu(a, b).value).epsilon(1e-9));
  }
}

TEST_CASE("metric axioms on random triples") {
  auto r = Region::disk({0, 0}, 1.0, 0.15);
  std::mt19937_64 g(41);
  for (int t = 0; t < 100; ++t) {
    const std::size_t mass = 1 + g() % 8;
    const auto a = rm(r, 8, random_atoms(g, mass, *r));
    const auto b = rm(r, 8, random_atoms(g, mass, *r));
    const auto c = rm(r, 8, random_atoms(g, mass, *r));
    const double ab = d_cu(a, b).value, bc = d_cu(b, c).value, ac = d_cu(a, c).value;
    CHECK(ab == d_cu(b, a).value);
    CHECK(ac <= ab + bc + 1e-9);
    CHECK(d_cu(a, a).value == 0.0);
    if (ab == 0.0) CHECK(same_multiset(a.canonical(), b.canonical()));
  }
}

TEST_CASE("d_w") {
  auto r = Region::disk({0, 0}, 1.5, 0.1);
  const std::vector<Complex> dx{0.0, 1.0}, dy{0.5, 1.0};
  const auto x = NormalMatrix::diagonal(dx), y = NormalMatrix::diagonal(dy);
  CHECK(d_w(x, x, r) == 0.0);
  CHECK(d_w(x, y, r) == doctest::Approx(0.5));

  CMatrix a = CMatrix::Random(2, 2);
  Eigen::HouseholderQR<CMatrix> qr(a);
  const CMatrix u = qr.householderQ();
  CHECK(d_w(x, conjugate(x, u), r) <= 1e-8);
}

TEST_CASE("d_u bracket") {
  const std::vector<Complex> dx{0.0, 1.0}, dy{0.5, 1.0};
  const auto x = NormalMatrix::diagonal(dx), y = NormalMatrix::diagonal(dy);

  const auto same = d_u_bracket(x, x);
  CHECK(same.lower == 0.0);
  CHECK(same.upper == 0.0);
  CHECK((same.witness - CMatrix::Identity(2, 2)).norm() < 1e-12);

  const auto b = d_u_bracket(x, y);
  CHECK(b.lower == doctest::Approx(0.5));
  CHECK(b.upper == doctest::Approx(0.5));
  CHECK((b.witness - CMatrix::Identity(2, 2)).norm() < 1e-12);
  CHECK(b.residual == doctest::Approx(0.5));

  // lower <= ||u x u* - y|| for a random u, and the witness attains upper
  std::mt19937_64 g(43);
  std::uniform_real_distribution<double> v(-1, 1);
  for (int t = 0; t < 30; ++t) {
    std::vector<Complex> ex(4), ey(4);
    for (auto& l : ex) l = {v(g), v(g)};
    for (auto& l : ey) l = {v(g), v(g)};
    CMatrix m = CMatrix::Random(4, 4);
    Eigen::HouseholderQR<CMatrix> q(m);
    const auto xx = NormalMatrix::diagonal(ex);
    const auto yy = NormalMatrix::from_spectrum(ey, q.householderQ());
    const auto br = d_u_bracket(xx, yy);
    CHECK(br.lower <= br.upper + 1e-12);
    CHECK(br.residual <= br.upper + 1e-9);
    CHECK(unitarity_defect(br.witness) < 1e-10);
    CMatrix w = CMatrix::Random(4, 4);
    Eigen::HouseholderQR<CMatrix> q2(w);
    const CMatrix u = q2.householderQ();
    CHECK(br.lower <= operator_norm(u * xx.entries() * u.adjoint() - yy.entries()) + 1e-9);
  }
}

TEST_CASE("marriage") {
  auto r = Region::disk({0, 0}, 1.0, 0.2);
  std::mt19937_64 g(47);
  const auto a = rm(r, 3, random_atoms(g, 3, *r)), b = rm(r, 3, random_atoms(g, 3, *r));
  const std::vector<RankMeasure> as{a}, bs{b};
  const auto one = marriage_check(as, bs);
  CHECK(one.lhs == doctest::Approx(one.rhs));

  for (int t = 0; t < 40; ++t) {
    std::vector<RankMeasure> xs, ys;
    for (int k = 0; k < 3; ++k) {
      const std::size_t m = 1 + g() % 3;
      xs.push_back(rm(r, m, random_atoms(g, m, *r)));
      ys.push_back(rm(r, m, random_atoms(g, m, *r)));
    }
    const auto c = marriage_check(xs, ys);
    CHECK(c.holds());
    CHECK(marriage_check(xs, xs).lhs == 0.0);
  }
}

TEST_CASE("different targets are infinitely far apart") {
  auto r = Region::segment({0, 0}, {1, 0}, 11);
  const auto a = rm(r, 2, {{{0, 0}, 2}}), b = rm(r, 3, {{{0, 0}, 2}});
  CHECK(std::isinf(d_cu(a, b).value));
  const std::vector<OpenSet> family{OpenSet::whole(r)};
  CHECK(std::isinf(d_cu_bruteforce(a, b, family)));
  auto other = Region::segment({0, 0}, {2, 0}, 11);
  CHECK_THROWS(d_cu(a, rm(other, 2, {{{0, 0}, 2}})));
}
