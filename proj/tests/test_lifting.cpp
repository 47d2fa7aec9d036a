#include <doctest.h>

#include <algorithm>
#include <queue>
#include <random>

#include "culift/lifting.hpp"
#include "culift/metrics.hpp"

using namespace culift;

namespace {

RankMeasure rm(const RegionPtr& r, std::uint64_t n, std::vector<Atom> atoms) { return {r, n, std::move(atoms)}; }

RankMeasure unital(const RegionPtr& r, std::vector<Atom> atoms) {
  std::uint64_t n = 0;
  for (const auto& a : atoms) n += a.weight;
  return {r, n, std::move(atoms)};
}

// Components by breadth-first search over a shared-grid-point adjacency
// matrix, independent of the union-find in the library.
std::vector<std::vector<std::size_t>> bfs_components(const std::vector<std::vector<bool>>& masks,
                                                     const std::vector<bool>& active) {
  const auto n = masks.size();
  std::vector<int> label(n, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t s = 0; s < n; ++s) {
    if (!active[s] || label[s] >= 0) continue;
    out.emplace_back();
    std::queue<std::size_t> q;
    q.push(s);
    label[s] = static_cast<int>(out.size() - 1);
    while (!q.empty()) {
      const auto i = q.front();
      q.pop();
      out.back().push_back(i);
      for (std::size_t j = 0; j < n; ++j) {
        if (!active[j] || label[j] >= 0) continue;
        bool meet = false;
        for (std::size_t p = 0; p < masks[i].size() && !meet; ++p) meet = masks[i][p] && masks[j][p];
        if (meet) {
          label[j] = label[i];
          q.push(j);
        }
      }
    }
    std::sort(out.back().begin(), out.back().end());
  }
  return out;
}

std::vector<std::vector<std::size_t>> sorted(std::vector<std::vector<std::size_t>> g) {
  for (auto& c : g) std::sort(c.begin(), c.end());
  std::sort(g.begin(), g.end());
  return g;
}

}  // namespace

TEST_CASE("choose_annulus") {
  auto r = Region::segment({-1, 0}, {1, 0}, 201);
  const auto two = rm(r, 2, {{{0.6, 0}, 1}, {{0.8, 0}, 1}});
  const auto a = choose_annulus(two, {0, 0}, 1.0, 0.25);
  CHECK(a.s == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(a.eps < 0.1);
  CHECK(a.eps > 0.0);
  CHECK(two.rank(annulus(r, {0, 0}, a.s, a.eps)) == 0);

  const auto inside = rm(r, 1, {{{0.3, 0}, 1}});
  const auto b = choose_annulus(inside, {0, 0}, 1.0, 0.5);
  CHECK(b.s - b.eps > 0.5);
  CHECK(b.s + b.eps < 1.0);
  CHECK(inside.rank(annulus(r, {0, 0}, b.s, b.eps)) == 0);

  // random profiles: the chosen ring always stays inside (r/2, r) and is light
  std::mt19937_64 g(53);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 40; ++t) {
    std::vector<Atom> atoms;
    for (int k = 0; k < 8; ++k) atoms.push_back({{u(g), 0}, 1});
    const auto alpha = rm(r, 8, atoms);
    const double rad = 0.2 + 0.8 * std::abs(u(g));
    const auto c = choose_annulus(alpha, {0, 0}, rad, 1.0 / 8);
    CHECK(c.s - c.eps > rad / 2);
    CHECK(c.s + c.eps < rad);
    CHECK(measure(alpha, annulus(r, {0, 0}, c.s, c.eps)) <= 1.0 / 8 + 1e-12);
  }
}

TEST_CASE("greedy net covers") {
  auto r = Region::disk({0, 0}, 1.0, 0.1);
  const auto net = greedy_net(*r, 0.3);
  for (const auto& p : r->points()) {
    double best = INFINITY;
    for (auto i : net) best = std::min(best, std::abs(p - r->point(i)));
    CHECK(best < 0.3);
  }
  // net points are 0.3-separated
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t j = i + 1; j < net.size(); ++j) CHECK(std::abs(r->point(net[i]) - r->point(net[j])) >= 0.3);
}

TEST_CASE("cover examples") {
  auto r = Region::segment({0, 0}, {1, 0}, 41);
  const auto one = rm(r, 3, {{{0.5, 0}, 3}});
  // a single set needs the delta/4 net to collapse to one centre
  const auto big = build_cover(one, 5 * r->diameter());
  CHECK(big.sets.size() == 1);
  CHECK(big.certificates.all());

  const auto two = rm(r, 2, {{{0.2, 0}, 1}, {{0.8, 0}, 1}});
  const auto c = build_cover(two, 0.5);
  CHECK(c.sets.size() >= 2);
  CHECK(c.certificates.all());
  const auto again = verify_cover(two, c);
  CHECK(again.all());
}

TEST_CASE("cover certificates on random measures") {
  auto r = Region::disk({0, 0}, 1.0, 0.06);
  std::mt19937_64 g(59);
  std::uniform_int_distribution<std::size_t> pick(0, r->size() - 1);
  for (int t = 0; t < 12; ++t) {
    std::vector<Atom> atoms;
    for (int k = 0; k < 6; ++k) atoms.push_back({r->point(pick(g)), 1 + g() % 3});
    const auto alpha = rm(r, 20, atoms);
    const double delta = 0.2 + 0.1 * (t % 4);
    const auto cover = build_cover(alpha, delta);
    const auto cert = verify_cover(alpha, cover);
    CHECK(cert.all());

    // sets are pairwise disjoint on the grid and each has diameter <= delta
    std::vector<int> owner(r->size(), -1);
    for (std::size_t i = 0; i < cover.sets.size(); ++i) {
      const auto& mem = cover.members[i];
      for (auto p : mem) {
        CHECK(owner[p] == -1);
        owner[p] = static_cast<int>(i);
      }
      for (auto p : mem)
        for (auto q : mem) CHECK(std::abs(r->point(p) - r->point(q)) <= delta);
    }
  }
}

TEST_CASE("components") {
  auto r = Region::segment({0, 0}, {1, 0}, 101);
  const auto alpha = rm(r, 10, {{{0.1, 0}, 1}, {{0.3, 0}, 1}, {{0.5, 0}, 1}, {{0.9, 0}, 1}});

  std::vector<OpenSet> apart{OpenSet::ball(r, {0.1, 0}, 0.05), OpenSet::ball(r, {0.5, 0}, 0.05),
                             OpenSet::ball(r, {0.9, 0}, 0.05)};
  const auto p = components(alpha, apart);
  CHECK(p.groups.size() == 3);
  for (const auto& grp : p.groups) CHECK(grp.size() == 1);

  std::vector<OpenSet> chain{OpenSet::ball(r, {0.1, 0}, 0.15), OpenSet::ball(r, {0.3, 0}, 0.15),
                             OpenSet::ball(r, {0.5, 0}, 0.15)};
  const auto c = components(alpha, chain);
  REQUIRE(c.groups.size() == 1);
  CHECK(c.groups[0].size() == 3);

  std::vector<OpenSet> with_empty{OpenSet::ball(r, {0.1, 0}, 0.05), OpenSet::ball(r, {0.7, 0}, 0.05)};
  const auto e = components(alpha, with_empty);
  CHECK(e.groups.size() == 1);
  CHECK(e.leftover == std::vector<std::size_t>{1});

  // random balls, oracle: BFS over shared grid points
  std::mt19937_64 g(61);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 30; ++t) {
    std::vector<Atom> atoms;
    for (int k = 0; k < 5; ++k) atoms.push_back({r->point(g() % r->size()), 1});
    const auto a = rm(r, 5, atoms);
    std::vector<OpenSet> balls;
    std::vector<std::vector<bool>> masks;
    std::vector<bool> active;
    for (int k = 0; k < 7; ++k) {
      balls.push_back(OpenSet::ball(r, {u(g), 0}, 0.02 + 0.1 * u(g)));
      masks.push_back(balls.back().grid_mask());
      active.push_back(a.rank(balls.back()) > 0);
    }
    const auto got = components(a, balls);
    CHECK(sorted(got.groups) == sorted(bfs_components(masks, active)));
  }
}

TEST_CASE("lift on well separated atoms") {
  auto r = Region::disk({0, 0}, 1.0, 0.04);
  const double delta = 0.1;
  // pairwise separation > 4 delta, atoms on grid points
  std::vector<Atom> atoms{{r->point(r->nearest({-0.6, 0})), 2}, {r->point(r->nearest({0, 0.5})), 3},
                          {r->point(r->nearest({0.6, -0.2})), 1}};
  const auto alpha = rm(r, 6, atoms);
  const auto res = lift(alpha, delta);
  CHECK(res.phi.n == 6);
  res.phi.validate();
  const auto cu = cu_of_hom(res.phi, r);
  CHECK(d_cu(cu, alpha).value <= delta);
  CHECK(res.bound == doctest::Approx(d_cu(cu, alpha).value));
}

TEST_CASE("lift rank bookkeeping") {
  auto r = Region::segment({0, 0}, {1, 0}, 41);
  CHECK_THROWS_AS(lift(rm(r, 7, {{{0.25, 0}, 2}}), 0.2), std::invalid_argument);  // not unital

  const auto alpha = rm(r, 7, {{{0.25, 0}, 2}, {{0.3, 0}, 1}, {{0.75, 0}, 4}});
  const auto res = lift(alpha, 0.2);
  CHECK(res.phi.n == 7);
  std::uint64_t sum = 0;
  for (const auto& c : res.components) {
    std::uint64_t ranks = c.residual_rank;
    for (auto x : c.ranks) ranks += x;
    CHECK(ranks == c.mass);
    sum += c.mass;
  }
  CHECK(sum == 7);
  CHECK(res.bound < 6 * 0.2);
}

TEST_CASE("lift bound on random measures") {
  auto r = Region::disk({0, 0}, 1.0, 0.06);
  std::mt19937_64 g(67);
  std::uniform_real_distribution<double> u(-0.9, 0.9);
  for (int t = 0; t < 10; ++t) {
    std::vector<Atom> atoms;
    for (int k = 0; k < 5; ++k) {
      Complex z{u(g), u(g)};
      if (std::abs(z) > 0.95) z *= 0.9 / std::abs(z);
      atoms.push_back({z, 1 + g() % 2});
    }
    const auto alpha = unital(r, atoms);
    const double delta = 0.15 + 0.05 * (t % 3);
    const auto res = lift(alpha, delta);
    const double measured = d_cu(cu_of_hom(res.phi, r), alpha).value;
    CHECK(measured < 6 * delta);
    CHECK(res.phi.n == alpha.mass());
  }
}

TEST_CASE("exact lift") {
  auto r = Region::segment({0, 0}, {1, 0}, 41);
  const Complex z = r->point(13);
  const auto one = rm(r, 3, {{z, 3}});
  const auto single = exact_lift(one);
  const CMatrix expect = z * CMatrix::Identity(3, 3);
  CHECK((single.x.entries() - expect).norm() < 1e-12);
  for (double d : single.step_distances) CHECK(d < 1e-12);

  auto disk = Region::disk({0, 0}, 1.0, 0.06);
  std::mt19937_64 g(71);
  for (int t = 0; t < 4; ++t) {
    std::vector<Atom> atoms;
    for (int k = 0; k < 4; ++k) atoms.push_back({disk->point(g() % disk->size()), 1 + g() % 2});
    const auto alpha = unital(disk, atoms);
    const auto res = exact_lift(alpha);
    CHECK(res.x.normality_defect() <= 1e-10);
    CHECK(res.final_distance <= 2 * disk->resolution());
    CHECK(d_cu(cu_of_normal(res.x, disk), alpha).value == doctest::Approx(res.final_distance));
    CHECK(res.deltas.back() < disk->resolution());

    // atom order does not change the spectrum
    std::reverse(atoms.begin(), atoms.end());
    const auto flipped = exact_lift(unital(disk, atoms));
    CHECK(hausdorff_distance(flipped.x.eigenvalues(), res.x.eigenvalues()) < 1e-12);
  }
}
