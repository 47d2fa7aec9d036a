#include <doctest.h>

#include <random>

#include "culift/lsc.hpp"

using namespace culift;

namespace {

LscFn random_fn(std::mt19937_64& g, const RegionPtr& r, std::uint64_t top, bool allow_inf = false) {
  std::uniform_int_distribution<std::uint64_t> v(0, top);
  std::vector<ExtNat> vals(r->size());
  for (auto& x : vals) {
    x = v(g);
    if (allow_inf && v(g) == top) x = ExtNat::infinity();
  }
  return LscFn(r, std::move(vals));
}

}  // namespace

TEST_CASE("ExtNat arithmetic saturates") {
  const auto inf = ExtNat::infinity();
  CHECK((ExtNat(3) + ExtNat(4)) == ExtNat(7));
  CHECK((inf + ExtNat(1)).is_infinite());
  CHECK((ExtNat(1) + inf).is_infinite());
  CHECK(ExtNat(5) < inf);
  CHECK(inf.to_string() == "inf");
  CHECK(ExtNat(12).to_string() == "12");
}

TEST_CASE("indicators") {
  auto r = Region::disk({0, 0}, 1.0, 0.1);
  CHECK(indicator(OpenSet::empty(r)) == LscFn::zero(r));
  CHECK(indicator(OpenSet::whole(r)) == LscFn::constant(r, 1));

  auto a = OpenSet::ball(r, {-0.2, 0}, 0.5), b = OpenSet::ball(r, {0.3, 0}, 0.5);
  const auto sum = indicator(a) + indicator(b);
  const auto both = a.intersect(b).grid_mask();
  for (std::size_t p = 0; p < r->size(); ++p) CHECK((sum[p] == ExtNat(2)) == both[p]);
}

TEST_CASE("addition and order") {
  auto r = Region::segment({0, 0}, {1, 0}, 30);
  std::mt19937_64 g(3);
  const auto zero = LscFn::zero(r);
  for (int i = 0; i < 50; ++i) {
    auto f = random_fn(g, r, 4, true), h = random_fn(g, r, 4), k = random_fn(g, r, 4);
    CHECK(f + zero == f);
    CHECK(f + h == h + f);
    CHECK((f + h) + k == f + (h + k));
    CHECK(leq(f, f + h));
    CHECK(leq(zero, f));
    if (leq(f, h) && leq(h, k)) CHECK(leq(f, k));
    // infinity absorbs
    const auto inf = LscFn::constant(r, ExtNat::infinity());
    CHECK(f + inf == inf);
  }
  CHECK_FALSE(leq(LscFn::constant(r, 2), LscFn::constant(r, 1)));
}

TEST_CASE("level sets and supremum") {
  auto r = Region::segment({0, 0}, {1, 0}, 5);
  LscFn f(r, {0, 1, 2, 3, ExtNat::infinity()});
  CHECK(f.level_set(2) == std::vector<bool>{false, false, true, true, true});
  CHECK(f.max_value().is_infinite());
  CHECK_FALSE(f.is_finite());

  std::vector<LscFn> chain;
  for (std::uint64_t k = 0; k < 4; ++k) chain.push_back(LscFn::constant(r, k));
  CHECK(supremum(chain) == LscFn::constant(r, 3));
}

TEST_CASE("way below") {
  auto r = Region::disk({0, 0}, 1.0, 0.03);
  REQUIRE(r->resolution() < 0.05);
  const auto small = indicator(OpenSet::ball(r, {0, 0}, 0.4));
  const auto big = indicator(OpenSet::ball(r, {0, 0}, 0.5));
  CHECK(way_below(small, big));
  CHECK_FALSE(way_below(big, big));
  CHECK_FALSE(way_below(big, small));
  CHECK(way_below(LscFn::zero(r), big));
  CHECK_FALSE(way_below(LscFn::constant(r, ExtNat::infinity()), LscFn::constant(r, ExtNat::infinity())));

  // f << g <= h gives f << h
  const auto huge = indicator(OpenSet::ball(r, {0, 0}, 0.7));
  REQUIRE(leq(big, huge));
  CHECK(way_below(small, huge));
  CHECK(leq(small, big));  // way below implies below
}

TEST_CASE("restriction") {
  auto r = Region::disk({0, 0}, 1.0, 0.1);
  std::mt19937_64 g(5);
  const auto f = random_fn(g, r, 3);
  CHECK(restrict(f, OpenSet::whole(r)) == f);
  CHECK(restrict(f, OpenSet::empty(r)) == LscFn::zero(r));

  // disjoint pieces add back up on their union
  auto left = OpenSet::ball(r, {-0.5, 0}, 0.4), right = OpenSet::ball(r, {0.5, 0}, 0.4);
  const auto both = restrict(f, left.unite(right));
  CHECK(restrict(f, left) + restrict(f, right) == both);
  CHECK(leq(both, f));
}
