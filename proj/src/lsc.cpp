#include "culift/lsc.hpp"

#include <algorithm>
#include <stdexcept>

namespace culift {

namespace {

void require_same(const LscFn& f, const LscFn& g, const char* what) {
  if (!same_region(f.region(), g.region())) throw std::invalid_argument(std::string(what) + ": region mismatch");
}

}  // namespace

LscFn::LscFn(RegionPtr region, std::vector<ExtNat> values)
    : region_(std::move(region)), values_(std::move(values)) {
  if (!region_) throw std::invalid_argument("lsc: null region");
  if (values_.size() != region_->size()) throw std::invalid_argument("lsc: function must be total on the grid");
}

LscFn LscFn::zero(RegionPtr region) {
  const auto n = region->size();
  return {std::move(region), std::vector<ExtNat>(n)};
}

LscFn LscFn::constant(RegionPtr region, ExtNat value) {
  const auto n = region->size();
  return {std::move(region), std::vector<ExtNat>(n, value)};
}

bool LscFn::is_finite() const {
  return std::none_of(values_.begin(), values_.end(), [](ExtNat v) { return v.is_infinite(); });
}

ExtNat LscFn::max_value() const {
  ExtNat m;
  for (auto v : values_) m = std::max(m, v);
  return m;
}

std::vector<bool> LscFn::level_set(std::uint64_t k) const {
  std::vector<bool> mask(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) mask[i] = values_[i] >= ExtNat(k);
  return mask;
}

bool operator==(const LscFn& a, const LscFn& b) {
  return same_region(a.region_, b.region_) && a.values_ == b.values_;
}

LscFn indicator(const OpenSet& set) {
  const auto mask = set.grid_mask();
  std::vector<ExtNat> values(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) values[i] = mask[i] ? 1 : 0;
  return {set.region(), std::move(values)};
}

LscFn add(const LscFn& f, const LscFn& g) {
  require_same(f, g, "add");
  std::vector<ExtNat> values(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) values[i] = f[i] + g[i];
  return {f.region(), std::move(values)};
}

bool leq(const LscFn& f, const LscFn& g) {
  require_same(f, g, "leq");
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i] > g[i]) return false;
  return true;
}

LscFn supremum(std::span<const LscFn> chain) {
  if (chain.empty()) throw std::invalid_argument("supremum: empty chain");
  std::vector<ExtNat> values(chain.front().values().begin(), chain.front().values().end());
  for (const auto& f : chain.subspan(1)) {
    require_same(chain.front(), f, "supremum");
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = std::max(values[i], f[i]);
  }
  return {chain.front().region(), std::move(values)};
}

bool way_below(const LscFn& f, const LscFn& g) {
  require_same(f, g, "way_below");
  if (!f.is_finite()) return false;
  const auto& region = *f.region();
  const double reach = region.neighbour_radius() * (1.0 + 1e-9);
  const auto pts = region.points();
  // Level sets are nested, so it suffices that g(q) >= f(p) for every q near p.
  for (std::size_t p = 0; p < pts.size(); ++p) {
    if (f[p] == ExtNat(0)) continue;
    for (std::size_t q = 0; q < pts.size(); ++q) {
      if (std::abs(pts[p] - pts[q]) <= reach && g[q] < f[p]) return false;
    }
  }
  return true;
}

LscFn restrict(const LscFn& f, const OpenSet& set) {
  if (!same_region(f.region(), set.region())) throw std::invalid_argument("restrict: region mismatch");
  const auto mask = set.grid_mask();
  std::vector<ExtNat> values(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) values[i] = mask[i] ? f[i] : ExtNat(0);
  return {f.region(), std::move(values)};
}

}  // namespace culift
