#ifndef CULIFT_LSC_HPP
#define CULIFT_LSC_HPP

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "culift/region.hpp"

namespace culift {

/// An element of {0, 1, 2, ..., inf}. Addition saturates at infinity.
class ExtNat {
 public:
  constexpr ExtNat() = default;
  constexpr ExtNat(std::uint64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtNat infinity() { return ExtNat(kInf); }

  constexpr bool is_infinite() const { return value_ == kInf; }
  constexpr std::uint64_t value() const { return value_; }

  friend constexpr ExtNat operator+(ExtNat a, ExtNat b) {
    if (a.is_infinite() || b.is_infinite() || a.value_ > kInf - 1 - b.value_) return infinity();
    return ExtNat(a.value_ + b.value_);
  }
  ExtNat& operator+=(ExtNat o) { return *this = *this + o; }

  friend constexpr auto operator<=>(ExtNat, ExtNat) = default;

  std::string to_string() const { return is_infinite() ? "inf" : std::to_string(value_); }

 private:
  static constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t value_ = 0;
};

/**
 * A function from the sample grid to ExtNat.
 *
 * On a finite grid every such function is lower semicontinuous; together with
 * pointwise addition and order these model the Cuntz semigroup of C(Omega).
 */
class LscFn {
 public:
  LscFn(RegionPtr region, std::vector<ExtNat> values);

  static LscFn zero(RegionPtr region);
  static LscFn constant(RegionPtr region, ExtNat value);

  const RegionPtr& region() const { return region_; }
  std::span<const ExtNat> values() const { return values_; }
  ExtNat operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  bool is_finite() const;
  ExtNat max_value() const;
  /// Grid mask of the level set {f >= k}.
  std::vector<bool> level_set(std::uint64_t k) const;

  friend bool operator==(const LscFn& a, const LscFn& b);

 private:
  RegionPtr region_;
  std::vector<ExtNat> values_;
};

LscFn indicator(const OpenSet& set);
LscFn add(const LscFn& f, const LscFn& g);
inline LscFn operator+(const LscFn& f, const LscFn& g) { return add(f, g); }
bool leq(const LscFn& f, const LscFn& g);
/// Pointwise supremum; the supremum of an increasing chain.
LscFn supremum(std::span<const LscFn> chain);
/// Grid proxy for compact containment f << g: f finite, and the one-step
/// neighbourhood of every level set {f >= k} lies inside {g >= k}.
bool way_below(const LscFn& f, const LscFn& g);
/// f on V, zero outside.
LscFn restrict(const LscFn& f, const OpenSet& set);

}  // namespace culift

#endif  // CULIFT_LSC_HPP
