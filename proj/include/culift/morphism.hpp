#ifndef CULIFT_MORPHISM_HPP
#define CULIFT_MORPHISM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "culift/lsc.hpp"
#include "culift/matrix.hpp"
#include "culift/region.hpp"

namespace culift {

/// A point carrying a positive integer rank.
struct Atom {
  Complex z;
  std::uint64_t weight;
};

/**
 * Read-only view of a Cu-morphism into Cu(M_n) through its values on
 * indicator functions: rank(O) = alpha(1_O).
 *
 * The lifting algorithms consume morphisms only through this interface.
 * Implementations must be pure.
 */
class RankEvaluator {
 public:
  virtual ~RankEvaluator() = default;

  virtual std::uint64_t rank(const OpenSet& set) const = 0;
  virtual std::uint64_t target_dim() const = 0;
  virtual const RegionPtr& region() const = 0;

  std::uint64_t total() const { return rank(OpenSet::whole(region())); }
};

/**
 * Canonical form of a Cu-morphism Lsc(Omega, N-bar) -> Cu(M_n): a finite
 * multiset of weighted atoms with total mass at most n.
 */
class RankMeasure final : public RankEvaluator {
 public:
  RankMeasure(RegionPtr region, std::uint64_t target_dim, std::vector<Atom> atoms);

  std::uint64_t rank(const OpenSet& set) const override;
  std::uint64_t target_dim() const override { return n_; }
  const RegionPtr& region() const override { return region_; }

  std::span<const Atom> atoms() const { return atoms_; }
  std::uint64_t mass() const { return mass_; }

  /// Coincident atoms merged, sorted lexicographically by location.
  RankMeasure canonical() const;

 private:
  RegionPtr region_;
  std::uint64_t n_;
  std::vector<Atom> atoms_;
  std::uint64_t mass_ = 0;
};

/// Orthogonal sum: atoms concatenated, target dimensions added.
RankMeasure operator+(const RankMeasure& a, const RankMeasure& b);

/// True when the atom multisets agree, matching locations up to `tol`.
bool same_multiset(const RankMeasure& a, const RankMeasure& b, double tol = 1e-12);

/// alpha restricted to an open set V: rank(O) = alpha(1_{O cap V}).
class RestrictedRank final : public RankEvaluator {
 public:
  RestrictedRank(const RankEvaluator& base, OpenSet domain) : base_(base), domain_(std::move(domain)) {}

  std::uint64_t rank(const OpenSet& set) const override { return base_.rank(set.intersect(domain_)); }
  std::uint64_t target_dim() const override { return base_.target_dim(); }
  const RegionPtr& region() const override { return base_.region(); }

 private:
  const RankEvaluator& base_;
  OpenSet domain_;
};

/// The normalised trace functional on Cu(M_n): m -> m / n.
struct NormalizedTrace {
  std::uint64_t n;
  double operator()(ExtNat m) const;
};

std::uint64_t eval_indicator(const RankEvaluator& alpha, const OpenSet& set);
/// Direct weighted sum: each atom reads f at its nearest grid point.
ExtNat eval_lsc(const RankMeasure& alpha, const LscFn& f);
/// Level-set route: sum over k >= 1 of alpha(1_{f >= k}).
ExtNat eval_lsc_by_levels(const RankEvaluator& alpha, const LscFn& f);
/// Normalised measure mu(O) = rank(O) / n.
double measure(const RankEvaluator& alpha, const OpenSet& set);
/// min over centres of measure(alpha, B(center, radius)); throws
/// std::domain_error if some ball carries no mass.
double min_ball_mass(const RankEvaluator& alpha, std::span<const Complex> centers, double radius);

/// Finite-dimensional unital homomorphism f -> sum f(z_i) p_i, stored as
/// (point, rank of p_i) pairs.
struct FinDimHom {
  std::vector<Atom> pairs;
  std::uint64_t n = 0;

  void validate() const;
};

FinDimHom direct_sum(const FinDimHom& a, const FinDimHom& b);
/// The diagonal matrix phi(id).
NormalMatrix realize(const FinDimHom& phi);

RankMeasure cu_of_hom(const FinDimHom& phi, const RegionPtr& region);
/// Spectral multiset of x, eigenvalues clustered at 1e-8 ||x||.
RankMeasure cu_of_normal(const NormalMatrix& x, const RegionPtr& region);

}  // namespace culift

#endif  // CULIFT_MORPHISM_HPP
