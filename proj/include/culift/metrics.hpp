#ifndef CULIFT_METRICS_HPP
#define CULIFT_METRICS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "culift/matrix.hpp"
#include "culift/morphism.hpp"

namespace culift {

struct MatchedPair {
  std::size_t alpha_index;
  std::size_t beta_index;
  std::uint64_t mass;
};

struct MatchingResult {
  /// Bottleneck distance; +inf when total masses differ.
  double value = 0.0;
  /// Transport plan between atom indices; empty when value is infinite.
  std::vector<MatchedPair> pairing;
  /// Thresholds tested by the binary search, in the order examined.
  std::vector<double> thresholds;

  bool finite() const;
};

/**
 * Bottleneck distance between two weighted point multisets: the least t such
 * that a perfect matching of the weight-expanded multisets uses only pairs at
 * distance <= t. Feasibility at a threshold is a capacitated max-flow (Hall's
 * condition); t is found by binary search over the pairwise distances.
 */
MatchingResult bottleneck_matching(std::span<const Atom> a, std::span<const Atom> b);

/// Cuntz distance between rank measures on the same region; +inf when the
/// target dimensions differ.
MatchingResult d_cu(const RankMeasure& alpha, const RankMeasure& beta);

/// Open-set oracle: the smallest candidate radius r (0 or a pairwise atom
/// distance) with alpha(1_O) <= beta(1_{O_r}) and beta(1_O) <= alpha(1_{O_r})
/// for every O in the family. +inf if no candidate works.
double d_cu_bruteforce(const RankMeasure& alpha, const RankMeasure& beta, std::span<const OpenSet> family);

/// Family for the oracle: unions of eps-balls over every subset of either
/// support, every grid-centred ball at every candidate radius, and Omega.
std::vector<OpenSet> oracle_family(const RankMeasure& alpha, const RankMeasure& beta, double eps);

/// d_W of normal matrices via their spectral rank measures.
double d_w(const NormalMatrix& x, const NormalMatrix& y, const RegionPtr& region);

struct DuBracket {
  double lower = 0.0;  ///< Hausdorff distance between the spectra
  double upper = 0.0;  ///< bottleneck eigenvalue matching
  CMatrix witness;     ///< unitary u with ||u x u^* - y|| = upper
  double residual = 0.0;
};

/// Bracket for the unitary-orbit distance inf_u ||u x u^* - y||.
DuBracket d_u_bracket(const NormalMatrix& x, const NormalMatrix& y);

struct MarriageCheck {
  double lhs = 0.0;  ///< d_cu(sum alpha_i, sum beta_i)
  double rhs = 0.0;  ///< min over permutations of max_i d_cu(alpha_i, beta_sigma(i))
  bool holds() const;
};

MarriageCheck marriage_check(std::span<const RankMeasure> alphas, std::span<const RankMeasure> betas);

}  // namespace culift

#endif  // CULIFT_METRICS_HPP
