#ifndef CULIFT_LIFTING_HPP
#define CULIFT_LIFTING_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "culift/matrix.hpp"
#include "culift/morphism.hpp"
#include "culift/region.hpp"

namespace culift {

class LiftError : public std::runtime_error {
 public:
  enum class Kind {
    kUnresolvable,    // mass cannot be captured by grid-centred balls at this delta
    kCertificate,     // a constructed cover failed a certificate
    kBoundViolated,   // verified d_cu >= 6 delta
    kNonConvergence,  // aligned sequence failed the geometric bound
  };

  LiftError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct AnnulusChoice {
  double s = 0.0;
  double eps = 0.0;
};

/**
 * Picks s in (r/2, r) and eps > 0 with s +- eps in (r/2, r) such that the
 * thickened circle R(x, s)_eps has measure <= sigma.
 *
 * The radial mass profile around x is probed only through the evaluator:
 * its jump radii inside [r/2, r] are located by bisection on thin open
 * rings, and s is the midpoint of the widest gap between consecutive jumps
 * (ties go to the smaller s), with eps a quarter of that gap. Radii in
 * `avoid` count as extra breakpoints, so the ring stays clear of them.
 */
AnnulusChoice choose_annulus(const RankEvaluator& alpha, Complex x, double r, double sigma,
                             std::span<const double> avoid = {});

/// Farthest-point insertion over the grid points in `candidates`, starting at
/// the lexicographically smallest; stops when every candidate is closer than
/// `radius` to some centre.
std::vector<std::size_t> greedy_net(const Region& region, std::span<const std::size_t> candidates, double radius);
std::vector<std::size_t> greedy_net(const Region& region, double radius);

struct CoverCertificates {
  bool dense = false;      // dist(p, U) < delta for every grid point p of the domain
  bool small = false;      // diameter(O_i) <= delta
  bool separated = false;  // dist(O_i, O_j) > 0 for i != j
  bool dominated = false;  // alpha(1_{Omega \ cl U}) <= alpha(1_{(O_i)_delta cap U})

  bool all() const { return dense && small && separated && dominated; }
};

/// An almost delta-cover: disjoint open sets O_1..O_N of a domain.
struct DeltaCover {
  double delta = 0.0;
  OpenSet domain;
  std::vector<Complex> centers;
  std::vector<AnnulusChoice> annuli;
  double sigma = 0.0;  // min normalised mass of B(center, delta/2)
  double eta = 0.0;    // half-width of the removed rings
  std::vector<OpenSet> sets;
  std::vector<std::vector<std::size_t>> members;  // grid points of each set
  std::vector<std::size_t> origin;                // centre index each set was carved from
  OpenSet united;                                 // U
  OpenSet residual;                               // Omega \ closure(U)
  double separation = 0.0;                        // lower bound on min dist(O_i, O_j)
  CoverCertificates certificates;
};

/// Re-evaluates all four conditions directly on the grid and through alpha.
CoverCertificates verify_cover(const RankEvaluator& alpha, const DeltaCover& cover);

/// Cover of `domain` from the balls B(center, delta/4), each of which must
/// carry mass inside B(center, delta/2). Throws LiftError(kCertificate) if
/// the domination condition fails.
DeltaCover build_cover(const RankEvaluator& alpha, double delta, std::span<const Complex> centers,
                       const OpenSet& domain);
/// Whole-region form: centres from a greedy delta/4-net, keeping only those
/// whose delta/2-ball carries mass; the domain is the union of their
/// delta/4-balls.
DeltaCover build_cover(const RankEvaluator& alpha, double delta);

struct Partition {
  std::vector<std::vector<std::size_t>> groups;  // almost connected components
  std::vector<std::size_t> leftover;             // sets carrying no mass
};

/// Union-find over the sets that carry mass; two join when they share a grid
/// point or their intersection carries mass. Groups are ordered by their
/// lexicographically smallest grid point.
Partition components(const RankEvaluator& alpha, std::span<const OpenSet> sets);

struct ComponentLift {
  DeltaCover cover;
  double rho = 0.0;
  std::uint64_t mass = 0;
  std::vector<std::uint64_t> ranks;  // x_i, one per cover set
  std::uint64_t residual_rank = 0;   // rank of p_0
  std::vector<Complex> points;       // z_i, one per cover set
  std::optional<Complex> residual_point;
};

struct LiftResult {
  FinDimHom phi;
  double bound = 0.0;  // verified d_cu(Cu(phi), alpha)
  double delta = 0.0;
  std::vector<ComponentLift> components;
};

/// Finite-dimensional unital lift with d_cu(Cu(phi), alpha) < 6 delta.
LiftResult lift(const RankMeasure& alpha, double delta);

struct ExactLiftResult {
  NormalMatrix x;
  std::vector<double> deltas;
  std::vector<double> bounds;
  std::vector<double> step_distances;  // ||x~_{k+1} - x~_k||
  double final_distance = 0.0;         // d_cu(cu_of_normal(x), alpha)
  std::size_t covers = 0;              // certified covers built along the way

  /// Geometric mean of successive ratios d_k / d_{k+1}, i.e.
  /// (d_first / d_last)^(1 / (steps - 1)); +inf once the sequence reaches 0.
  double average_decay() const;
  /// The same rate over the steps before the sequence first becomes
  /// stationary (diagnostic only).
  double decay_before_stationary() const;
};

/// Runs lift at delta0 * 2^-k, k = 1, 2, ... until delta_k < h, aligning
/// each realisation to the previous one with the d_U witness unitary.
/// delta0 defaults to the region diameter.
ExactLiftResult exact_lift(const RankMeasure& alpha, std::optional<double> delta0 = std::nullopt);

}  // namespace culift

#endif  // CULIFT_LIFTING_HPP
