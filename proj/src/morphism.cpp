#include "culift/morphism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "culift/disjoint_sets.hpp"

namespace culift {

namespace {

bool lex_less(const Complex& a, const Complex& b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

std::vector<Atom> merge_coincident(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return lex_less(a.z, b.z); });
  std::vector<Atom> out;
  for (const auto& a : atoms) {
    if (!out.empty() && out.back().z == a.z)
      out.back().weight += a.weight;
    else
      out.push_back(a);
  }
  return out;
}

}  // namespace

RankMeasure::RankMeasure(RegionPtr region, std::uint64_t target_dim, std::vector<Atom> atoms)
    : region_(std::move(region)), n_(target_dim), atoms_(std::move(atoms)) {
  if (!region_) throw std::invalid_argument("rank measure: null region");
  for (const auto& a : atoms_) {
    if (a.weight == 0) throw std::invalid_argument("rank measure: atom weights must be positive");
    if (!region_->covers(a.z)) throw std::domain_error("rank measure: atom outside the region");
    mass_ += a.weight;
  }
  if (mass_ > n_) throw std::invalid_argument("rank measure: total mass exceeds the target dimension");
}

std::uint64_t RankMeasure::rank(const OpenSet& set) const {
  if (!same_region(region_, set.region())) throw std::invalid_argument("rank: region mismatch");
  std::uint64_t sum = 0;
  for (const auto& a : atoms_)
    if (set.contains(a.z)) sum += a.weight;
  return sum;
}

RankMeasure RankMeasure::canonical() const { return {region_, n_, merge_coincident(atoms_)}; }

RankMeasure operator+(const RankMeasure& a, const RankMeasure& b) {
  if (!same_region(a.region(), b.region())) throw std::invalid_argument("sum: region mismatch");
  std::vector<Atom> atoms(a.atoms().begin(), a.atoms().end());
  atoms.insert(atoms.end(), b.atoms().begin(), b.atoms().end());
  return {a.region(), a.target_dim() + b.target_dim(), std::move(atoms)};
}

bool same_multiset(const RankMeasure& a, const RankMeasure& b, double tol) {
  if (a.mass() != b.mass()) return false;
  // Expand to unit points and compare after a canonical sort; clusters closer
  // than tol are treated as equal locations.
  auto expand = [](const RankMeasure& m) {
    std::vector<Complex> pts;
    for (const auto& at : m.atoms())
      for (std::uint64_t k = 0; k < at.weight; ++k) pts.push_back(at.z);
    std::sort(pts.begin(), pts.end(), lex_less);
    return pts;
  };
  const auto pa = expand(a);
  auto pb = expand(b);
  std::vector<bool> used(pb.size(), false);
  for (const auto& p : pa) {
    bool found = false;
    for (std::size_t j = 0; j < pb.size(); ++j) {
      if (!used[j] && std::abs(p - pb[j]) <= tol) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

double NormalizedTrace::operator()(ExtNat m) const {
  if (n == 0) throw std::invalid_argument("trace: zero dimension");
  if (m.is_infinite()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(m.value()) / static_cast<double>(n);
}

std::uint64_t eval_indicator(const RankEvaluator& alpha, const OpenSet& set) { return alpha.rank(set); }

ExtNat eval_lsc(const RankMeasure& alpha, const LscFn& f) {
  if (!same_region(alpha.region(), f.region())) throw std::invalid_argument("eval_lsc: region mismatch");
  ExtNat sum;
  for (const auto& a : alpha.atoms()) {
    const ExtNat v = f[alpha.region()->nearest(a.z)];
    if (v.is_infinite()) return ExtNat::infinity();
    sum += ExtNat(v.value() * a.weight);
  }
  return sum;
}

ExtNat eval_lsc_by_levels(const RankEvaluator& alpha, const LscFn& f) {
  if (!same_region(alpha.region(), f.region())) throw std::invalid_argument("eval_lsc: region mismatch");
  const auto& region = alpha.region();
  std::uint64_t top = 0;
  std::vector<bool> infinite(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    infinite[i] = f[i].is_infinite();
    if (!infinite[i]) top = std::max(top, f[i].value());
  }
  if (std::find(infinite.begin(), infinite.end(), true) != infinite.end() &&
      alpha.rank(OpenSet::cells(region, infinite)) > 0)
    return ExtNat::infinity();
  ExtNat sum;
  for (std::uint64_t k = 1; k <= top; ++k) sum += alpha.rank(OpenSet::cells(region, f.level_set(k)));
  return sum;
}

double measure(const RankEvaluator& alpha, const OpenSet& set) {
  return NormalizedTrace{alpha.target_dim()}(alpha.rank(set));
}

double min_ball_mass(const RankEvaluator& alpha, std::span<const Complex> centers, double radius) {
  if (centers.empty()) throw std::invalid_argument("min_ball_mass: no centres");
  double sigma = std::numeric_limits<double>::infinity();
  for (const auto& c : centers) {
    const double m = measure(alpha, OpenSet::ball(alpha.region(), c, radius));
    if (m == 0.0) throw std::domain_error("min_ball_mass: a ball carries no mass");
    sigma = std::min(sigma, m);
  }
  return sigma;
}

void FinDimHom::validate() const {
  std::uint64_t sum = 0;
  for (const auto& p : pairs) {
    if (p.weight == 0) throw std::invalid_argument("homomorphism: ranks must be positive");
    sum += p.weight;
  }
  if (sum != n) throw std::invalid_argument("homomorphism: ranks must sum to n");
}

FinDimHom direct_sum(const FinDimHom& a, const FinDimHom& b) {
  FinDimHom out{a.pairs, a.n + b.n};
  out.pairs.insert(out.pairs.end(), b.pairs.begin(), b.pairs.end());
  return out;
}

NormalMatrix realize(const FinDimHom& phi) {
  phi.validate();
  std::vector<Complex> diag;
  diag.reserve(phi.n);
  for (const auto& p : phi.pairs)
    for (std::uint64_t k = 0; k < p.weight; ++k) diag.push_back(p.z);
  return NormalMatrix::diagonal(diag);
}

RankMeasure cu_of_hom(const FinDimHom& phi, const RegionPtr& region) {
  phi.validate();
  return {region, phi.n, merge_coincident(phi.pairs)};
}

RankMeasure cu_of_normal(const NormalMatrix& x, const RegionPtr& region) {
  const auto& eig = x.eigenvalues();
  const double tol = 1e-8 * x.norm();
  DisjointSets clusters(eig.size());
  for (std::size_t i = 0; i < eig.size(); ++i)
    for (std::size_t j = i + 1; j < eig.size(); ++j)
      if (std::abs(eig[i] - eig[j]) <= tol) clusters.unite(i, j);
  std::vector<Atom> atoms;
  for (const auto& group : clusters.groups()) {
    Complex mean = 0.0;
    for (auto i : group) mean += eig[i];
    mean /= static_cast<double>(group.size());
    if (!region->covers(mean)) throw std::domain_error("cu_of_normal: spectrum outside the region");
    atoms.push_back({mean, group.size()});
  }
  return {region, static_cast<std::uint64_t>(x.dim()), merge_coincident(std::move(atoms))};
}

}  // namespace culift
