#include "culift/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace culift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max() / 4;

// Residual network for source -> left atoms -> right atoms -> sink.
class TransportNetwork {
 public:
  TransportNetwork(std::span<const Atom> a, std::span<const Atom> b, double threshold)
      : left_(a.size()), right_(b.size()), graph_(a.size() + b.size() + 2) {
    for (std::size_t i = 0; i < left_; ++i) add_edge(source(), i, a[i].weight);
    for (std::size_t j = 0; j < right_; ++j) add_edge(left_ + j, sink(), b[j].weight);
    for (std::size_t i = 0; i < left_; ++i)
      for (std::size_t j = 0; j < right_; ++j)
        if (std::abs(a[i].z - b[j].z) <= threshold) add_edge(i, left_ + j, kUnbounded);
  }

  std::uint64_t max_flow() {
    std::uint64_t total = 0;
    std::vector<std::size_t> via(graph_.size());
    for (;;) {
      std::fill(via.begin(), via.end(), kNone);
      std::queue<std::size_t> queue;
      queue.push(source());
      via[source()] = kSourceMark;
      while (!queue.empty() && via[sink()] == kNone) {
        const auto u = queue.front();
        queue.pop();
        for (auto e : graph_[u]) {
          const auto& edge = edges_[e];
          if (edge.cap > 0 && via[edge.to] == kNone) {
            via[edge.to] = e;
            queue.push(edge.to);
          }
        }
      }
      if (via[sink()] == kNone) return total;
      std::uint64_t push = kUnbounded;
      for (auto v = sink(); v != source(); v = edges_[via[v] ^ 1].to) push = std::min(push, edges_[via[v]].cap);
      for (auto v = sink(); v != source(); v = edges_[via[v] ^ 1].to) {
        edges_[via[v]].cap -= push;
        edges_[via[v] ^ 1].cap += push;
      }
      total += push;
    }
  }

  std::vector<MatchedPair> plan() const {
    std::vector<MatchedPair> out;
    for (std::size_t i = 0; i < left_; ++i) {
      for (auto e : graph_[i]) {
        const auto& edge = edges_[e];
        if (edge.to >= left_ && edge.to < left_ + right_ && (e % 2 == 0)) {
          const auto sent = edges_[e ^ 1].cap;
          if (sent > 0) out.push_back({i, edge.to - left_, sent});
        }
      }
    }
    return out;
  }

 private:
  struct Edge {
    std::size_t to;
    std::uint64_t cap;
  };
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  static constexpr std::size_t kSourceMark = kNone - 1;

  std::size_t source() const { return left_ + right_; }
  std::size_t sink() const { return left_ + right_ + 1; }

  void add_edge(std::size_t from, std::size_t to, std::uint64_t cap) {
    graph_[from].push_back(edges_.size());
    edges_.push_back({to, cap});
    graph_[to].push_back(edges_.size());
    edges_.push_back({from, 0});
  }

  std::size_t left_, right_;
  std::vector<std::vector<std::size_t>> graph_;
  std::vector<Edge> edges_;
};

std::uint64_t total_mass(std::span<const Atom> atoms) {
  return std::accumulate(atoms.begin(), atoms.end(), std::uint64_t{0},
                         [](std::uint64_t s, const Atom& a) { return s + a.weight; });
}

void require_compatible(const RankMeasure& a, const RankMeasure& b) {
  if (!same_region(a.region(), b.region())) throw std::invalid_argument("d_cu: region mismatch");
}

std::vector<double> candidate_radii(std::span<const Atom> a, std::span<const Atom> b) {
  std::vector<double> radii{0.0};
  for (const auto& p : a)
    for (const auto& q : b) radii.push_back(std::abs(p.z - q.z));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

}  // namespace

bool MatchingResult::finite() const { return std::isfinite(value); }

MatchingResult bottleneck_matching(std::span<const Atom> a, std::span<const Atom> b) {
  MatchingResult result;
  const auto mass = total_mass(a);
  if (mass != total_mass(b)) {
    result.value = kInf;
    return result;
  }
  if (mass == 0) return result;

  std::vector<double> radii;
  for (const auto& p : a)
    for (const auto& q : b) radii.push_back(std::abs(p.z - q.z));
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  // The largest pairwise distance is always feasible.
  std::size_t lo = 0, hi = radii.size() - 1;
  while (lo < hi) {
    const auto mid = lo + (hi - lo) / 2;
    result.thresholds.push_back(radii[mid]);
    TransportNetwork net(a, b, radii[mid]);
    if (net.max_flow() == mass)
      hi = mid;
    else
      lo = mid + 1;
  }
  TransportNetwork net(a, b, radii[lo]);
  net.max_flow();
  result.value = radii[lo];
  result.pairing = net.plan();
  return result;
}

MatchingResult d_cu(const RankMeasure& alpha, const RankMeasure& beta) {
  require_compatible(alpha, beta);
  // Morphisms into different matrix algebras are infinitely far apart.
  if (alpha.target_dim() != beta.target_dim()) return MatchingResult{kInf, {}, {}};
  return bottleneck_matching(alpha.atoms(), beta.atoms());
}

double d_cu_bruteforce(const RankMeasure& alpha, const RankMeasure& beta, std::span<const OpenSet> family) {
  require_compatible(alpha, beta);
  if (alpha.target_dim() != beta.target_dim()) return kInf;
  const auto radii = candidate_radii(alpha.atoms(), beta.atoms());
  std::vector<std::uint64_t> ra, rb;
  for (const auto& o : family) {
    ra.push_back(alpha.rank(o));
    rb.push_back(beta.rank(o));
  }
  // The condition uses strict thickenings, so the infimum over r is not
  // attained; a candidate r qualifies when the condition holds just above it.
  const double slack = 1e-9 * std::max(1.0, alpha.region()->diameter());
  auto dominated = [&](double r) {
    for (std::size_t k = 0; k < family.size(); ++k) {
      const auto thick = family[k].thicken(r + slack);
      if (ra[k] > beta.rank(thick) || rb[k] > alpha.rank(thick)) return false;
    }
    return true;
  };
  // Thickening is monotone in r, so the predicate is monotone.
  const auto it = std::partition_point(radii.begin(), radii.end(), [&](double r) { return !dominated(r); });
  return it == radii.end() ? kInf : *it;
}

std::vector<OpenSet> oracle_family(const RankMeasure& alpha, const RankMeasure& beta, double eps) {
  require_compatible(alpha, beta);
  const auto& region = alpha.region();
  std::vector<OpenSet> family{OpenSet::whole(region)};
  for (const auto* m : {&alpha, &beta}) {
    std::vector<Complex> support;
    const auto merged = m->canonical();
    for (const auto& a : merged.atoms()) support.push_back(a.z);
    if (support.size() > 16) throw std::invalid_argument("oracle_family: support too large to enumerate");
    const std::size_t subsets = std::size_t{1} << support.size();
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      std::vector<Ball> balls;
      for (std::size_t i = 0; i < support.size(); ++i)
        if (mask & (std::size_t{1} << i)) balls.push_back({support[i], eps});
      family.push_back(OpenSet::balls(region, std::move(balls)));
    }
  }
  for (double r : candidate_radii(alpha.atoms(), beta.atoms())) {
    if (r <= 0.0) continue;
    for (const auto& p : region->points()) family.push_back(OpenSet::ball(region, p, r));
  }
  return family;
}

double d_w(const NormalMatrix& x, const NormalMatrix& y, const RegionPtr& region) {
  if (x.dim() != y.dim()) throw std::invalid_argument("d_w: dimension mismatch");
  return d_cu(cu_of_normal(x, region), cu_of_normal(y, region)).value;
}

DuBracket d_u_bracket(const NormalMatrix& x, const NormalMatrix& y) {
  if (x.dim() != y.dim()) throw std::invalid_argument("d_u_bracket: dimension mismatch");
  const auto n = static_cast<std::size_t>(x.dim());
  std::vector<Atom> ex, ey;
  for (const auto& l : x.eigenvalues()) ex.push_back({l, 1});
  for (const auto& l : y.eigenvalues()) ey.push_back({l, 1});
  const auto matching = bottleneck_matching(ex, ey);

  // P(sigma(i), i) = 1 moves x's i-th eigenvalue onto y's sigma(i)-th slot.
  CMatrix perm = CMatrix::Zero(x.dim(), x.dim());
  for (const auto& p : matching.pairing)
    perm(static_cast<Eigen::Index>(p.beta_index), static_cast<Eigen::Index>(p.alpha_index)) = 1.0;
  if (matching.pairing.size() != n) throw std::logic_error("d_u_bracket: matching is not a permutation");

  DuBracket out;
  out.upper = matching.value;
  out.lower = hausdorff_distance(x.eigenvalues(), y.eigenvalues());
  out.witness = y.eigenbasis() * perm * x.eigenbasis().adjoint();
  out.residual = operator_norm(out.witness * x.entries() * out.witness.adjoint() - y.entries());
  if (out.residual > out.upper + 1e-9 * std::max(1.0, x.norm() + y.norm()))
    throw std::runtime_error("d_u_bracket: witness does not realise the matching bound");
  return out;
}

bool MarriageCheck::holds() const { return lhs <= rhs + 1e-9; }

MarriageCheck marriage_check(std::span<const RankMeasure> alphas, std::span<const RankMeasure> betas) {
  if (alphas.size() != betas.size()) throw std::invalid_argument("marriage_check: length mismatch");
  if (alphas.empty()) throw std::invalid_argument("marriage_check: empty lists");
  if (alphas.size() > 8) throw std::invalid_argument("marriage_check: at most 8 terms");
  const auto k = alphas.size();

  RankMeasure sum_a = alphas[0], sum_b = betas[0];
  for (std::size_t i = 1; i < k; ++i) {
    sum_a = sum_a + alphas[i];
    sum_b = sum_b + betas[i];
  }
  MarriageCheck out;
  out.lhs = d_cu(sum_a, sum_b).value;

  // Morphisms into different matrix algebras are never within finite distance.
  std::vector<std::vector<double>> cost(k, std::vector<double>(k, kInf));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (alphas[i].target_dim() == betas[j].target_dim()) cost[i][j] = d_cu(alphas[i], betas[j]).value;
  std::vector<std::size_t> sigma(k);
  std::iota(sigma.begin(), sigma.end(), std::size_t{0});
  out.rhs = kInf;
  do {
    double worst = 0.0;
    for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, cost[i][sigma[i]]);
    out.rhs = std::min(out.rhs, worst);
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return out;
}

}  // namespace culift
