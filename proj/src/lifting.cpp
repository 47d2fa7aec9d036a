#include "culift/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "culift/disjoint_sets.hpp"
#include "culift/metrics.hpp"

namespace culift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(const Complex& a, const Complex& b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

// Radii in [a, b] where the radial mass profile around x jumps, to within tol.
void find_jumps(const RankEvaluator& alpha, Complex x, double a, double b, double tol, std::vector<double>& out) {
  const double pad = tol / 4.0;
  const auto ring = OpenSet::rings(alpha.region(), {Ring{x, a - pad, b + pad}});
  if (alpha.rank(ring) == 0) return;
  if (b - a <= tol) {
    out.push_back(0.5 * (a + b));
    return;
  }
  const double mid = 0.5 * (a + b);
  find_jumps(alpha, x, a, mid, tol, out);
  find_jumps(alpha, x, mid, b, tol, out);
}

// Shrinks a ball around some mass point of `set` until its radius is below
// `tiny`; four balls of 3/4 the radius cover the parent.
std::optional<Complex> localize(const RankEvaluator& alpha, const OpenSet& set) {
  if (alpha.rank(set) == 0) return std::nullopt;
  const auto& region = *alpha.region();
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& p : region.points()) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  Complex c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
  double radius = 0.5 * std::hypot(x1 - x0, y1 - y0) + 2.0 * region.resolution();
  const double tiny = 1e-10 * std::max(1.0, region.diameter());
  while (radius > tiny) {
    const double step = radius / 2.0;
    bool moved = false;
    for (const Complex offset : {Complex{-step, -step}, Complex{step, -step}, Complex{-step, step}, Complex{step, step}}) {
      const auto child = OpenSet::ball(alpha.region(), c + offset, 0.75 * radius);
      if (alpha.rank(child.intersect(set)) > 0) {
        c += offset;
        radius *= 0.75;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return c;
}

double min_gap(const Region& region, std::span<const std::size_t> a, std::span<const std::size_t> b) {
  double gap = kInf;
  for (auto i : a)
    for (auto j : b) gap = std::min(gap, std::abs(region.point(i) - region.point(j)));
  return gap;
}

}  // namespace

AnnulusChoice choose_annulus(const RankEvaluator& alpha, Complex x, double r, double sigma,
                             std::span<const double> avoid) {
  if (!(r > 0.0)) throw std::invalid_argument("choose_annulus: radius must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("choose_annulus: sigma must be positive");
  const double lo = r / 2.0, hi = r;
  const double tol = 1e-7 * r;
  std::vector<double> marks{lo};
  find_jumps(alpha, x, lo, hi, tol, marks);
  for (double a : avoid)
    if (a > lo && a < hi) marks.push_back(a);
  marks.push_back(hi);
  std::sort(marks.begin(), marks.end());

  double best_len = -1.0, best_start = lo;
  for (std::size_t i = 0; i + 1 < marks.size(); ++i) {
    const double len = marks[i + 1] - marks[i];
    if (len > best_len + 1e-6 * r) {
      best_len = len;
      best_start = marks[i];
    }
  }
  const AnnulusChoice choice{best_start + best_len / 2.0, best_len / 4.0};
  if (!(choice.eps > 0.0)) throw std::runtime_error("choose_annulus: mass profile too dense to separate");
  if (measure(alpha, annulus(alpha.region(), x, choice.s, choice.eps)) > sigma)
    throw std::runtime_error("choose_annulus: no annulus within the mass budget");
  return choice;
}

std::vector<std::size_t> greedy_net(const Region& region, std::span<const std::size_t> candidates, double radius) {
  if (candidates.empty()) return {};
  if (!(radius > 0.0)) throw std::invalid_argument("greedy_net: radius must be positive");
  std::size_t start = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k)
    if (lex_less(region.point(candidates[k]), region.point(candidates[start]))) start = k;

  std::vector<double> dist(candidates.size(), kInf);
  std::vector<std::size_t> net;
  std::size_t next = start;
  for (;;) {
    net.push_back(candidates[next]);
    const auto c = region.point(candidates[next]);
    double far = -1.0;
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      dist[k] = std::min(dist[k], std::abs(region.point(candidates[k]) - c));
      if (dist[k] > far) {
        far = dist[k];
        next = k;
      }
    }
    if (far < radius) return net;
  }
}

std::vector<std::size_t> greedy_net(const Region& region, double radius) {
  std::vector<std::size_t> all(region.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return greedy_net(region, all, radius);
}

CoverCertificates verify_cover(const RankEvaluator& alpha, const DeltaCover& cover) {
  const auto& region = *alpha.region();
  const double delta = cover.delta;
  CoverCertificates cert;

  const auto domain_pts = cover.domain.grid_members();
  const auto in_u = cover.united.grid_mask();
  std::vector<std::size_t> u_pts;
  for (auto i : domain_pts)
    if (in_u[i]) u_pts.push_back(i);
  cert.dense = std::all_of(domain_pts.begin(), domain_pts.end(), [&](std::size_t p) {
    if (in_u[p]) return true;
    for (auto q : u_pts)
      if (std::abs(region.point(p) - region.point(q)) < delta) return true;
    return false;
  });

  cert.small = true;
  for (const auto& m : cover.members)
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b)
        if (std::abs(region.point(m[a]) - region.point(m[b])) > delta) cert.small = false;

  cert.separated = true;
  for (std::size_t i = 0; i < cover.members.size(); ++i)
    for (std::size_t j = i + 1; j < cover.members.size(); ++j)
      if (!(min_gap(region, cover.members[i], cover.members[j]) > 0.0)) cert.separated = false;

  const auto leftover = alpha.rank(cover.residual);
  cert.dominated = std::all_of(cover.sets.begin(), cover.sets.end(), [&](const OpenSet& o) {
    return leftover <= alpha.rank(o.thicken(delta).intersect(cover.united));
  });
  return cert;
}

DeltaCover build_cover(const RankEvaluator& alpha, double delta, std::span<const Complex> centers,
                       const OpenSet& domain) {
  if (!(delta > 0.0)) throw std::invalid_argument("build_cover: delta must be positive");
  if (centers.empty()) throw std::invalid_argument("build_cover: no centres");
  const auto& region = alpha.region();
  const auto m = centers.size();

  const double sigma = min_ball_mass(alpha, centers, delta / 2.0);
  const double budget = sigma / static_cast<double>(2 * m + 1);
  std::vector<AnnulusChoice> annuli;
  double min_eps = kInf;
  for (const auto& c : centers) {
    // keep grid points off the removed rings, or a cluster of them can drop out of U entirely
    std::vector<double> grid_radii;
    for (const auto& p : region->points())
      if (const double d = std::abs(p - c); d > delta / 4.0 && d < delta / 2.0) grid_radii.push_back(d);
    annuli.push_back(choose_annulus(alpha, c, delta / 2.0, budget, grid_radii));
    min_eps = std::min(min_eps, annuli.back().eps);
  }
  const double eta = min_eps / 2.0;

  std::vector<Ring> bands;
  for (std::size_t j = 0; j < m; ++j) bands.push_back({centers[j], annuli[j].s - eta, annuli[j].s + eta});
  const auto united = domain.minus_closed(bands);
  const auto residual = domain.intersect(OpenSet::rings(region, bands));

  std::vector<OpenSet> sets;
  std::vector<std::vector<std::size_t>> members;
  std::vector<std::size_t> origin;
  std::vector<Ring> removed = bands;
  for (std::size_t j = 0; j < m; ++j) {
    auto o = OpenSet::ball(region, centers[j], annuli[j].s).intersect(domain).minus_closed(removed);
    removed.push_back({centers[j], 0.0, annuli[j].s});
    auto mem = o.grid_members();
    if (mem.empty() && alpha.rank(o) == 0) continue;
    sets.push_back(std::move(o));
    members.push_back(std::move(mem));
    origin.push_back(j);
  }

  DeltaCover cover{
      .delta = delta,
      .domain = domain,
      .centers = {centers.begin(), centers.end()},
      .annuli = std::move(annuli),
      .sigma = sigma,
      .eta = eta,
      .sets = std::move(sets),
      .members = std::move(members),
      .origin = std::move(origin),
      .united = united,
      .residual = residual,
      // Later sets avoid the closed eta-band around every earlier ball, so
      // distinct sets are at least 2 eta apart.
      .separation = 2.0 * eta,
      .certificates = {},
  };
  if (cover.sets.size() < 2) cover.separation = kInf;
  cover.certificates = verify_cover(alpha, cover);
  if (!cover.certificates.dominated)
    throw LiftError(LiftError::Kind::kCertificate, "build_cover: residual mass exceeds a thickened set");
  return cover;
}

DeltaCover build_cover(const RankEvaluator& alpha, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("build_cover: delta must be positive");
  const auto& region = alpha.region();
  std::vector<Complex> centers;
  std::vector<Ball> balls;
  for (auto i : greedy_net(*region, delta / 4.0)) {
    const auto c = region->point(i);
    if (alpha.rank(OpenSet::ball(region, c, delta / 2.0)) == 0) continue;
    centers.push_back(c);
    balls.push_back({c, delta / 4.0});
  }
  if (centers.empty()) throw std::invalid_argument("build_cover: alpha carries no mass");
  return build_cover(alpha, delta, centers, OpenSet::balls(region, std::move(balls)));
}

Partition components(const RankEvaluator& alpha, std::span<const OpenSet> sets) {
  Partition out;
  const auto& region = *alpha.region();
  std::vector<std::size_t> massive;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (alpha.rank(sets[i]) > 0)
      massive.push_back(i);
    else
      out.leftover.push_back(i);
  }
  std::vector<std::vector<std::size_t>> members;
  for (auto i : massive) members.push_back(sets[i].grid_members());

  auto disjoint_balls = [&](const OpenSet& a, const OpenSet& b) {
    if (!a.is_ball_union() || !b.is_ball_union()) return false;
    for (const auto& p : a.ball_list())
      for (const auto& q : b.ball_list())
        if (std::abs(p.center - q.center) < p.radius + q.radius) return false;
    return true;
  };

  DisjointSets ds(massive.size());
  for (std::size_t a = 0; a < massive.size(); ++a) {
    for (std::size_t b = a + 1; b < massive.size(); ++b) {
      const auto& sa = sets[massive[a]];
      const auto& sb = sets[massive[b]];
      if (disjoint_balls(sa, sb)) continue;
      std::vector<std::size_t> shared;
      std::set_intersection(members[a].begin(), members[a].end(), members[b].begin(), members[b].end(),
                            std::back_inserter(shared));
      if (!shared.empty() || alpha.rank(sa.intersect(sb)) > 0) ds.unite(a, b);
    }
  }

  struct Keyed {
    std::optional<Complex> leftmost;
    std::vector<std::size_t> group;
  };
  std::vector<Keyed> keyed;
  for (const auto& g : ds.groups()) {
    Keyed k;
    for (auto local : g) {
      k.group.push_back(massive[local]);
      for (auto p : members[local])
        if (!k.leftmost || lex_less(region.point(p), *k.leftmost)) k.leftmost = region.point(p);
    }
    keyed.push_back(std::move(k));
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.leftmost && b.leftmost) return lex_less(*a.leftmost, *b.leftmost);
    return a.leftmost.has_value() && !b.leftmost.has_value();
  });
  for (auto& k : keyed) out.groups.push_back(std::move(k.group));
  return out;
}

namespace {

// A point of O_i: the grid member whose small neighbourhood inside O_i
// carries the most mass (ties: nearest the centre O_i was carved from), or a
// localised mass point when no member sees any mass.
Complex pick_point(const RankEvaluator& alpha, const DeltaCover& cover, std::size_t i) {
  const auto& region = alpha.region();
  const auto& set = cover.sets[i];
  const auto c = cover.centers[cover.origin[i]];
  const double tiny = 1e-9 * std::max(1.0, region->diameter());
  const double h = region->resolution();

  std::optional<std::size_t> best;
  std::uint64_t best_near = 0, best_local = 0;
  for (auto p : cover.members[i]) {
    const auto z = region->point(p);
    const auto local = alpha.rank(OpenSet::ball(region, z, h).intersect(set));
    const auto near = local > 0 ? alpha.rank(OpenSet::ball(region, z, tiny).intersect(set)) : 0;
    const bool better = !best || near > best_near || (near == best_near && local > best_local) ||
                        (near == best_near && local == best_local &&
                         std::abs(z - c) < std::abs(region->point(*best) - c));
    if (better) {
      best = p;
      best_near = near;
      best_local = local;
    }
  }
  if (best && best_local > 0) return region->point(*best);
  if (auto z = localize(alpha, set)) return *z;
  if (best) return region->point(*best);
  throw std::logic_error("lift: cover set is empty");
}

// z_0: a point of Omega \ cl U, or the domain grid point farthest from U.
Complex pick_residual_point(const RankEvaluator& alpha, const DeltaCover& cover) {
  const auto& region = *alpha.region();
  const auto mem = cover.residual.grid_members();
  if (!mem.empty()) return region.point(mem.front());
  if (auto z = localize(alpha, cover.residual)) return *z;
  const auto domain = cover.domain.grid_members();
  const auto in_u = cover.united.grid_mask();
  std::optional<std::size_t> far;
  double far_d = -1.0;
  for (auto p : domain) {
    double d = in_u[p] ? 0.0 : kInf;
    if (!in_u[p])
      for (auto q : domain)
        if (in_u[q]) d = std::min(d, std::abs(region.point(p) - region.point(q)));
    if (d > far_d) {
      far_d = d;
      far = p;
    }
  }
  if (!far) throw std::logic_error("lift: empty component domain");
  return region.point(*far);
}

}  // namespace

LiftResult lift(const RankMeasure& alpha, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("lift: delta must be positive");
  const auto n = alpha.target_dim();
  if (n == 0) throw std::invalid_argument("lift: zero target dimension");
  if (alpha.mass() != n) throw std::invalid_argument("lift: alpha must be unital (mass == n)");
  const auto& region = alpha.region();
  const double quarter = delta / 4.0;

  // Shrink the net until its quarter-delta balls capture all of the mass.
  std::vector<std::size_t> net;
  for (double r = quarter;; r /= 2.0) {
    net = greedy_net(*region, r);
    std::vector<Ball> balls;
    for (auto i : net) balls.push_back({region->point(i), quarter});
    if (alpha.rank(OpenSet::balls(region, std::move(balls))) == n) break;
    if (net.size() == region->size())
      throw LiftError(LiftError::Kind::kUnresolvable, "lift: grid-centred balls miss part of the mass");
  }

  std::vector<OpenSet> balls;
  std::vector<Complex> ball_centers;
  for (auto i : net) {
    auto b = OpenSet::ball(region, region->point(i), quarter);
    if (alpha.rank(b) == 0) continue;
    balls.push_back(std::move(b));
    ball_centers.push_back(region->point(i));
  }
  const auto partition = components(alpha, balls);

  LiftResult result;
  result.delta = delta;
  result.phi.n = n;
  std::uint64_t accounted = 0;
  for (const auto& group : partition.groups) {
    std::vector<Complex> centers;
    std::vector<Ball> domain_balls;
    for (auto b : group) {
      centers.push_back(ball_centers[b]);
      domain_balls.push_back({ball_centers[b], quarter});
    }
    const auto domain = OpenSet::balls(region, std::move(domain_balls));
    const RestrictedRank alpha_i(alpha, domain);

    ComponentLift comp{.cover = build_cover(alpha_i, delta, centers, domain),
                       .rho = 0.0,
                       .mass = 0,
                       .ranks = {},
                       .residual_rank = 0,
                       .points = {},
                       .residual_point = std::nullopt};
    const auto& cover = comp.cover;
    if (!cover.certificates.all())
      throw LiftError(LiftError::Kind::kCertificate, "lift: cover failed a certificate");
    comp.rho = 0.25 * std::min(delta, cover.separation);
    comp.mass = alpha_i.total();

    std::uint64_t used = 0;
    for (std::size_t i = 0; i < cover.sets.size(); ++i) {
      const auto x = alpha_i.rank(cover.sets[i].thicken(comp.rho));
      comp.ranks.push_back(x);
      comp.points.push_back(x > 0 ? pick_point(alpha_i, cover, i) : Complex{});
      used += x;
      if (x > 0) result.phi.pairs.push_back({comp.points.back(), x});
    }
    if (used > comp.mass) throw std::logic_error("lift: thickened sets overlap");
    comp.residual_rank = comp.mass - used;
    if (comp.residual_rank > 0) {
      comp.residual_point = pick_residual_point(alpha_i, cover);
      result.phi.pairs.push_back({*comp.residual_point, comp.residual_rank});
    }
    accounted += comp.mass;
    result.components.push_back(std::move(comp));
  }
  if (accounted != n) throw std::logic_error("lift: components do not partition the mass");

  result.bound = d_cu(cu_of_hom(result.phi, region), alpha).value;
  if (!(result.bound < 6.0 * delta))
    throw LiftError(LiftError::Kind::kBoundViolated, "lift: d_cu(Cu(phi), alpha) >= 6 delta");
  return result;
}

double ExactLiftResult::average_decay() const {
  const auto& d = step_distances;
  if (d.size() < 2) return kInf;
  if (d.back() == 0.0) return kInf;
  if (d.front() == 0.0) return 0.0;
  return std::pow(d.front() / d.back(), 1.0 / static_cast<double>(d.size() - 1));
}

double ExactLiftResult::decay_before_stationary() const {
  const auto& d = step_distances;
  auto last = d.size();
  while (last > 0 && d[last - 1] == 0.0) --last;
  if (last < 2) return kInf;
  if (d.front() == 0.0) return 0.0;
  return std::pow(d.front() / d[last - 1], 1.0 / static_cast<double>(last - 1));
}

ExactLiftResult exact_lift(const RankMeasure& alpha, std::optional<double> delta0) {
  const auto& region = alpha.region();
  const double h = region->resolution();
  const double d0 = delta0.value_or(region->diameter() > 0.0 ? region->diameter() : h);
  if (!(d0 > 0.0)) throw std::invalid_argument("exact_lift: delta0 must be positive");

  std::optional<NormalMatrix> current;
  std::vector<double> deltas, bounds, steps;
  std::size_t covers = 0;
  for (int k = 1; k <= 64; ++k) {
    const double dk = d0 * std::ldexp(1.0, -k);
    std::optional<LiftResult> lifted;
    try {
      lifted = lift(alpha, dk);
    } catch (const LiftError& e) {
      if (e.kind() == LiftError::Kind::kUnresolvable && current) break;
      throw;
    }
    covers += lifted->components.size();
    auto diag = realize(lifted->phi);
    if (!current) {
      current = std::move(diag);
    } else {
      const auto witness = d_u_bracket(diag, *current).witness;
      auto next = conjugate(diag, witness);
      const double step = operator_norm(next.entries() - current->entries());
      const double limit = 9.0 * deltas.back() + 1e-9 * std::max(1.0, next.norm());
      if (step > limit)
        throw LiftError(LiftError::Kind::kNonConvergence, "exact_lift: aligned step exceeds 9 delta_k");
      steps.push_back(step);
      current = std::move(next);
    }
    deltas.push_back(dk);
    bounds.push_back(lifted->bound);
    if (dk < h) break;
  }

  ExactLiftResult out{
      .x = *current,
      .deltas = std::move(deltas),
      .bounds = std::move(bounds),
      .step_distances = std::move(steps),
      .final_distance = 0.0,
      .covers = covers,
  };
  out.final_distance = d_cu(cu_of_normal(out.x, region), alpha).value;
  return out;
}

}  // namespace culift
