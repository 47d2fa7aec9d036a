#include "culift/region.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <unordered_map>
#include <variant>

namespace culift {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool lex_less(const Complex& a, const Complex& b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

std::vector<Complex> lattice(Complex center, double reach, double spacing) {
  std::vector<Complex> pts;
  const auto steps = static_cast<long>(std::floor(reach / spacing));
  for (long i = -steps; i <= steps; ++i) {
    for (long j = -steps; j <= steps; ++j) {
      pts.emplace_back(center.real() + static_cast<double>(i) * spacing,
                       center.imag() + static_cast<double>(j) * spacing);
    }
  }
  return pts;
}

// Upper bound on the covering radius of a clipped square lattice over the
// annulus inner <= |z - center| <= outer. Cells farther than 2 spacing from
// both circles are complete (radius spacing / sqrt 2). Near the circles the
// distance to the points is sampled on a fine square grid and padded by the
// sampling grid's own covering radius, which is safe since the distance is
// 1-Lipschitz.
double clipped_covering_radius(std::span<const Complex> pts, Complex center, double inner, double outer,
                               double spacing) {
  const double tau = spacing / 16.0;
  const double pad = tau / std::sqrt(2.0);
  const double lo = std::max(inner, 0.0);
  auto index = [&](double v) { return static_cast<long>(std::floor(v / spacing)); };

  // bucket the points by lattice cell for local nearest queries
  std::unordered_map<long long, std::vector<Complex>> buckets;
  auto key = [](long i, long j) { return (static_cast<long long>(i) << 32) ^ static_cast<long long>(j & 0xffffffff); };
  for (const auto& p : pts) buckets[key(index(p.real() - center.real()), index(p.imag() - center.imag()))].push_back(p);

  auto nearest = [&](Complex z) {
    const long ci = index(z.real() - center.real()), cj = index(z.imag() - center.imag());
    double best = kInf;
    for (long i = ci - 3; i <= ci + 3; ++i)
      for (long j = cj - 3; j <= cj + 3; ++j)
        if (auto it = buckets.find(key(i, j)); it != buckets.end())
          for (const auto& p : it->second) best = std::min(best, std::abs(z - p));
    return best;
  };

  double worst = spacing / std::sqrt(2.0);
  const auto steps = static_cast<long>(std::ceil((outer + pad) / tau));
  for (long i = -steps; i <= steps; ++i) {
    for (long j = -steps; j <= steps; ++j) {
      const Complex z{center.real() + static_cast<double>(i) * tau, center.imag() + static_cast<double>(j) * tau};
      const double d = std::abs(z - center);
      if (d > outer + pad || d < lo - pad) continue;
      const bool near_outer = d >= outer - 2.0 * spacing;
      const bool near_inner = inner > 0.0 && d <= inner + 2.0 * spacing;
      if (!near_outer && !near_inner) continue;
      worst = std::max(worst, nearest(z) + pad);
    }
  }
  if (!std::isfinite(worst)) throw std::invalid_argument("region: lattice too coarse for the shape");
  return worst;
}

}  // namespace

Region::Region(std::vector<Complex> points, double resolution)
    : points_(std::move(points)), resolution_(resolution) {
  if (points_.empty()) throw std::invalid_argument("region: empty point set");
  if (!(resolution_ > 0.0) || !std::isfinite(resolution_))
    throw std::invalid_argument("region: resolution must be positive");
  std::vector<Complex> sorted = points_;
  std::sort(sorted.begin(), sorted.end(), lex_less);
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("region: duplicate grid points");
  for (const auto& p : points_) {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
      throw std::invalid_argument("region: non-finite grid point");
  }
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j)
      diameter_ = std::max(diameter_, std::abs(points_[i] - points_[j]));
}

RegionPtr Region::from_points(std::vector<Complex> points, double resolution) {
  return std::make_shared<const Region>(std::move(points), resolution);
}

RegionPtr Region::disk(Complex center, double radius, double spacing) {
  return annulus(center, -1.0, radius, spacing);
}

RegionPtr Region::annulus(Complex center, double inner, double outer, double spacing) {
  if (!(spacing > 0.0) || !(outer > 0.0) || inner >= outer)
    throw std::invalid_argument("region: bad lattice parameters");
  std::vector<Complex> pts;
  for (const auto& p : lattice(center, outer, spacing)) {
    const double d = std::abs(p - center);
    if (d <= outer + 1e-12 && d >= inner - 1e-12) pts.push_back(p);
  }
  // Points on the boundary circles, so clipping does not leave thin uncovered
  // slivers along the edge.
  const std::size_t lattice_count = pts.size();
  auto ring = [&](double rad) {
    const auto count = static_cast<std::size_t>(std::ceil(2.0 * std::numbers::pi * rad / spacing));
    for (std::size_t k = 0; k < count; ++k) {
      const Complex z = center + std::polar(rad, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count));
      bool clash = false;
      for (std::size_t i = 0; i < lattice_count && !clash; ++i) clash = std::abs(pts[i] - z) < 0.25 * spacing;
      if (!clash) pts.push_back(z);
    }
  };
  ring(outer);
  if (inner > 0.0) ring(inner);
  if (pts.empty()) throw std::invalid_argument("region: lattice misses the shape");
  const double h = clipped_covering_radius(pts, center, inner, outer, spacing);
  return from_points(std::move(pts), h);
}

RegionPtr Region::segment(Complex a, Complex b, std::size_t count) {
  if (count < 2) throw std::invalid_argument("region: segment needs at least two points");
  std::vector<Complex> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(count - 1);
    pts.push_back(a + t * (b - a));
  }
  const double spacing = std::abs(b - a) / static_cast<double>(count - 1);
  return from_points(std::move(pts), spacing / 2.0);
}

std::size_t Region::nearest(Complex z) const {
  std::size_t best = 0;
  double best_d = kInf;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const double d = std::norm(points_[i] - z);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

double Region::distance_to_grid(Complex z) const { return std::abs(points_[nearest(z)] - z); }

bool Region::covers(Complex z) const {
  return distance_to_grid(z) <= resolution_ * (1.0 + 1e-9);
}

bool Region::operator==(const Region& other) const {
  return resolution_ == other.resolution_ && points_ == other.points_;
}

bool same_region(const RegionPtr& a, const RegionPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

// ---------------------------------------------------------------------------
// OpenSet

namespace {

struct WholeShape {};
struct BallsShape {
  std::vector<Ball> balls;
};
struct RingsShape {
  std::vector<Ring> rings;
};
struct CellsShape {
  std::vector<bool> mask;
};
struct InterShape {
  std::shared_ptr<const OpenSet::Node> a, b;
};
struct UnionShape {
  std::shared_ptr<const OpenSet::Node> a, b;
};
struct MinusShape {
  std::shared_ptr<const OpenSet::Node> base;
  std::vector<Ring> closed;
};
struct ThickShape {
  std::shared_ptr<const OpenSet::Node> base;
  double radius;
  std::vector<Complex> anchors;  // grid points of base
};

}  // namespace

struct OpenSet::Node {
  std::variant<WholeShape, BallsShape, RingsShape, CellsShape, InterShape, UnionShape,
               MinusShape, ThickShape>
      shape;
};

namespace {

using NodePtr = std::shared_ptr<const OpenSet::Node>;

template <class S>
NodePtr make_node(S shape) {
  return std::make_shared<const OpenSet::Node>(OpenSet::Node{std::move(shape)});
}

bool in_open_ring(const Ring& r, Complex z) {
  const double d = std::abs(z - r.center);
  return r.inner < d && d < r.outer;
}

bool in_closed_ring(const Ring& r, Complex z) {
  const double d = std::abs(z - r.center);
  return r.inner <= d && d <= r.outer;
}

bool node_contains(const Region& region, const OpenSet::Node& node, Complex z) {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, WholeShape>) {
          return true;
        } else if constexpr (std::is_same_v<T, BallsShape>) {
          return std::any_of(s.balls.begin(), s.balls.end(),
                             [&](const Ball& b) { return std::abs(z - b.center) < b.radius; });
        } else if constexpr (std::is_same_v<T, RingsShape>) {
          return std::any_of(s.rings.begin(), s.rings.end(),
                             [&](const Ring& r) { return in_open_ring(r, z); });
        } else if constexpr (std::is_same_v<T, CellsShape>) {
          return s.mask[region.nearest(z)];
        } else if constexpr (std::is_same_v<T, InterShape>) {
          return node_contains(region, *s.a, z) && node_contains(region, *s.b, z);
        } else if constexpr (std::is_same_v<T, UnionShape>) {
          return node_contains(region, *s.a, z) || node_contains(region, *s.b, z);
        } else if constexpr (std::is_same_v<T, MinusShape>) {
          if (!node_contains(region, *s.base, z)) return false;
          return std::none_of(s.closed.begin(), s.closed.end(),
                              [&](const Ring& r) { return in_closed_ring(r, z); });
        } else {
          if (node_contains(region, *s.base, z)) return true;
          return std::any_of(s.anchors.begin(), s.anchors.end(),
                             [&](const Complex& a) { return std::abs(z - a) < s.radius; });
        }
      },
      node.shape);
}

const BallsShape* as_balls(const NodePtr& node) { return std::get_if<BallsShape>(&node->shape); }

bool node_is_empty_balls(const NodePtr& node) {
  const auto* b = as_balls(node);
  return b != nullptr && b->balls.empty();
}

}  // namespace

OpenSet::OpenSet(RegionPtr region, std::shared_ptr<const Node> node)
    : region_(std::move(region)), node_(std::move(node)) {
  if (!region_) throw std::invalid_argument("open set: null region");
}

OpenSet OpenSet::empty(RegionPtr region) { return {std::move(region), make_node(BallsShape{})}; }

OpenSet OpenSet::whole(RegionPtr region) { return {std::move(region), make_node(WholeShape{})}; }

OpenSet OpenSet::ball(RegionPtr region, Complex center, double radius) {
  return balls(std::move(region), {Ball{center, radius}});
}

OpenSet OpenSet::balls(RegionPtr region, std::vector<Ball> balls) {
  for (const auto& b : balls)
    if (!(b.radius > 0.0)) throw std::invalid_argument("open set: ball radius must be positive");
  return {std::move(region), make_node(BallsShape{std::move(balls)})};
}

OpenSet OpenSet::rings(RegionPtr region, std::vector<Ring> rings) {
  for (const auto& r : rings)
    if (!(r.outer > r.inner)) throw std::invalid_argument("open set: degenerate ring");
  return {std::move(region), make_node(RingsShape{std::move(rings)})};
}

OpenSet OpenSet::cells(RegionPtr region, std::vector<bool> mask) {
  if (mask.size() != region->size()) throw std::invalid_argument("open set: mask size mismatch");
  return {std::move(region), make_node(CellsShape{std::move(mask)})};
}

OpenSet OpenSet::thicken(double r) const {
  if (!(r >= 0.0)) throw std::invalid_argument("thicken: negative radius");
  if (r == 0.0) return *this;
  if (const auto* b = as_balls(node_)) {
    std::vector<Ball> grown = b->balls;
    for (auto& ball : grown) ball.radius += r;
    return {region_, make_node(BallsShape{std::move(grown)})};
  }
  if (std::holds_alternative<WholeShape>(node_->shape)) return *this;
  if (const auto* t = std::get_if<ThickShape>(&node_->shape)) {
    // (O_r)_s = O_{r+s} for distances measured in the plane.
    return {region_, make_node(ThickShape{t->base, t->radius + r, t->anchors})};
  }
  std::vector<Complex> anchors;
  for (std::size_t i : grid_members()) anchors.push_back(region_->point(i));
  return {region_, make_node(ThickShape{node_, r, std::move(anchors)})};
}

OpenSet OpenSet::intersect(const OpenSet& other) const {
  if (!same_region(region_, other.region_)) throw std::invalid_argument("intersect: region mismatch");
  if (is_whole()) return other;
  if (other.is_whole()) return *this;
  if (node_is_empty_balls(node_)) return *this;
  if (node_is_empty_balls(other.node_)) return other;
  return {region_, make_node(InterShape{node_, other.node_})};
}

OpenSet OpenSet::unite(const OpenSet& other) const {
  if (!same_region(region_, other.region_)) throw std::invalid_argument("unite: region mismatch");
  if (node_is_empty_balls(node_)) return other;
  if (node_is_empty_balls(other.node_)) return *this;
  const auto* a = as_balls(node_);
  const auto* b = as_balls(other.node_);
  if (a && b) {
    std::vector<Ball> all = a->balls;
    all.insert(all.end(), b->balls.begin(), b->balls.end());
    return {region_, make_node(BallsShape{std::move(all)})};
  }
  return {region_, make_node(UnionShape{node_, other.node_})};
}

OpenSet OpenSet::minus_closed(std::vector<Ring> closed) const {
  if (closed.empty()) return *this;
  return {region_, make_node(MinusShape{node_, std::move(closed)})};
}

bool OpenSet::contains(Complex z) const { return node_contains(*region_, *node_, z); }

double OpenSet::distance(Complex z) const {
  if (const auto* b = as_balls(node_)) {
    double best = kInf;
    for (const auto& ball : b->balls)
      best = std::min(best, std::max(0.0, std::abs(z - ball.center) - ball.radius));
    return best;
  }
  if (contains(z)) return 0.0;
  double best = kInf;
  for (std::size_t i : grid_members()) best = std::min(best, std::abs(z - region_->point(i)));
  if (const auto* t = std::get_if<ThickShape>(&node_->shape)) {
    for (const auto& a : t->anchors) best = std::min(best, std::max(0.0, std::abs(z - a) - t->radius));
  }
  return best;
}

std::vector<std::size_t> OpenSet::grid_members() const {
  std::vector<std::size_t> out;
  const auto pts = region_->points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (contains(pts[i])) out.push_back(i);
  return out;
}

std::vector<bool> OpenSet::grid_mask() const {
  const auto pts = region_->points();
  std::vector<bool> mask(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) mask[i] = contains(pts[i]);
  return mask;
}

bool OpenSet::is_ball_union() const { return as_balls(node_) != nullptr; }

std::span<const Ball> OpenSet::ball_list() const {
  if (const auto* b = as_balls(node_)) return b->balls;
  return {};
}

bool OpenSet::is_whole() const { return std::holds_alternative<WholeShape>(node_->shape); }

OpenSet annulus(const RegionPtr& region, Complex x, double s, double eps) {
  if (!(eps > 0.0) || !(s > 0.0) || eps >= s)
    throw std::invalid_argument("annulus: need 0 < eps < s");
  return OpenSet::rings(region, {Ring{x, s - eps, s + eps}});
}

double peak_function(const OpenSet& set, Complex x) {
  if (!set.contains(x)) return 0.0;
  const auto& region = *set.region();
  double d = kInf;
  for (const auto& p : region.points())
    if (!set.contains(p)) d = std::min(d, std::abs(x - p));
  return std::min(1.0, d);
}

}  // namespace culift
