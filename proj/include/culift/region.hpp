#ifndef CULIFT_REGION_HPP
#define CULIFT_REGION_HPP

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace culift {

using Complex = std::complex<double>;

class Region;
using RegionPtr = std::shared_ptr<const Region>;

/**
 * A compact subset of the plane, modelled by a finite sample grid.
 *
 * Every point of the intended compact set lies within `resolution()` of some
 * grid point. Set masses, covers and brute-force oracles are all evaluated on
 * the grid, so callers should budget an O(h) discretisation error.
 */
class Region {
 public:
  Region(std::vector<Complex> points, double resolution);

  /// Square lattice of the given spacing clipped to a closed disk.
  static RegionPtr disk(Complex center, double radius, double spacing);
  /// Square lattice clipped to the closed annulus inner <= |z - center| <= outer.
  static RegionPtr annulus(Complex center, double inner, double outer, double spacing);
  /// `count` equally spaced points on the segment [a, b], endpoints included.
  static RegionPtr segment(Complex a, Complex b, std::size_t count);
  static RegionPtr from_points(std::vector<Complex> points, double resolution);

  std::span<const Complex> points() const { return points_; }
  const Complex& point(std::size_t i) const { return points_[i]; }
  std::size_t size() const { return points_.size(); }
  double resolution() const { return resolution_; }
  double diameter() const { return diameter_; }

  /// Radius of the one-step grid neighbourhood used by the way-below proxy.
  double neighbour_radius() const { return 2.0 * resolution_; }

  std::size_t nearest(Complex z) const;
  double distance_to_grid(Complex z) const;
  /// True when z lies within the covering radius of the grid.
  bool covers(Complex z) const;

  bool operator==(const Region& other) const;

 private:
  std::vector<Complex> points_;
  double resolution_;
  double diameter_ = 0.0;
};

/// Identity fast path, then value comparison.
bool same_region(const RegionPtr& a, const RegionPtr& b);

struct Ball {
  Complex center;
  double radius;
};

/// {z : inner < |z - center| < outer} when open; with <= when closed.
/// A closed ring with inner == 0 is a closed disk.
struct Ring {
  Complex center;
  double inner;
  double outer;
};

/**
 * An open subset of a Region.
 *
 * Ball unions are the primary shape and carry exact geometry: their distance
 * function and thickenings are computed from centres and radii. Composite
 * shapes (rings, intersections, differences with closed rings, Voronoi cell
 * unions) answer membership exactly and fall back to the grid for distances,
 * with error at most the grid resolution. Values are immutable and cheap to
 * copy.
 */
class OpenSet {
 public:
  static OpenSet empty(RegionPtr region);
  static OpenSet whole(RegionPtr region);
  static OpenSet ball(RegionPtr region, Complex center, double radius);
  static OpenSet balls(RegionPtr region, std::vector<Ball> balls);
  /// Union of open rings.
  static OpenSet rings(RegionPtr region, std::vector<Ring> rings);
  /// Union of the Voronoi cells of the flagged grid points.
  static OpenSet cells(RegionPtr region, std::vector<bool> mask);

  /// O_r = {x | dist(x, O) < r}. r == 0 returns the set unchanged.
  OpenSet thicken(double r) const;
  OpenSet intersect(const OpenSet& other) const;
  OpenSet unite(const OpenSet& other) const;
  /// Removes the closures of the given rings (closed rings, closed disks).
  OpenSet minus_closed(std::vector<Ring> closed) const;

  bool contains(Complex z) const;
  /// dist(z, O); exact for ball unions, grid-based otherwise (+inf if empty).
  double distance(Complex z) const;

  std::vector<std::size_t> grid_members() const;
  std::vector<bool> grid_mask() const;

  bool is_ball_union() const;
  /// Balls of a ball union; empty for other shapes.
  std::span<const Ball> ball_list() const;
  bool is_whole() const;

  const RegionPtr& region() const { return region_; }

  struct Node;

 private:
  OpenSet(RegionPtr region, std::shared_ptr<const Node> node);

  RegionPtr region_;
  std::shared_ptr<const Node> node_;
};

/// The open annulus R(x, s)_eps = {y : s - eps < |y - x| < s + eps}.
OpenSet annulus(const RegionPtr& region, Complex x, double s, double eps);

/// f_O(x) = min{1, dist(x, complement of O)} for x in O, else 0.
/// The complement distance is taken over grid points outside O (error <= h).
double peak_function(const OpenSet& set, Complex x);

}  // namespace culift

#endif  // CULIFT_REGION_HPP
