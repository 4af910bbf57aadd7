#pragma once

#include <array>
#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "pva/common.hpp"

namespace pva {

/// Point in R^d, d in {1,2,3}.
class Point {
 public:
  Point() = default;
  explicit Point(double x) : c_{x, 0, 0}, dim_(1) {}
  Point(double x, double y) : c_{x, y, 0}, dim_(2) {}
  Point(double x, double y, double z) : c_{x, y, z}, dim_(3) {}
  static Point zero(int dim);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[i]; }
  double& operator[](int i) { return c_[i]; }

  double distance_to(const Point& o) const;
  double squared_distance_to(const Point& o) const;

  bool operator==(const Point& o) const;
  /// Lexicographic order, used for deterministic tie-breaking.
  bool lex_less(const Point& o) const;

  std::string to_string() const;

 private:
  std::array<double, 3> c_{};
  int dim_ = 0;
};

/// 2-D vector for the planar kernels (clipping, triangulation).
struct Vec2 {
  double x = 0, y = 0;
  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double dot(Vec2 o) const { return x * o.x + y * o.y; }
  double cross(Vec2 o) const { return x * o.y - y * o.x; }
  double norm2() const { return x * x + y * y; }
  double norm() const { return std::sqrt(norm2()); }
};

/// Closed segment with distinct endpoints.
struct Segment {
  Point a, b;
  Segment(Point a_, Point b_);
};

/// Axis-aligned box window, componentwise lo < hi.
struct Window {
  Point lo, hi;
  Window() = default;
  Window(Point lo_, Point hi_);
  int dim() const { return lo.dim(); }
  double side(int i) const { return hi[i] - lo[i]; }
  double volume() const;
  bool contains(const Point& z) const;
  /// True iff the closed ball B(z, r) lies inside the window.
  bool contains_ball(const Point& z, double r) const;
};

struct Ball {
  Point center;
  double radius = 0;
};

struct Box {
  Point lo, hi;
};

/// Strictly convex CCW polygon in R^2.
struct Polygon2D {
  std::vector<Vec2> vertices;
};

/// Convex body: ball, axis-aligned box, or strictly convex CCW 2-D polygon.
/// Bodies are closed sets (boundary points count as inside) and immutable.
class ConvexBody {
 public:
  static ConvexBody make_ball(Point center, double radius);
  static ConvexBody make_box(Point lo, Point hi);
  static ConvexBody make_polygon(std::vector<Vec2> vertices);

  int dim() const { return dim_; }
  const std::variant<Ball, Box, Polygon2D>& shape() const { return shape_; }

  /// Exact Lebesgue volume (length at d=1, area at d=2, ...).
  double volume() const;
  /// Boundary measure: 2 at d=1, perimeter at d=2, area at d=3.
  double surface_area() const;
  /// Radius of the largest inscribed ball.
  double inradius() const { return inradius_; }
  /// Radius of the smallest enclosing ball (about its own optimal center).
  double circumradius() const { return circumradius_; }
  /// Center of the largest inscribed ball (Chebyshev center for polygons).
  Point center() const { return center_; }

  /// Membership in the closed body.
  bool contains(const Point& z) const;
  /// True iff the closed segment meets the body.
  bool intersects(const Segment& s) const;
  /// 2*1(seg meets K) - 1(a in K) - 1(b in K); values in {0,1,2} for convex K.
  int segment_crossing_number(const Segment& s) const;
  /// Smallest axis-aligned box containing the rho-parallel body.
  Window bounding_window(double rho) const;

  /// Euclidean distance from z to the body (0 when inside).
  double distance(const Point& z) const;
  /// Largest distance from z to a point of the body.
  double max_distance(const Point& z) const;

 private:
  ConvexBody(std::variant<Ball, Box, Polygon2D> shape, int dim);
  std::variant<Ball, Box, Polygon2D> shape_;
  int dim_ = 0;
  double inradius_ = 0, circumradius_ = 0;
  Point center_;
};

// --- planar polygon kernels (shared by the exact Voronoi path) -------------

/// Area of a simple polygon given in CCW order (signed shoelace).
double polygon_area(const std::vector<Vec2>& poly);

/// Clip a convex polygon by the halfplane {z : n.z <= c}. CCW in, CCW out.
std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 n, double c);

/// Area of the intersection of a convex CCW polygon with a disk.
double polygon_disk_area(const std::vector<Vec2>& poly, Vec2 center, double radius);

/// Area of the intersection of a convex CCW polygon with a convex body (d=2).
double polygon_body_area(const std::vector<Vec2>& poly, const ConvexBody& body);

/// Rectangle of a 2-D window as a CCW polygon.
std::vector<Vec2> window_polygon(const Window& w);

}  // namespace pva
