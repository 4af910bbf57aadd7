#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pva/geometry.hpp"

using namespace pva;

namespace {

ConvexBody unit_square() { return ConvexBody::make_box(Point(0, 0), Point(1, 1)); }

ConvexBody right_triangle() {
  return ConvexBody::make_polygon({{0, 0}, {1, 0}, {0, 1}});
}

// Independent membership oracle: ray casting for polygons, direct
// comparisons for balls and boxes.
bool oracle_contains(const ConvexBody& K, const Point& z) {
  if (const Ball* b = std::get_if<Ball>(&K.shape())) {
    return z.distance_to(b->center) <= b->radius;
  }
  if (const Box* bx = std::get_if<Box>(&K.shape())) {
    for (int i = 0; i < K.dim(); ++i)
      if (z[i] < bx->lo[i] || z[i] > bx->hi[i]) return false;
    return true;
  }
  const auto& v = std::get<Polygon2D>(K.shape()).vertices;
  int crossings = 0;
  double x = z[0], y = z[1];
  for (size_t i = 0; i < v.size(); ++i) {
    Vec2 a = v[i], b = v[(i + 1) % v.size()];
    if ((a.y > y) != (b.y > y)) {
      double t = (y - a.y) / (b.y - a.y);
      if (x < a.x + t * (b.x - a.x)) ++crossings;
    }
  }
  return crossings % 2 == 1;
}

double boundary_distance(const ConvexBody& K, const Point& z) {
  if (const Ball* b = std::get_if<Ball>(&K.shape()))
    return std::abs(z.distance_to(b->center) - b->radius);
  if (const Box* bx = std::get_if<Box>(&K.shape())) {
    if (!K.contains(z)) return K.distance(z);
    double d = 1e300;
    for (int i = 0; i < K.dim(); ++i)
      d = std::min({d, z[i] - bx->lo[i], bx->hi[i] - z[i]});
    return d;
  }
  const auto& v = std::get<Polygon2D>(K.shape()).vertices;
  double d = 1e300;
  Vec2 p{z[0], z[1]};
  for (size_t i = 0; i < v.size(); ++i) {
    Vec2 a = v[i], e = v[(i + 1) % v.size()] - a;
    double t = std::clamp((p - a).dot(e) / e.norm2(), 0.0, 1.0);
    d = std::min(d, (p - (a + e * t)).norm());
  }
  return d;
}

}  // namespace

TEST_CASE("volume closed forms") {
  CHECK(ConvexBody::make_ball(Point(0, 0), 1.0).volume() == doctest::Approx(M_PI).epsilon(1e-12));
  CHECK(ConvexBody::make_box(Point(0, 0), Point(2, 3)).volume() == doctest::Approx(6.0));
  auto sq = ConvexBody::make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(sq.volume() == doctest::Approx(1.0));
  CHECK(ConvexBody::make_ball(Point(0, 0, 0), 2.0).volume() ==
        doctest::Approx(4.0 / 3 * M_PI * 8).epsilon(1e-12));
}

TEST_CASE("surface area closed forms, including the d=1 value 2") {
  CHECK(ConvexBody::make_ball(Point(0, 0, 0), 1.0).surface_area() ==
        doctest::Approx(4 * M_PI).epsilon(1e-12));
  CHECK(unit_square().surface_area() == doctest::Approx(4.0));
  CHECK(ConvexBody::make_box(Point(0.0), Point(1.0)).surface_area() == doctest::Approx(2.0));
  CHECK(ConvexBody::make_ball(Point(0.0), 3.0).surface_area() == doctest::Approx(2.0));
  auto sq = ConvexBody::make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(sq.surface_area() == doctest::Approx(4.0));
}

TEST_CASE("inradius and circumradius") {
  auto sq = unit_square();
  CHECK(sq.inradius() == doctest::Approx(0.5));
  CHECK(sq.circumradius() == doctest::Approx(std::sqrt(2.0) / 2));

  auto ball = ConvexBody::make_ball(Point(1, 2), 2.0);
  CHECK(ball.inradius() == doctest::Approx(2.0));
  CHECK(ball.circumradius() == doctest::Approx(2.0));

  auto tri = right_triangle();
  CHECK(tri.inradius() == doctest::Approx((2.0 - std::sqrt(2.0)) / 2).epsilon(1e-9));
  CHECK(tri.circumradius() == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-9));
  // The Chebyshev center of a right triangle is its incenter.
  double r = tri.inradius();
  CHECK(tri.center()[0] == doctest::Approx(r).epsilon(1e-7));
  CHECK(tri.center()[1] == doctest::Approx(r).epsilon(1e-7));

  auto poly_sq = ConvexBody::make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
  CHECK(poly_sq.inradius() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(poly_sq.circumradius() == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-9));
}

TEST_CASE("radii invariants and isoperimetric identity for balls") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int i = 0; i < 50; ++i) {
    auto ball = ConvexBody::make_ball(Point(u(rng), u(rng)), u(rng));
    CHECK(ball.volume() > 0);
    CHECK(ball.surface_area() > 0);
    CHECK(ball.inradius() > 0);
    CHECK(ball.inradius() <= ball.circumradius() + 1e-12);
    // S(K) * r(K) = d * V(K) exactly for balls.
    CHECK(ball.surface_area() * ball.inradius() ==
          doctest::Approx(2 * ball.volume()).epsilon(1e-12));
  }
  auto tri = right_triangle();
  CHECK(tri.inradius() <= tri.circumradius());
}

TEST_CASE("membership with the closed-set convention") {
  auto ball = ConvexBody::make_ball(Point(0, 0), 1.0);
  CHECK(ball.contains(Point(0, 0)));
  CHECK(ball.contains(Point(1, 0)));
  auto box = unit_square();
  CHECK_FALSE(box.contains(Point(2, 0)));
  CHECK(box.contains(Point(1, 0.5)));
  CHECK(box.contains(Point(0, 0)));
  CHECK_THROWS_AS(box.contains(Point(0.5)), std::invalid_argument);
}

TEST_CASE("membership agrees with an independent oracle away from the boundary") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 2.5);
  std::vector<ConvexBody> bodies;
  bodies.push_back(ConvexBody::make_ball(Point(0.4, 0.6), 0.9));
  bodies.push_back(unit_square());
  bodies.push_back(ConvexBody::make_polygon({{0, 0}, {1.2, 0.1}, {1.5, 1.0}, {0.6, 1.6}, {-0.3, 0.8}}));
  for (const auto& K : bodies) {
    for (int i = 0; i < 10000; ++i) {
      Point z(u(rng), u(rng));
      if (boundary_distance(K, z) < 1e-9) continue;
      CHECK(K.contains(z) == oracle_contains(K, z));
    }
  }
}

TEST_CASE("segment crossing number examples") {
  auto box = unit_square();
  CHECK(box.segment_crossing_number(Segment(Point(0.2, 0.2), Point(0.8, 0.8))) == 0);
  CHECK(box.segment_crossing_number(Segment(Point(0.5, 0.5), Point(2, 0.5))) == 1);
  CHECK(box.segment_crossing_number(Segment(Point(-1, 0.5), Point(2, 0.5))) == 2);
  CHECK(box.segment_crossing_number(Segment(Point(-1, 5), Point(2, 5))) == 0);

  auto ball = ConvexBody::make_ball(Point(0.5, 0.5), 0.5);
  CHECK(ball.segment_crossing_number(Segment(Point(-1, 0.5), Point(2, 0.5))) == 2);
  CHECK(ball.segment_crossing_number(Segment(Point(-1, 2), Point(2, 2))) == 0);

  auto tri = right_triangle();
  CHECK(tri.segment_crossing_number(Segment(Point(0.2, 0.2), Point(2, 0.2))) == 1);
  CHECK(tri.segment_crossing_number(Segment(Point(-1, 0.25), Point(2, 0.25))) == 2);
}

TEST_CASE("crossing number stays in {0,1,2} and vanishes for interior segments") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-2, 3);
  std::vector<ConvexBody> bodies;
  bodies.push_back(ConvexBody::make_ball(Point(0.5, 0.5), 0.8));
  bodies.push_back(unit_square());
  bodies.push_back(ConvexBody::make_polygon({{0, 0}, {1, 0}, {1.4, 0.9}, {0.4, 1.5}}));
  for (const auto& K : bodies) {
    for (int i = 0; i < 100000; ++i) {
      Point a(u(rng), u(rng)), b(u(rng), u(rng));
      if (a == b) continue;
      int nk = K.segment_crossing_number(Segment(a, b));
      CHECK(nk >= 0);
      CHECK(nk <= 2);
      if (K.contains(a) && K.contains(b)) CHECK(nk == 0);
    }
  }
}

TEST_CASE("bounding windows") {
  auto ball = ConvexBody::make_ball(Point(0, 0), 1.0);
  Window w = ball.bounding_window(0.5);
  CHECK(w.lo[0] == doctest::Approx(-1.5));
  CHECK(w.hi[1] == doctest::Approx(1.5));

  Window w2 = unit_square().bounding_window(0.0);
  CHECK(w2.lo[0] == doctest::Approx(0.0));
  CHECK(w2.hi[0] == doctest::Approx(1.0));

  auto tri = ConvexBody::make_polygon({{0, 0}, {1, 0}, {0, 1}});
  Window w3 = tri.bounding_window(1.0);
  CHECK(w3.lo[0] == doctest::Approx(-1.0));
  CHECK(w3.hi[0] == doctest::Approx(2.0));
  CHECK(w3.lo[1] == doctest::Approx(-1.0));
  CHECK(w3.hi[1] == doctest::Approx(2.0));
}

TEST_CASE("polygon area matches a Monte Carlo hit fraction") {
  auto poly = ConvexBody::make_polygon({{0, 0}, {1.2, 0.1}, {1.5, 1.0}, {0.6, 1.6}, {-0.3, 0.8}});
  Window w = poly.bounding_window(0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ux(w.lo[0], w.hi[0]), uy(w.lo[1], w.hi[1]);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i)
    if (poly.contains(Point(ux(rng), uy(rng)))) ++hits;
  double p = static_cast<double>(hits) / n;
  double est = w.volume() * p;
  double se = w.volume() * std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(est - poly.volume()) <= 4 * se);
}

TEST_CASE("invalid constructions are rejected") {
  CHECK_THROWS_AS(ConvexBody::make_ball(Point(0, 0), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ConvexBody::make_box(Point(0, 0), Point(0, 1)), std::invalid_argument);
  // CW orientation
  CHECK_THROWS_AS(ConvexBody::make_polygon({{0, 0}, {0, 1}, {1, 0}}), std::invalid_argument);
  // collinear chain
  CHECK_THROWS_AS(ConvexBody::make_polygon({{0, 0}, {1, 0}, {2, 0}}), std::invalid_argument);
  // nonconvex
  CHECK_THROWS_AS(ConvexBody::make_polygon({{0, 0}, {2, 0}, {2, 2}, {1, 0.5}, {0, 2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(Segment(Point(1, 1), Point(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(Window(Point(0, 0), Point(0, 1)), std::invalid_argument);
}

TEST_CASE("polygon-disk intersection area") {
  std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  // Disk well inside the polygon.
  CHECK(polygon_disk_area(square, {0.5, 0.5}, 0.2) ==
        doctest::Approx(M_PI * 0.04).epsilon(1e-12));
  // Polygon inside the disk.
  CHECK(polygon_disk_area(square, {0.5, 0.5}, 5.0) == doctest::Approx(1.0).epsilon(1e-12));
  // Disjoint.
  CHECK(polygon_disk_area(square, {5, 5}, 1.0) == doctest::Approx(0.0));
  // Half-plane-like overlap: disk centered on an edge.
  CHECK(polygon_disk_area(square, {0.5, 0.0}, 0.3) ==
        doctest::Approx(M_PI * 0.09 / 2).epsilon(1e-9));
  // Monte Carlo cross-check on a generic overlap.
  Vec2 c{0.9, 0.4};
  double r = 0.55;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.2, 1.6);
  const int n = 400000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    Vec2 p{u(rng), u(rng)};
    bool in_sq = p.x >= 0 && p.x <= 1 && p.y >= 0 && p.y <= 1;
    if (in_sq && (p - c).norm2() <= r * r) ++hits;
  }
  double box_area = 1.8 * 1.8;
  double p_hat = static_cast<double>(hits) / n;
  double est = box_area * p_hat;
  double se = box_area * std::sqrt(p_hat * (1 - p_hat) / n);
  CHECK(std::abs(polygon_disk_area(square, c, r) - est) <= 4 * se);
}

TEST_CASE("halfplane clipping basics") {
  std::vector<Vec2> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto half = clip_halfplane(square, Vec2{1, 0}, 0.5);  // x <= 0.5
  CHECK(polygon_area(half) == doctest::Approx(0.5).epsilon(1e-12));
  auto all = clip_halfplane(square, Vec2{1, 0}, 2.0);
  CHECK(polygon_area(all) == doctest::Approx(1.0));
  auto none = clip_halfplane(square, Vec2{1, 0}, -1.0);
  CHECK(none.empty());
}
