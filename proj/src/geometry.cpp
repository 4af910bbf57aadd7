#include "pva/geometry.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace pva {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

Vec2 to_vec2(const Point& p) { return {p[0], p[1]}; }

/// Inward unit normal of CCW polygon edge a->b.
Vec2 inward_normal(Vec2 a, Vec2 b) {
  Vec2 e = b - a;
  double len = e.norm();
  return {-e.y / len, e.x / len};
}

}  // namespace

// --- Point ------------------------------------------------------------------

Point Point::zero(int dim) {
  require(dim >= 1 && dim <= 3, "dimension must be 1, 2 or 3");
  Point p;
  p.dim_ = dim;
  return p;
}

double Point::squared_distance_to(const Point& o) const {
  double s = 0;
  for (int i = 0; i < dim_; ++i) {
    double d = c_[i] - o.c_[i];
    s += d * d;
  }
  return s;
}

double Point::distance_to(const Point& o) const { return std::sqrt(squared_distance_to(o)); }

bool Point::operator==(const Point& o) const {
  if (dim_ != o.dim_) return false;
  for (int i = 0; i < dim_; ++i)
    if (c_[i] != o.c_[i]) return false;
  return true;
}

bool Point::lex_less(const Point& o) const {
  for (int i = 0; i < dim_; ++i) {
    if (c_[i] < o.c_[i]) return true;
    if (c_[i] > o.c_[i]) return false;
  }
  return false;
}

std::string Point::to_string() const {
  std::ostringstream os;
  os << "(";
  for (int i = 0; i < dim_; ++i) os << (i ? "," : "") << c_[i];
  os << ")";
  return os.str();
}

// --- Segment / Window --------------------------------------------------------

Segment::Segment(Point a_, Point b_) : a(a_), b(b_) {
  require(a.dim() == b.dim(), "segment endpoints must have equal dimension");
  require(!(a == b), "segment endpoints must be distinct");
}

Window::Window(Point lo_, Point hi_) : lo(lo_), hi(hi_) {
  require(lo.dim() == hi.dim(), "window corners must have equal dimension");
  for (int i = 0; i < lo.dim(); ++i)
    require(lo[i] < hi[i], "window must have positive side lengths");
}

double Window::volume() const {
  double v = 1;
  for (int i = 0; i < dim(); ++i) v *= side(i);
  return v;
}

bool Window::contains(const Point& z) const {
  for (int i = 0; i < dim(); ++i)
    if (z[i] < lo[i] || z[i] > hi[i]) return false;
  return true;
}

bool Window::contains_ball(const Point& z, double r) const {
  for (int i = 0; i < dim(); ++i)
    if (z[i] - r < lo[i] || z[i] + r > hi[i]) return false;
  return true;
}

// --- ConvexBody construction --------------------------------------------------

namespace {

struct RadiiCenter {
  double inr, circ;
  Point center;
};

/// Chebyshev center of a strictly convex CCW polygon: maximize r subject to
/// n_i.(c - a_i) >= r over all edges. The optimum is determined by three
/// active constraints; enumerate triples (polygons here are small).
RadiiCenter polygon_radii(const Polygon2D& poly) {
  const auto& v = poly.vertices;
  const int m = static_cast<int>(v.size());
  std::vector<Vec2> normals(m);
  std::vector<double> offsets(m);  // n_i.c - offset_i >= r, offset_i = n_i.a_i
  for (int i = 0; i < m; ++i) {
    Vec2 a = v[i], b = v[(i + 1) % m];
    normals[i] = inward_normal(a, b);
    offsets[i] = normals[i].dot(a);
  }
  auto feasible_radius = [&](Vec2 c) {
    double r = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) r = std::min(r, normals[i].dot(c) - offsets[i]);
    return r;
  };
  double best_r = -1;
  Vec2 best_c{};
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        // Solve n.c - r = offset for the triple.
        double A[3][4] = {
            {normals[i].x, normals[i].y, -1, offsets[i]},
            {normals[j].x, normals[j].y, -1, offsets[j]},
            {normals[k].x, normals[k].y, -1, offsets[k]},
        };
        // Gaussian elimination with partial pivoting.
        bool singular = false;
        for (int col = 0; col < 3 && !singular; ++col) {
          int piv = col;
          for (int row = col + 1; row < 3; ++row)
            if (std::abs(A[row][col]) > std::abs(A[piv][col])) piv = row;
          if (std::abs(A[piv][col]) < kDegenerateTol) {
            singular = true;
            break;
          }
          std::swap(A[piv], A[col]);
          for (int row = 0; row < 3; ++row) {
            if (row == col) continue;
            double f = A[row][col] / A[col][col];
            for (int cc = col; cc < 4; ++cc) A[row][cc] -= f * A[col][cc];
          }
        }
        if (singular) continue;
        Vec2 c{A[0][3] / A[0][0], A[1][3] / A[1][1]};
        double r = feasible_radius(c);
        if (r > best_r) {
          best_r = r;
          best_c = c;
        }
      }
  RadiiCenter rc;
  rc.inr = best_r;
  rc.center = Point(best_c.x, best_c.y);
  // Minimum enclosing circle of the vertices: smallest circle through a pair
  // or triple of vertices covering all of them.
  auto covers = [&](Vec2 c, double r2) {
    for (const auto& p : v)
      if ((p - c).norm2() > r2 * (1 + 1e-12) + 1e-300) return false;
    return true;
  };
  double best2 = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Vec2 c = (v[i] + v[j]) * 0.5;
      double r2 = (v[i] - c).norm2();
      if (r2 < best2 && covers(c, r2)) best2 = r2;
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        // Circumcenter of three points.
        Vec2 a = v[i], b = v[j], c3 = v[k];
        double d = 2 * (a.x * (b.y - c3.y) + b.x * (c3.y - a.y) + c3.x * (a.y - b.y));
        if (std::abs(d) < kDegenerateTol) continue;
        double ux = (a.norm2() * (b.y - c3.y) + b.norm2() * (c3.y - a.y) + c3.norm2() * (a.y - b.y)) / d;
        double uy = (a.norm2() * (c3.x - b.x) + b.norm2() * (a.x - c3.x) + c3.norm2() * (b.x - a.x)) / d;
        Vec2 c{ux, uy};
        double r2 = (a - c).norm2();
        if (r2 < best2 && covers(c, r2)) best2 = r2;
      }
  rc.circ = std::sqrt(best2);
  return rc;
}

}  // namespace

ConvexBody::ConvexBody(std::variant<Ball, Box, Polygon2D> shape, int dim)
    : shape_(std::move(shape)), dim_(dim) {}

ConvexBody ConvexBody::make_ball(Point center, double radius) {
  require(center.dim() >= 1, "ball center must have a dimension");
  require(radius > 0, "ball radius must be positive");
  ConvexBody b(Ball{center, radius}, center.dim());
  b.inradius_ = radius;
  b.circumradius_ = radius;
  b.center_ = center;
  return b;
}

ConvexBody ConvexBody::make_box(Point lo, Point hi) {
  require(lo.dim() == hi.dim(), "box corners must have equal dimension");
  for (int i = 0; i < lo.dim(); ++i) require(lo[i] < hi[i], "box sides must be positive");
  ConvexBody b(Box{lo, hi}, lo.dim());
  double inr = std::numeric_limits<double>::infinity(), diag2 = 0;
  Point c = Point::zero(lo.dim());
  for (int i = 0; i < lo.dim(); ++i) {
    double s = hi[i] - lo[i];
    inr = std::min(inr, 0.5 * s);
    diag2 += 0.25 * s * s;
    c[i] = 0.5 * (lo[i] + hi[i]);
  }
  b.inradius_ = inr;
  b.circumradius_ = std::sqrt(diag2);
  b.center_ = c;
  return b;
}

ConvexBody ConvexBody::make_polygon(std::vector<Vec2> vertices) {
  require(vertices.size() >= 3, "polygon needs at least 3 vertices");
  const int m = static_cast<int>(vertices.size());
  for (int i = 0; i < m; ++i) {
    Vec2 a = vertices[i];
    Vec2 b = vertices[(i + 1) % m];
    Vec2 c = vertices[(i + 2) % m];
    double cr = (b - a).cross(c - b);
    require(cr > kDegenerateTol, "polygon vertices must form a strictly convex CCW chain");
  }
  ConvexBody b(Polygon2D{std::move(vertices)}, 2);
  auto rc = polygon_radii(std::get<Polygon2D>(b.shape_));
  b.inradius_ = rc.inr;
  b.circumradius_ = rc.circ;
  b.center_ = rc.center;
  return b;
}

// --- volumes ------------------------------------------------------------------

double ConvexBody::volume() const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return unit_ball_volume(dim_) * std::pow(s.radius, dim_);
        } else if constexpr (std::is_same_v<T, Box>) {
          double v = 1;
          for (int i = 0; i < dim_; ++i) v *= s.hi[i] - s.lo[i];
          return v;
        } else {
          return polygon_area(s.vertices);
        }
      },
      shape_);
}

double ConvexBody::surface_area() const {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return sphere_surface(dim_, s.radius);
        } else if constexpr (std::is_same_v<T, Box>) {
          double total = 0;
          for (int i = 0; i < dim_; ++i) {
            double face = 1;
            for (int j = 0; j < dim_; ++j)
              if (j != i) face *= s.hi[j] - s.lo[j];
            total += 2 * face;
          }
          return total;
        } else {
          double per = 0;
          const auto& v = s.vertices;
          for (size_t i = 0; i < v.size(); ++i) per += (v[(i + 1) % v.size()] - v[i]).norm();
          return per;
        }
      },
      shape_);
}

// --- membership / distances ----------------------------------------------------

bool ConvexBody::contains(const Point& z) const {
  require(z.dim() == dim_, "point dimension mismatch");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return z.squared_distance_to(s.center) <= s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          for (int i = 0; i < dim_; ++i)
            if (z[i] < s.lo[i] || z[i] > s.hi[i]) return false;
          return true;
        } else {
          Vec2 p = to_vec2(z);
          const auto& v = s.vertices;
          for (size_t i = 0; i < v.size(); ++i) {
            Vec2 a = v[i], b = v[(i + 1) % v.size()];
            if ((b - a).cross(p - a) < 0) return false;
          }
          return true;
        }
      },
      shape_);
}

double ConvexBody::distance(const Point& z) const {
  require(z.dim() == dim_, "point dimension mismatch");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return std::max(0.0, z.distance_to(s.center) - s.radius);
        } else if constexpr (std::is_same_v<T, Box>) {
          double d2 = 0;
          for (int i = 0; i < dim_; ++i) {
            double d = std::max({s.lo[i] - z[i], 0.0, z[i] - s.hi[i]});
            d2 += d * d;
          }
          return std::sqrt(d2);
        } else {
          if (contains(z)) return 0;
          Vec2 p = to_vec2(z);
          const auto& v = s.vertices;
          double best = std::numeric_limits<double>::infinity();
          for (size_t i = 0; i < v.size(); ++i) {
            Vec2 a = v[i], b = v[(i + 1) % v.size()];
            Vec2 e = b - a;
            double t = std::clamp((p - a).dot(e) / e.norm2(), 0.0, 1.0);
            best = std::min(best, (p - (a + e * t)).norm());
          }
          return best;
        }
      },
      shape_);
}

double ConvexBody::max_distance(const Point& z) const {
  require(z.dim() == dim_, "point dimension mismatch");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return z.distance_to(s.center) + s.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          double d2 = 0;
          for (int i = 0; i < dim_; ++i) {
            double d = std::max(std::abs(z[i] - s.lo[i]), std::abs(z[i] - s.hi[i]));
            d2 += d * d;
          }
          return std::sqrt(d2);
        } else {
          Vec2 p = to_vec2(z);
          double best = 0;
          for (const auto& vtx : s.vertices) best = std::max(best, (vtx - p).norm());
          return best;
        }
      },
      shape_);
}

// --- segment intersection --------------------------------------------------------

namespace {

/// Clip parameter interval [t0,t1] of a(t) = a + t*(b-a) to the slab lo<=x_i<=hi.
bool clip_slab(double a, double d, double lo, double hi, double& t0, double& t1) {
  if (std::abs(d) < 1e-300) return a >= lo && a <= hi;
  double ta = (lo - a) / d, tb = (hi - a) / d;
  if (ta > tb) std::swap(ta, tb);
  t0 = std::max(t0, ta);
  t1 = std::min(t1, tb);
  return t0 <= t1;
}

}  // namespace

bool ConvexBody::intersects(const Segment& s) const {
  require(s.a.dim() == dim_, "segment dimension mismatch");
  return std::visit(
      [&](const auto& sh) -> bool {
        using T = std::decay_t<decltype(sh)>;
        if constexpr (std::is_same_v<T, Ball>) {
          // Closest point of the segment to the center.
          double e2 = s.a.squared_distance_to(s.b);
          double t = 0;
          for (int i = 0; i < dim_; ++i) t += (sh.center[i] - s.a[i]) * (s.b[i] - s.a[i]);
          t = std::clamp(t / e2, 0.0, 1.0);
          double d2 = 0;
          for (int i = 0; i < dim_; ++i) {
            double ci = s.a[i] + t * (s.b[i] - s.a[i]) - sh.center[i];
            d2 += ci * ci;
          }
          return d2 <= sh.radius * sh.radius;
        } else if constexpr (std::is_same_v<T, Box>) {
          double t0 = 0, t1 = 1;
          for (int i = 0; i < dim_; ++i)
            if (!clip_slab(s.a[i], s.b[i] - s.a[i], sh.lo[i], sh.hi[i], t0, t1)) return false;
          return true;
        } else {
          Vec2 a = to_vec2(s.a), b = to_vec2(s.b), d = b - a;
          double t0 = 0, t1 = 1;
          const auto& v = sh.vertices;
          for (size_t i = 0; i < v.size(); ++i) {
            Vec2 p = v[i], q = v[(i + 1) % v.size()];
            Vec2 n{-(q - p).y, (q - p).x};  // inside: n.(z - p) >= 0
            double num = n.dot(a - p), den = n.dot(d);
            if (std::abs(den) < 1e-300) {
              if (num < 0) return false;
              continue;
            }
            double t = -num / den;
            if (den > 0)
              t0 = std::max(t0, t);
            else
              t1 = std::min(t1, t);
            if (t0 > t1) return false;
          }
          return true;
        }
      },
      shape_);
}

int ConvexBody::segment_crossing_number(const Segment& s) const {
  return 2 * (intersects(s) ? 1 : 0) - (contains(s.a) ? 1 : 0) - (contains(s.b) ? 1 : 0);
}

Window ConvexBody::bounding_window(double rho) const {
  require(rho >= 0, "buffer must be nonnegative");
  Point lo = Point::zero(dim_), hi = Point::zero(dim_);
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          for (int i = 0; i < dim_; ++i) {
            lo[i] = s.center[i] - s.radius - rho;
            hi[i] = s.center[i] + s.radius + rho;
          }
        } else if constexpr (std::is_same_v<T, Box>) {
          for (int i = 0; i < dim_; ++i) {
            lo[i] = s.lo[i] - rho;
            hi[i] = s.hi[i] + rho;
          }
        } else {
          double x0 = s.vertices[0].x, x1 = x0, y0 = s.vertices[0].y, y1 = y0;
          for (const auto& v : s.vertices) {
            x0 = std::min(x0, v.x);
            x1 = std::max(x1, v.x);
            y0 = std::min(y0, v.y);
            y1 = std::max(y1, v.y);
          }
          lo[0] = x0 - rho;
          hi[0] = x1 + rho;
          lo[1] = y0 - rho;
          hi[1] = y1 + rho;
        }
      },
      shape_);
  return Window(lo, hi);
}

// --- planar polygon kernels ---------------------------------------------------

double polygon_area(const std::vector<Vec2>& poly) {
  double s = 0;
  const size_t m = poly.size();
  if (m < 3) return 0;
  for (size_t i = 0; i < m; ++i) s += poly[i].cross(poly[(i + 1) % m]);
  return 0.5 * s;
}

std::vector<Vec2> clip_halfplane(const std::vector<Vec2>& poly, Vec2 n, double c) {
  std::vector<Vec2> out;
  const size_t m = poly.size();
  if (m == 0) return out;
  out.reserve(m + 1);
  for (size_t i = 0; i < m; ++i) {
    Vec2 a = poly[i], b = poly[(i + 1) % m];
    double da = n.dot(a) - c, db = n.dot(b) - c;
    bool ina = da <= 0, inb = db <= 0;
    if (ina) out.push_back(a);
    if (ina != inb) {
      double t = da / (da - db);
      out.push_back(a + (b - a) * t);
    }
  }
  return out;
}

std::vector<Vec2> window_polygon(const Window& w) {
  return {{w.lo[0], w.lo[1]}, {w.hi[0], w.lo[1]}, {w.hi[0], w.hi[1]}, {w.lo[0], w.hi[1]}};
}

double polygon_disk_area(const std::vector<Vec2>& poly, Vec2 center, double radius) {
  // Green's theorem: sum per-edge contributions of the region bounded by the
  // edge chord (where inside the disk) and circular arcs (where outside).
  const size_t m = poly.size();
  if (m < 3) return 0;
  const double r2 = radius * radius;
  auto sector = [&](Vec2 p, Vec2 q) {
    // Signed circular sector area from direction p to direction q.
    double ang = std::atan2(p.cross(q), p.dot(q));
    return 0.5 * r2 * ang;
  };
  auto triangle = [](Vec2 p, Vec2 q) { return 0.5 * p.cross(q); };
  double area = 0;
  for (size_t i = 0; i < m; ++i) {
    Vec2 p = poly[i] - center, q = poly[(i + 1) % m] - center;
    bool pin = p.norm2() <= r2, qin = q.norm2() <= r2;
    Vec2 d = q - p;
    double a = d.norm2(), b = 2 * p.dot(d), cc = p.norm2() - r2;
    double disc = b * b - 4 * a * cc;
    if (pin && qin) {
      area += triangle(p, q);
    } else if (disc <= 0) {
      area += sector(p, q);  // edge entirely outside the disk
    } else {
      double sq = std::sqrt(disc);
      double t1 = (-b - sq) / (2 * a), t2 = (-b + sq) / (2 * a);
      if (pin) {
        // leaves the disk at t2
        Vec2 x = p + d * std::clamp(t2, 0.0, 1.0);
        area += triangle(p, x) + sector(x, q);
      } else if (qin) {
        Vec2 x = p + d * std::clamp(t1, 0.0, 1.0);
        area += sector(p, x) + triangle(x, q);
      } else if (t1 > 0 && t2 < 1 && t1 < t2) {
        // crosses the disk in the middle of the edge
        Vec2 x1 = p + d * t1, x2 = p + d * t2;
        area += sector(p, x1) + triangle(x1, x2) + sector(x2, q);
      } else {
        area += sector(p, q);
      }
    }
  }
  return std::abs(area);
}

double polygon_body_area(const std::vector<Vec2>& poly, const ConvexBody& body) {
  if (body.dim() != 2) throw std::invalid_argument("polygon_body_area requires a 2-D body");
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return polygon_disk_area(poly, {s.center[0], s.center[1]}, s.radius);
        } else if constexpr (std::is_same_v<T, Box>) {
          std::vector<Vec2> p = poly;
          p = clip_halfplane(p, {-1, 0}, -s.lo[0]);
          p = clip_halfplane(p, {1, 0}, s.hi[0]);
          p = clip_halfplane(p, {0, -1}, -s.lo[1]);
          p = clip_halfplane(p, {0, 1}, s.hi[1]);
          return polygon_area(p);
        } else {
          std::vector<Vec2> p = poly;
          const auto& v = s.vertices;
          for (size_t i = 0; i < v.size() && !p.empty(); ++i) {
            Vec2 a = v[i], b = v[(i + 1) % v.size()];
            Vec2 n{(b - a).y, -(b - a).x};  // outward; inside is n.z <= n.a
            p = clip_halfplane(p, n, n.dot(a));
          }
          return polygon_area(p);
        }
      },
      body.shape());
}

}  // namespace pva
