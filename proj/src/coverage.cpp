#include <algorithm>
#include <cmath>
#include <vector>

#include "pva/common.hpp"
#include "pva/voronoi.hpp"

namespace pva {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

// Total angle of the circle of radius r about x that lies inside a convex
// region given by inward halfplanes n_i.(z - a_i) >= 0 (unit normals).
struct HalfplaneSet {
  std::vector<Vec2> normals;
  std::vector<double> offsets;  // n.(x - a): constraint cos(theta - phi) >= -offset/r
};

double clip_angle(const HalfplaneSet& hs, double r) {
  struct Arc {
    double s, e;  // 0 <= s < 2pi, s <= e <= s + 2pi
  };
  std::vector<Arc> arcs{{0.0, kTwoPi}};
  std::vector<Arc> next;
  for (size_t i = 0; i < hs.normals.size(); ++i) {
    double c = -hs.offsets[i] / r;
    if (c <= -1.0) continue;      // constraint inactive at this radius
    if (c >= 1.0) return 0.0;     // circle entirely outside this halfplane
    double phi = std::atan2(hs.normals[i].y, hs.normals[i].x);
    double alpha = std::acos(c);
    double s = phi - alpha, e = phi + alpha;
    // Normalize to [0, 2pi).
    s -= kTwoPi * std::floor(s / kTwoPi);
    e = s + 2 * alpha;
    next.clear();
    for (const Arc& a : arcs) {
      // Intersect [a.s, a.e] with [s, e] on the circle (two linear copies).
      for (int shift = -1; shift <= 1; ++shift) {
        double lo = std::max(a.s, s + shift * kTwoPi);
        double hi = std::min(a.e, e + shift * kTwoPi);
        if (hi > lo) next.push_back(Arc{lo, hi});
      }
    }
    arcs.swap(next);
    if (arcs.empty()) return 0.0;
  }
  double total = 0;
  for (const Arc& a : arcs) total += a.e - a.s;
  return total;
}

struct RadialProfile {
  int dim;
  // measure of the sphere of radius r about x inside K
  std::function<double(double)> measure;
  std::vector<double> breakpoints;
};

RadialProfile make_profile(const ConvexBody& K, const Point& x) {
  RadialProfile prof;
  prof.dim = K.dim();
  const int d = K.dim();
  if (d == 1) {
    double k0, k1;
    if (const Ball* b = std::get_if<Ball>(&K.shape())) {
      k0 = b->center[0] - b->radius;
      k1 = b->center[0] + b->radius;
    } else if (const Box* bx = std::get_if<Box>(&K.shape())) {
      k0 = bx->lo[0];
      k1 = bx->hi[0];
    } else {
      throw std::invalid_argument("unsupported body kind for coverage at d=1");
    }
    double xx = x[0];
    prof.measure = [k0, k1, xx](double r) {
      return ((xx - r >= k0 && xx - r <= k1) ? 1.0 : 0.0) +
             ((xx + r >= k0 && xx + r <= k1) ? 1.0 : 0.0);
    };
    prof.breakpoints = {std::abs(xx - k0), std::abs(xx - k1)};
    return prof;
  }
  if (d == 2) {
    if (const Ball* b = std::get_if<Ball>(&K.shape())) {
      double D = x.distance_to(b->center), R0 = b->radius;
      prof.measure = [D, R0](double r) {
        if (r <= 0) return 0.0;
        if (D + r <= R0) return kTwoPi * r;      // circle inside the disk
        if (r >= D + R0 || R0 + r <= D) return 0.0;
        double c = (D * D + r * r - R0 * R0) / (2 * D * r);
        return 2.0 * std::acos(std::clamp(c, -1.0, 1.0)) * r;
      };
      prof.breakpoints = {std::abs(R0 - D), R0 + D};
      return prof;
    }
    // Box and polygon share the halfplane clip.
    HalfplaneSet hs;
    std::vector<Vec2> verts;
    if (const Box* bx = std::get_if<Box>(&K.shape())) {
      verts = {{bx->lo[0], bx->lo[1]}, {bx->hi[0], bx->lo[1]},
               {bx->hi[0], bx->hi[1]}, {bx->lo[0], bx->hi[1]}};
    } else {
      verts = std::get<Polygon2D>(K.shape()).vertices;
    }
    Vec2 xv{x[0], x[1]};
    for (size_t i = 0; i < verts.size(); ++i) {
      Vec2 a = verts[i], b2 = verts[(i + 1) % verts.size()];
      Vec2 e = b2 - a;
      Vec2 n{-e.y / e.norm(), e.x / e.norm()};
      hs.normals.push_back(n);
      hs.offsets.push_back(n.dot(xv - a));
      // Breakpoints: vertex distances and tangency with the edge segment.
      prof.breakpoints.push_back((a - xv).norm());
      double t = std::clamp((xv - a).dot(e) / e.norm2(), 0.0, 1.0);
      prof.breakpoints.push_back((xv - (a + e * t)).norm());
    }
    prof.measure = [hs](double r) { return r <= 0 ? 0.0 : clip_angle(hs, r) * r; };
    return prof;
  }
  if (d == 3) {
    const Ball* b = std::get_if<Ball>(&K.shape());
    if (!b) throw std::invalid_argument("coverage at d=3 supports balls only");
    double D = x.distance_to(b->center), R0 = b->radius;
    prof.measure = [D, R0](double r) {
      if (r <= 0) return 0.0;
      if (D + r <= R0) return 4.0 * M_PI * r * r;
      if (r >= D + R0 || R0 + r <= D) return 0.0;
      if (D == 0) return 0.0;
      double c = (D * D + r * r - R0 * R0) / (2 * D * r);
      return kTwoPi * r * r * (1.0 - std::clamp(c, -1.0, 1.0));
    };
    prof.breakpoints = {std::abs(R0 - D), R0 + D};
    return prof;
  }
  throw std::invalid_argument("coverage supports d in {1,2,3}");
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
  double delta = left + right - whole;
  // Stop at the requested tolerance or at double rounding noise, whichever
  // is larger; otherwise tiny integrands recurse forever.
  double floor = 1e-14 * (std::abs(left) + std::abs(right)) + 1e-240;
  if (depth <= 0 || std::abs(delta) <= std::max(15.0 * tol, floor))
    return left + right + delta / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, std::vector<double> cuts, double lo,
                 double hi, double rel_tol) {
  if (hi <= lo) return 0.0;
  cuts.push_back(lo);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> pieces;
  for (double c : cuts)
    if (c > lo && c < hi &&
        (pieces.empty() || c - (pieces.empty() ? lo : pieces.back()) > 1e-14))
      pieces.push_back(c);
  pieces.push_back(hi);
  // First pass for an absolute tolerance target, then the refined pass.
  double rough = 0, prev = lo;
  for (double c : pieces) {
    double m = 0.5 * (prev + c);
    rough += (c - prev) / 6.0 * (f(prev) + 4 * f(m) + f(c));
    prev = c;
  }
  double tol = std::max(std::abs(rough), 1e-300) * rel_tol;
  double total = 0;
  prev = lo;
  for (double c : pieces) {
    double fa = f(prev), fb = f(c), fm = f(0.5 * (prev + c));
    double whole = (c - prev) / 6.0 * (fa + 4 * fm + fb);
    total += adaptive_simpson(f, prev, c, fa, fm, fb, whole,
                              tol * (c - prev) / (hi - lo), 40);
    prev = c;
  }
  return total;
}

}  // namespace

CoverageResult coverage_probability_detailed(const ConvexBody& K, const Point& x, double lambda,
                                             double rel_tol) {
  if (!(rel_tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (!(lambda > 0)) throw std::invalid_argument("intensity must be positive");
  if (x.dim() != K.dim()) throw std::invalid_argument("query dimension mismatch");
  const int d = K.dim();
  const double kd = unit_ball_volume(d);
  RadialProfile prof = make_profile(K, x);

  CoverageResult out;
  if (!K.contains(x)) {
    // P(x in v_X(K)) = lambda * Int exp(-lambda kappa_d r^d) m(r) dr.
    double lo = K.distance(x), hi = K.max_distance(x);
    auto f = [&](double r) { return std::exp(-lambda * kd * std::pow(r, d)) * prof.measure(r); };
    out.probability = lambda * integrate(f, prof.breakpoints, lo, hi, rel_tol);
  } else {
    // P(x not in v_X(K)) over the complement, truncated with a certified tail.
    double probe = -1, value = 0, rcut = 0;
    for (int pass = 0; pass < 8; ++pass) {
      double tail_target = pass == 0 ? 1e-3 * rel_tol
                                     : std::max(rel_tol * probe * 1e-2, 1e-280);
      rcut = std::pow(std::log(1.0 / tail_target) / (lambda * kd), 1.0 / d);
      auto f = [&](double r) {
        double full = sphere_surface(d, r);
        return std::exp(-lambda * kd * std::pow(r, d)) * std::max(0.0, full - prof.measure(r));
      };
      value = lambda * integrate(f, prof.breakpoints, 0.0, rcut, rel_tol);
      double tail = std::exp(-lambda * kd * std::pow(rcut, d));
      if (value <= 0 || tail <= rel_tol * value || pass == 7) {
        out.probability = value;
        out.truncation_radius = rcut;
        out.tail_bound = tail;
        break;
      }
      probe = value;
    }
  }
  out.probability = std::clamp(out.probability, 0.0, 1.0);
  return out;
}

double coverage_probability(const ConvexBody& K, const Point& x, double lambda, double rel_tol) {
  return coverage_probability_detailed(K, x, lambda, rel_tol).probability;
}

}  // namespace pva
