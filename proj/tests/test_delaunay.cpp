#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "pva/delaunay.hpp"

using namespace pva;

namespace {

using EdgeSet = std::set<std::pair<int, int>>;

EdgeSet edge_set(const Delaunay2D& d) {
  EdgeSet s;
  for (const auto& e : d.edges()) s.insert({e.a, e.b});
  return s;
}

// Brute-force Delaunay edges for small inputs: [i,j] is an edge iff some
// circle through i and j is empty, witnessed by a third point (or by any
// empty disk for two-point inputs).
EdgeSet brute_edges(const std::vector<Vec2>& pts) {
  const int n = static_cast<int>(pts.size());
  EdgeSet out;
  if (n == 2) {
    out.insert({0, 1});
    return out;
  }
  auto circumcenter = [](Vec2 a, Vec2 b, Vec2 c, Vec2& center) {
    Vec2 b2 = b - a, c2 = c - a;
    double d = 2 * (b2.x * c2.y - b2.y * c2.x);
    if (std::abs(d) < 1e-14) return false;
    center = a + Vec2{(c2.y * b2.norm2() - b2.y * c2.norm2()) / d,
                      (b2.x * c2.norm2() - c2.x * b2.norm2()) / d};
    return true;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      bool is_edge = false;
      for (int k = 0; k < n && !is_edge; ++k) {
        if (k == i || k == j) continue;
        Vec2 c;
        if (!circumcenter(pts[i], pts[j], pts[k], c)) continue;
        double r2 = (pts[i] - c).norm2();
        bool empty = true;
        for (int m = 0; m < n; ++m) {
          if (m == i || m == j || m == k) continue;
          if ((pts[m] - c).norm2() < r2 * (1 - 1e-12)) {
            empty = false;
            break;
          }
        }
        if (empty) is_edge = true;
      }
      // Hull edge of a 2-separable pair: a huge disk on the outer side.
      if (!is_edge) {
        Vec2 mid = (pts[i] + pts[j]) * 0.5;
        Vec2 dir = pts[j] - pts[i];
        Vec2 nrm{-dir.y, dir.x};
        double len = nrm.norm();
        if (len > 0) {
          for (double side : {1.0, -1.0}) {
            double big = 1e5;
            Vec2 c = mid + nrm * (side * big / len);
            double r2 = (pts[i] - c).norm2();
            bool empty = true;
            for (int m = 0; m < n; ++m) {
              if (m == i || m == j) continue;
              if ((pts[m] - c).norm2() < r2 * (1 - 1e-9)) {
                empty = false;
                break;
              }
            }
            if (empty) {
              is_edge = true;
              break;
            }
          }
        }
      }
      if (is_edge) out.insert({i, j});
    }
  return out;
}

int hull_vertex_count(const std::vector<Vec2>& pts) {
  // Andrew monotone chain, counting collinear hull points as hull vertices
  // (they bound degenerate hull triangles in the triangulation).
  std::vector<int> idx(pts.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return pts[a].x != pts[b].x ? pts[a].x < pts[b].x : pts[a].y < pts[b].y;
  });
  auto cross = [&](int o, int a, int b) {
    return (pts[a] - pts[o]).cross(pts[b] - pts[o]);
  };
  std::vector<int> hull;
  for (int pass = 0; pass < 2; ++pass) {
    size_t start = hull.size();
    for (int i : idx) {
      while (hull.size() >= start + 2 &&
             cross(hull[hull.size() - 2], hull[hull.size() - 1], i) <= 0)
        hull.pop_back();
      hull.push_back(i);
    }
    hull.pop_back();
    std::reverse(idx.begin(), idx.end());
  }
  return static_cast<int>(hull.size());
}

}  // namespace

TEST_CASE("tiny inputs") {
  Delaunay2D d3({{0, 0}, {1, 0}, {0.4, 1}});
  CHECK_FALSE(d3.degenerate_chain());
  CHECK(d3.edges().size() == 3);

  // Four points in convex position: two triangles sharing a diagonal.
  Delaunay2D d4({{0, 0}, {1, 0}, {1.1, 1}, {-0.1, 0.9}});
  CHECK(d4.edges().size() == 5);

  Delaunay2D d2({{0, 0}, {1, 1}});
  CHECK(d2.degenerate_chain());
  CHECK(d2.edges().size() == 1);

  Delaunay2D d1({{0.5, 0.5}});
  CHECK(d1.degenerate_chain());
  CHECK(d1.edges().empty());
}

TEST_CASE("collinear points degenerate to the sorted chain") {
  Delaunay2D d({{0, 0}, {2, 2}, {1, 1}, {3, 3}, {0.5, 0.5}});
  CHECK(d.degenerate_chain());
  CHECK(d.edges().size() == 4);
  EdgeSet expected = {{0, 4}, {2, 4}, {1, 2}, {1, 3}};
  EdgeSet got = edge_set(d);
  CHECK(got == expected);

  Delaunay2D dv({{0, 0}, {0, 3}, {0, 1}});
  CHECK(dv.degenerate_chain());
  CHECK(dv.edges().size() == 2);
}

TEST_CASE("matches brute force on small random sets") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 300; ++rep) {
    int n = 3 + static_cast<int>(rng() % 8);
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    Delaunay2D d(pts);
    REQUIRE_FALSE(d.degenerate_chain());
    CHECK(edge_set(d) == brute_edges(pts));
  }
}

TEST_CASE("Euler edge count 3n - 3 - h on random sets") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    int n = 20 + static_cast<int>(rng() % 400);
    std::vector<Vec2> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    Delaunay2D d(pts);
    int h = hull_vertex_count(pts);
    CHECK(static_cast<int>(d.edges().size()) == 3 * n - 3 - h);
    CHECK(d.hull_size() == h);
  }
}

TEST_CASE("empty-circumcircle property on a random set") {
  std::mt19937_64 rng(512);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Vec2> pts(120);
  for (auto& p : pts) p = {u(rng), u(rng)};
  Delaunay2D d(pts);
  for (const auto& e : d.edges()) {
    for (int tri : {e.tri1, e.tri2}) {
      if (tri < 0) continue;
      auto disk = d.circumdisk(tri);
      for (const auto& p : pts)
        CHECK((p - disk.center).norm2() >= disk.radius2 * (1 - 1e-9));
    }
  }
}

TEST_CASE("grid input with many cocircular quadruples terminates and stays consistent") {
  std::vector<Vec2> pts;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) pts.push_back({static_cast<double>(i), static_cast<double>(j)});
  Delaunay2D d(pts);
  CHECK_FALSE(d.degenerate_chain());
  // 64 points, hull has 28 vertices: expect 3n-3-h edges whichever diagonals
  // the cocircular ties pick.
  CHECK(static_cast<int>(d.edges().size()) == 3 * 64 - 3 - 28);
  // Neighbor lists are symmetric and irreflexive.
  auto adj = d.neighbor_lists();
  for (int i = 0; i < 64; ++i)
    for (int j : adj[i]) {
      CHECK(j != i);
      CHECK(std::find(adj[j].begin(), adj[j].end(), i) != adj[j].end());
    }
}

TEST_CASE("duplicate points are skipped") {
  Delaunay2D d({{0, 0}, {1, 0}, {0.4, 1}, {0.4, 1}, {0, 0}});
  CHECK(d.edges().size() == 3);
}
