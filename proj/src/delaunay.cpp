#include "pva/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>

namespace pva {

namespace {

// +1: c strictly left of a->b, -1: strictly right, 0: collinear within tolerance.
int orient(Vec2 a, Vec2 b, Vec2 c) {
  double p = (b.x - a.x) * (c.y - a.y);
  double q = (b.y - a.y) * (c.x - a.x);
  double det = p - q;
  if (std::abs(det) <= kDegenerateTol * (std::abs(p) + std::abs(q))) return 0;
  return det > 0 ? 1 : -1;
}

// +1: p strictly inside the circumcircle of CCW (a,b,c); 0 near-cocircular.
int incircle(Vec2 a, Vec2 b, Vec2 c, Vec2 p) {
  double adx = a.x - p.x, ady = a.y - p.y;
  double bdx = b.x - p.x, bdy = b.y - p.y;
  double cdx = c.x - p.x, cdy = c.y - p.y;
  double ad2 = adx * adx + ady * ady;
  double bd2 = bdx * bdx + bdy * bdy;
  double cd2 = cdx * cdx + cdy * cdy;
  double det = adx * (bdy * cd2 - cdy * bd2) - ady * (bdx * cd2 - cdx * bd2) +
               ad2 * (bdx * cdy - cdx * bdy);
  double mag = std::abs(adx) * (std::abs(bdy) * cd2 + std::abs(cdy) * bd2) +
               std::abs(ady) * (std::abs(bdx) * cd2 + std::abs(cdx) * bd2) +
               ad2 * (std::abs(bdx * cdy) + std::abs(cdx * bdy));
  if (std::abs(det) <= kDegenerateTol * mag) return 0;
  return det > 0 ? 1 : -1;
}

// Morton code on 16-bit quantized coordinates, for insertion locality.
std::uint32_t interleave16(std::uint32_t x) {
  x &= 0xffff;
  x = (x | (x << 8)) & 0x00ff00ff;
  x = (x | (x << 4)) & 0x0f0f0f0f;
  x = (x | (x << 2)) & 0x33333333;
  x = (x | (x << 1)) & 0x55555555;
  return x;
}

}  // namespace

Delaunay2D::Delaunay2D(const std::vector<Vec2>& points) : points_(points) {
  const int n = num_points();
  if (n < 3) {
    build_chain();
    return;
  }

  // Insertion order: Morton-sorted for near-constant-time located walks.
  double x0 = points_[0].x, x1 = x0, y0 = points_[0].y, y1 = y0;
  for (const auto& p : points_) {
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  double sx = x1 > x0 ? 65535.0 / (x1 - x0) : 0.0;
  double sy = y1 > y0 ? 65535.0 / (y1 - y0) : 0.0;
  std::vector<std::uint64_t> code(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = 0; i < n; ++i) {
    auto qx = static_cast<std::uint32_t>((points_[i].x - x0) * sx);
    auto qy = static_cast<std::uint32_t>((points_[i].y - y0) * sy);
    code[i] = (static_cast<std::uint64_t>(interleave16(qx)) << 1) | interleave16(qy);
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return code[a] != code[b] ? code[a] < code[b] : a < b;
  });

  // First triangle: the first two distinct points plus the first point not
  // collinear with them. All-collinear inputs fall back to the chain.
  int s0 = order[0], s1 = -1, s2 = -1;
  for (int i = 1; i < n && s1 < 0; ++i)
    if (!(points_[order[i]].x == points_[s0].x && points_[order[i]].y == points_[s0].y))
      s1 = order[i];
  if (s1 >= 0)
    for (int i = 1; i < n && s2 < 0; ++i) {
      int cand = order[i];
      if (cand == s1) continue;
      if (orient(points_[s0], points_[s1], points_[cand]) != 0) s2 = cand;
    }
  if (s2 < 0) {
    build_chain();
    return;
  }
  if (orient(points_[s0], points_[s1], points_[s2]) < 0) std::swap(s1, s2);

  tris_.reserve(2 * n + 8);
  auto add = [&](int a, int b, int c, bool ghost) {
    tris_.push_back(Tri{{a, b, c}, {-1, -1, -1}, true, ghost});
    return static_cast<int>(tris_.size()) - 1;
  };
  // Ghost triangles store the hull edge reversed, so every shared edge is
  // traversed in opposite directions by its two triangles (manifold
  // orientation; cavity boundaries then form closed rings).
  int t0 = add(s0, s1, s2, false);
  int g01 = add(s1, s0, kGhost, true);
  int g12 = add(s2, s1, kGhost, true);
  int g20 = add(s0, s2, kGhost, true);
  tris_[t0].nbr = {g12, g20, g01};
  tris_[g01].nbr = {g20, g12, t0};  // across (s0,G); across (G,s1); across (s1,s0)
  tris_[g12].nbr = {g01, g20, t0};
  tris_[g20].nbr = {g12, g01, t0};
  last_tri_ = t0;
  stamp_.assign(tris_.capacity(), 0);

  for (int i = 0; i < n; ++i) {
    int pi = order[i];
    if (pi == s0 || pi == s1 || pi == s2) continue;
    insert_point(pi);
  }
  collect_edges();
}

void Delaunay2D::build_chain() {
  degenerate_chain_ = true;
  const int n = num_points();
  if (n < 2) return;
  // Sort along the dominant direction of the point cloud.
  Vec2 lo = points_[0], hi = points_[0];
  for (int i = 1; i < n; ++i) {
    if (points_[i].x < lo.x || (points_[i].x == lo.x && points_[i].y < lo.y)) lo = points_[i];
    if (points_[i].x > hi.x || (points_[i].x == hi.x && points_[i].y > hi.y)) hi = points_[i];
  }
  Vec2 dir = hi - lo;
  if (dir.norm2() == 0) dir = {0, 1};
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double ta = (points_[a] - lo).dot(dir), tb = (points_[b] - lo).dot(dir);
    return ta != tb ? ta < tb : a < b;
  });
  for (int i = 0; i + 1 < n; ++i) {
    Vec2 pa = points_[order[i]], pb = points_[order[i + 1]];
    if (pa.x == pb.x && pa.y == pb.y) continue;  // duplicate
    Edge e;
    e.a = std::min(order[i], order[i + 1]);
    e.b = std::max(order[i], order[i + 1]);
    edges_.push_back(e);
  }
}

bool Delaunay2D::conflict(int tri, Vec2 p) const {
  const Tri& t = tris_[tri];
  if (!t.ghost) return incircle(points_[t.v[0]], points_[t.v[1]], points_[t.v[2]], p) > 0;
  // The edge opposite the ghost vertex is the hull edge, stored reversed, so
  // the outside of the hull lies to its left.
  int g = slot_of(tri, kGhost);
  Vec2 a = points_[t.v[(g + 1) % 3]], b = points_[t.v[(g + 2) % 3]];
  int o = orient(a, b, p);
  if (o > 0) return true;  // strictly outside across this hull edge
  if (o < 0) return false;
  // Collinear with the hull edge: conflicts only if within the edge's slab,
  // i.e. the point lies on the hull boundary here.
  double t01 = (p - a).dot(b - a) / (b - a).norm2();
  return t01 >= 0.0 && t01 <= 1.0;
}

int Delaunay2D::slot_of(int tri, int vertex) const {
  for (int i = 0; i < 3; ++i)
    if (tris_[tri].v[i] == vertex) return i;
  return -1;
}

int Delaunay2D::locate_conflict(Vec2 p, bool& duplicate) {
  duplicate = false;
  int t = last_tri_;
  if (t < 0 || !tris_[t].alive) {
    for (int i = static_cast<int>(tris_.size()) - 1; i >= 0; --i)
      if (tris_[i].alive && !tris_[i].ghost) {
        t = i;
        break;
      }
  }
  int came_from = -1;
  const int max_steps = 4 * static_cast<int>(tris_.size()) + 16;
  for (int step = 0; step < max_steps; ++step) {
    const Tri& tr = tris_[t];
    for (int i = 0; i < 3; ++i) {
      int vi = tr.v[i];
      if (vi >= 0 && points_[vi].x == p.x && points_[vi].y == p.y) {
        duplicate = true;
        return -1;
      }
    }
    if (tr.ghost) {
      // Scan the ghost ring for a conflicting hull edge.
      int g = t;
      const int ring_guard = static_cast<int>(tris_.size()) + 4;
      for (int dir = 0; dir < 2; ++dir) {
        g = t;
        for (int k = 0; k < ring_guard; ++k) {
          if (conflict(g, p)) return g;
          int gslot = slot_of(g, kGhost);
          // neighbors within the ring: across edges containing the ghost vertex
          int next = tris_[g].nbr[(gslot + 1 + dir) % 3];
          if (next < 0 || !tris_[next].ghost) break;
          g = next;
          if (g == t) break;
        }
      }
      // Fall back into the adjacent real triangle.
      int gslot = slot_of(t, kGhost);
      int inner = tris_[t].nbr[gslot];
      if (inner < 0) return -1;
      came_from = t;
      t = inner;
      continue;
    }
    // Remembering visibility walk.
    int go = -1;
    for (int i = 0; i < 3; ++i) {
      int nb = tr.nbr[i];
      if (nb == came_from) continue;
      Vec2 ea = points_[tr.v[(i + 1) % 3]];
      Vec2 eb = points_[tr.v[(i + 2) % 3]];
      if (orient(ea, eb, p) < 0) {
        go = i;
        break;
      }
    }
    if (go < 0) return t;  // contains p (possibly on an edge)
    came_from = t;
    t = tr.nbr[go];
  }
  return t;
}

void Delaunay2D::insert_point(int pi) {
  Vec2 p = points_[pi];
  bool duplicate = false;
  int seed = locate_conflict(p, duplicate);
  if (duplicate) return;
  if (seed < 0 || !conflict(seed, p)) {
    int found = -1;
    if (seed >= 0)
      for (int i = 0; i < 3 && found < 0; ++i) {
        int nb = tris_[seed].nbr[i];
        if (nb >= 0 && tris_[nb].alive && conflict(nb, p)) found = nb;
      }
    if (found < 0)  // cold path: the walk got stuck on a degeneracy
      for (int t = 0; t < static_cast<int>(tris_.size()) && found < 0; ++t)
        if (tris_[t].alive && conflict(t, p)) found = t;
    if (found < 0) return;  // coincides with an existing site
    seed = found;
  }

  // Grow the conflict cavity.
  ++stamp_counter_;
  if (stamp_.size() < tris_.size()) stamp_.resize(tris_.size() * 2, 0);
  std::vector<int> cavity{seed};
  stamp_[seed] = stamp_counter_;
  struct Boundary {
    int eu, ev;      // directed edge, cavity on the left
    int outside;     // non-conflicting triangle across it
  };
  std::vector<Boundary> ring;
  for (;;) {
    ring.clear();
    for (size_t qi = 0; qi < cavity.size(); ++qi) {
      int t = cavity[qi];
      for (int i = 0; i < 3; ++i) {
        int nb = tris_[t].nbr[i];
        if (nb >= 0 && stamp_[nb] == stamp_counter_) continue;
        if (nb >= 0 && conflict(nb, p)) {
          stamp_[nb] = stamp_counter_;
          cavity.push_back(nb);
        } else {
          ring.push_back(Boundary{tris_[t].v[(i + 1) % 3], tris_[t].v[(i + 2) % 3], nb});
        }
      }
    }
    // A fan triangle over a boundary edge the point is collinear with would
    // be degenerate; absorb the offending outside triangle and regrow.
    bool regrow = false;
    for (const auto& be : ring) {
      if (be.eu == kGhost || be.ev == kGhost) continue;
      if (orient(points_[be.eu], points_[be.ev], p) <= 0 && be.outside >= 0 &&
          stamp_[be.outside] != stamp_counter_) {
        stamp_[be.outside] = stamp_counter_;
        cavity.push_back(be.outside);
        regrow = true;
      }
    }
    if (!regrow) break;
  }

  for (int t : cavity) tris_[t].alive = false;

  // Fan the cavity boundary around p. Each boundary edge (eu, ev) becomes the
  // triangle (eu, ev, p); a ghost endpoint makes it a new hull ghost.
  std::unordered_map<int, int> by_start, by_end;
  by_start.reserve(ring.size() * 2);
  by_end.reserve(ring.size() * 2);
  std::vector<int> fresh;
  fresh.reserve(ring.size());
  for (const auto& be : ring) {
    bool ghost = be.eu == kGhost || be.ev == kGhost;
    tris_.push_back(Tri{{be.eu, be.ev, pi}, {-1, -1, -1}, true, ghost});
    int id = static_cast<int>(tris_.size()) - 1;
    fresh.push_back(id);
    by_start[be.eu] = id;
    by_end[be.ev] = id;
    // Link to the surviving outside triangle across (eu, ev).
    tris_[id].nbr[2] = be.outside;
    if (be.outside >= 0) {
      const Tri& out = tris_[be.outside];
      for (int i = 0; i < 3; ++i) {
        int oa = out.v[(i + 1) % 3], ob = out.v[(i + 2) % 3];
        if ((oa == be.ev && ob == be.eu) || (oa == be.eu && ob == be.ev)) {
          tris_[be.outside].nbr[i] = id;
          break;
        }
      }
    }
  }
  // Ring linking: across (ev, p) lies the triangle starting at ev, across
  // (p, eu) the one ending at eu.
  for (int id : fresh) {
    int eu = tris_[id].v[0], ev = tris_[id].v[1];
    tris_[id].nbr[0] = by_start.at(ev);  // edge opposite eu = (ev, p)
    tris_[id].nbr[1] = by_end.at(eu);    // edge opposite ev = (p, eu)
    if (!tris_[id].ghost) last_tri_ = id;
  }
  if (stamp_.size() < tris_.size()) stamp_.resize(tris_.size() * 2, 0);
}

void Delaunay2D::collect_edges() {
  edges_.clear();
  for (int t = 0; t < static_cast<int>(tris_.size()); ++t) {
    const Tri& tr = tris_[t];
    if (!tr.alive || tr.ghost) continue;
    for (int i = 0; i < 3; ++i) {
      int a = tr.v[(i + 1) % 3], b = tr.v[(i + 2) % 3];
      int nb = tr.nbr[i];
      bool hull = nb < 0 || tris_[nb].ghost;
      if (!hull && a > b) continue;  // interior edges once, from the a<b side
      Edge e;
      e.a = std::min(a, b);
      e.b = std::max(a, b);
      e.tri1 = t;
      e.tri2 = hull ? -1 : nb;
      edges_.push_back(e);
    }
  }
}

std::vector<std::vector<int>> Delaunay2D::neighbor_lists() const {
  std::vector<std::vector<int>> adj(num_points());
  for (const auto& e : edges_) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  return adj;
}

Delaunay2D::Disk Delaunay2D::circumdisk(int tri) const {
  const Tri& t = tris_[tri];
  Vec2 a = points_[t.v[0]];
  Vec2 b = points_[t.v[1]] - a, c = points_[t.v[2]] - a;
  double d = 2 * (b.x * c.y - b.y * c.x);
  double b2 = b.norm2(), c2 = c.norm2();
  Vec2 u{(c.y * b2 - b.y * c2) / d, (b.x * c2 - c.x * b2) / d};
  return Disk{a + u, u.norm2()};
}

int Delaunay2D::hull_size() const {
  if (degenerate_chain_) return 0;
  int count = 0;
  for (const auto& t : tris_)
    if (t.alive && t.ghost) ++count;
  return count;
}

}  // namespace pva
