#pragma once

#include <array>
#include <vector>

#include "pva/geometry.hpp"

namespace pva {

/// Delaunay triangulation of a planar point set, built by incremental
/// insertion with the empty-circumcircle test. The hull is bounded by ghost
/// triangles sharing an infinite vertex, so points outside the current hull
/// insert through the same cavity machinery.
///
/// Near-cocircular and near-collinear cases are detected with a relative
/// tolerance and resolved deterministically (a degenerate in-circle test
/// counts as "outside", which keeps whichever diagonal is already present).
/// Exactly duplicated input points are skipped.
class Delaunay2D {
 public:
  explicit Delaunay2D(const std::vector<Vec2>& points);

  /// Undirected edge with its adjacent real triangles (-1 past the hull).
  struct Edge {
    int a, b;
    int tri1 = -1, tri2 = -1;
  };

  struct Disk {
    Vec2 center;
    double radius2;
  };

  int num_points() const { return static_cast<int>(points_.size()); }
  const std::vector<Vec2>& points() const { return points_; }

  /// All points collinear (or fewer than 3): edges form the sorted chain.
  bool degenerate_chain() const { return degenerate_chain_; }

  const std::vector<Edge>& edges() const { return edges_; }

  /// Adjacency lists over point indices.
  std::vector<std::vector<int>> neighbor_lists() const;

  /// Circumdisk of real triangle `tri` (as referenced by Edge::tri1/tri2).
  Disk circumdisk(int tri) const;

  /// Number of hull vertices (0 for degenerate chains).
  int hull_size() const;

 private:
  static constexpr int kGhost = -1;

  struct Tri {
    std::array<int, 3> v;    // vertex indices, one may be kGhost
    std::array<int, 3> nbr;  // neighbor across the edge opposite v[i]
    bool alive = true;
    bool ghost = false;
  };

  bool conflict(int tri, Vec2 p) const;
  int locate_conflict(Vec2 p, bool& duplicate);
  void insert_point(int pi);
  void build_chain();
  void collect_edges();
  int slot_of(int tri, int vertex) const;

  std::vector<Vec2> points_;
  std::vector<Tri> tris_;
  std::vector<int> stamp_;
  int stamp_counter_ = 0;
  int last_tri_ = -1;
  bool degenerate_chain_ = false;
  std::vector<Edge> edges_;
};

}  // namespace pva
