#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "pva/geometry.hpp"
#include "pva/kdtree.hpp"

namespace pva {

/// Width of the buffer beyond K inside which all boundary-relevant Voronoi
/// structure lives with probability 1 - O(lambda^{-k+1}):
/// rho = 4*sqrt(d) * (k * ln(lambda) / lambda)^{1/d}.  Requires lambda > 1.
double buffer_radius(double lambda, int dim, int k);

/// Tail bound P(influence radius >= r) <= 2^d r^d exp(-lambda kappa_d (r - sqrt(d) - R_K)^d)
/// for r >= R_K + sqrt(d); returns 1 below that range.
double radius_tail_bound(double lambda, int dim, double circumradius, double r);

/// One realization of a stationary Poisson process on a finite window,
/// with an immutable exact nearest-neighbor index.
class PointConfig {
 public:
  PointConfig(std::vector<double> coords, Window window, double intensity, std::uint64_t seed);

  int dim() const { return window_.dim(); }
  int size() const { return n_; }
  bool empty() const { return n_ == 0; }
  const Window& window() const { return window_; }
  double intensity() const { return intensity_; }
  std::uint64_t seed() const { return seed_; }

  Point point(int i) const;
  const double* coord(int i) const { return &coords_[i * dim()]; }
  const std::vector<double>& coords() const { return coords_; }
  const KdTree& index() const { return index_; }

 private:
  std::vector<double> coords_;
  Window window_;
  double intensity_;
  std::uint64_t seed_;
  int n_;
  KdTree index_;
};

/// Draw N ~ Poisson(lambda * V(W)) i.i.d. uniform points in W and build the
/// index. Identical (seed, lambda, W) give identical output.
/// Refuses when the expected point count exceeds max_expected_points.
PointConfig sample_poisson(double lambda, const Window& window, std::uint64_t seed,
                           double max_expected_points = 1e8);

struct Neighbor {
  int index;
  Point point;
  double distance;
};

/// Nearest point of the configuration; ties toward the lexicographically
/// smallest point; nullopt when empty.
std::optional<Neighbor> nearest(const PointConfig& config, const Point& z);

/// Nearest and second nearest (second has index -1 when only one point exists).
std::optional<std::pair<Neighbor, Neighbor>> nearest_two(const PointConfig& config, const Point& z);

/// True iff the closed ball B(z, r*) around the query with the nearest
/// distance r* lies inside the window: then no point outside the window can
/// be nearer, and the windowed answer equals the infinite-process answer.
/// Throws NoPointsError on an empty configuration.
bool certify(const PointConfig& config, const Point& z);

}  // namespace pva
