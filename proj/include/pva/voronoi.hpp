#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pva/delaunay.hpp"
#include "pva/geometry.hpp"
#include "pva/process.hpp"

namespace pva {

/// Membership of a query point in the nearest-nucleus approximation of K.
/// `certified` means the verdict cannot change under any extension of the
/// process outside the window: either the nearest-distance ball fits inside
/// the window, or the verdict is already "outside" (points beyond the window
/// are never in K, so a closer one could not flip it to "inside").
struct Classification {
  bool in_approx;
  bool certified;
};

Classification classify(const PointConfig& config, const ConvexBody& K, const Point& z);

/// Monte Carlo volume estimates over the configuration's window.
struct VolumeEstimate {
  double vol_approx = 0;       // V(v_X(K) ∩ W) estimate
  double vol_symdiff = 0;      // V(K Δ v_X(K)) estimate
  double std_error_approx = 0;
  double std_error_symdiff = 0;
  long n_samples = 0;
  double uncertified_fraction = 0;
};

/// N uniform samples in the window; binomial standard errors. Chunked
/// sampling with per-chunk derived seeds makes the result independent of
/// thread count. Throws NoPointsError on an empty configuration.
VolumeEstimate mc_volumes(const PointConfig& config, const ConvexBody& K, long n_samples,
                          std::uint64_t seed, int threads = 0);

/// mc_volumes plus the leave-one-out sums for both volume functionals,
/// sharing one two-nearest-neighbor pass: removing nucleus x re-classifies
/// exactly the samples whose nearest nucleus is x (their verdict moves to the
/// second-nearest nucleus), so Sum_x (S(X\{x}) - S(X))^2 accumulates from
/// per-nucleus flip counts.
struct VolumeJackknife {
  VolumeEstimate estimate;
  double loo_sum_approx = 0;   // Sum over nuclei of squared leave-one-out change
  double loo_sum_symdiff = 0;
};

VolumeJackknife mc_volumes_jackknife(const PointConfig& config, const ConvexBody& K,
                                     long n_samples, std::uint64_t seed, int threads = 0);

/// Exact d=1 evaluation: cells are midpoint intervals clipped to the window.
struct ExactVolumes {
  double vol_approx = 0;
  double vol_symdiff = 0;
  bool all_certified = true;
  double uncertified_area = 0;  // area of contributing cells without a certificate
  int uncertified_cells = 0;
};

ExactVolumes exact_1d(const PointConfig& config, const ConvexBody& K);

/// Exact d=2 evaluation via Voronoi cells (halfplane clips of the window
/// against Delaunay-neighbor bisectors). A contributing cell is certified
/// when every vertex v satisfies B(v, |v - nucleus|) ⊆ W, which makes the
/// cell equal to its infinite-process counterpart.
struct VoronoiCell2D {
  int nucleus = -1;
  std::vector<Vec2> polygon;  // CCW, clipped to the window
  bool certified = true;
};

ExactVolumes exact_cells_2d(const PointConfig& config, const ConvexBody& K,
                            std::vector<VoronoiCell2D>* cells_out = nullptr);

/// Per-nucleus weight for the Delaunay edge statistic.
struct EdgeWeight {
  enum class Kind { ConstantOne, CellVolumeSquared, UserScalar };
  Kind kind = Kind::ConstantOne;
  double alpha = 0;  // scaling degree: f(t·X, t·x) = t^alpha f(X, x)
  std::function<double(const PointConfig&, int)> fn;  // UserScalar only

  static EdgeWeight constant_one() { return EdgeWeight{Kind::ConstantOne, 0, nullptr}; }
  static EdgeWeight cell_volume_squared() { return EdgeWeight{Kind::CellVolumeSquared, 4, nullptr}; }
  static EdgeWeight user(double alpha, std::function<double(const PointConfig&, int)> fn) {
    return EdgeWeight{Kind::UserScalar, alpha, std::move(fn)};
  }
};

/// One realization of Sum over Delaunay edges of (f(X,x)+f(X,y)) * n_K[x,y],
/// where n_K[x,y] = 2*1([x,y] meets K) - 1(x in K) - 1(y in K).
/// Contributing edges without a circumdisk-in-window witness are excluded
/// and counted; their verdict could depend on points beyond the window.
struct EdgeFunctionalSample {
  double value = 0;
  long contributing_edges = 0;
  long excluded_edges = 0;
  long total_edges = 0;
  bool degenerate = false;  // collinear configuration
};

EdgeFunctionalSample edge_functional(const PointConfig& config, const ConvexBody& K,
                                     const EdgeWeight& weight);

/// Probability that a fixed location is covered by (or missed by) the
/// nearest-nucleus approximation, by radial quadrature of the coverage
/// integrals: for x outside K,
///   P(x in v_X(K)) = lambda * Int_K exp(-lambda V(B(x, |x-y|))) dy,
/// and for x inside K the complement integral over R^d \ K, truncated at a
/// radius whose tail is exp(-lambda kappa_d rcut^d) and reported.
struct CoverageResult {
  double probability = 0;
  double truncation_radius = 0;
  double tail_bound = 0;  // unaccounted mass is within [0, tail_bound]
};

CoverageResult coverage_probability_detailed(const ConvexBody& K, const Point& x, double lambda,
                                             double rel_tol);
double coverage_probability(const ConvexBody& K, const Point& x, double lambda, double rel_tol);

}  // namespace pva
