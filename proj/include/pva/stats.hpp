#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pva/geometry.hpp"
#include "pva/voronoi.hpp"

namespace pva {

/// Sample moments of a scalar functional over independent replicates.
struct ReplicateStats {
  long n = 0;
  double mean = 0;
  double variance = 0;   // unbiased, divisor n-1
  double std_error = 0;  // sqrt(variance / n)
  double min = 0;
  double max = 0;
};

ReplicateStats summarize(std::span<const double> values);

/// Closed-form bracket for the expected symmetric-difference volume:
///   main = (2/d) (lambda kappa_d)^{-1/d} kappa_{d-1} Gamma(1/d) S(K),
///   lower = main * (1 - lambda^{-1/d} Delta_max),
///   Delta_max = (d-1)/(2d) kappa_d^{-1/d} Gamma(1/d) / r(K).
struct TheoryBracket {
  double main_value = 0;
  double lower = 0;
  double upper = 0;
};

TheoryBracket symdiff_mean_bracket(const ConvexBody& K, double lambda);

/// Closed-form deviation tail bound
///   cK * exp(-c_d' t^2 (k ln lambda)^{-1-1/d} lambda^{1+1/d} / S(K)) +
///   16 sqrt(d) lambda^{-k+1} S(K),  c_d' = 2^{-4} 3^{-2d} d^{-d-1/2},
/// clamped to [0,1]. The leading constant cK is a caller input.
double deviation_tail_bound(const ConvexBody& K, double lambda, double t, int k, double cK);
double tail_bound_rate_constant(int dim);  // c_d'

/// Log-log least squares of value on lambda.
struct ScalingFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  std::vector<std::pair<double, double>> points;
};

ScalingFit fit_power_law(std::span<const std::pair<double, double>> points);

/// Empirical exceedance curve P(|value - center| >= t * scale) with Wilson
/// half-widths at each t.
struct TailPoint {
  double t = 0;
  double exceedance = 0;
  double wilson_halfwidth = 0;
};

std::vector<TailPoint> exceedance_curve(std::span<const double> values, double center,
                                        double scale, std::span<const double> t_grid);

// ---------------------------------------------------------------------------
// Replication engine.
// ---------------------------------------------------------------------------

enum class Functional { VolApprox, VolSymdiff, EdgeSum, PointCount };

enum class EvalMode { MonteCarlo, Exact };

struct RunOptions {
  long mc_samples = 100000;  // N per replicate (Monte Carlo mode)
  int buffer_k = 3;          // window buffer exponent
  std::optional<double> rho_override;
  std::optional<Window> window_override;
  EvalMode mode = EvalMode::MonteCarlo;
  EdgeWeight edge_weight = EdgeWeight::constant_one();
  double invalid_uncertified_threshold = 1e-3;
  int threads = 0;
  bool keep_values = false;
};

struct RunResult {
  ReplicateStats stats;
  long invalid_replicates = 0;
  long excluded_edges = 0;
  double mean_uncertified = 0;
  std::vector<double> values;  // per valid replicate, when keep_values
};

/// R independent replicates with seeds derived from (master_seed, i); each
/// samples a fresh configuration on the buffered window and evaluates the
/// functional. Replicates whose uncertified fraction exceeds the threshold
/// (or that are empty) are counted invalid and excluded from the moments.
/// Throws if every replicate is invalid.
RunResult run_replicates(Functional functional, const ConvexBody& K, double lambda, long R,
                         std::uint64_t master_seed, const RunOptions& options = {});

/// Both volume functionals from the same realizations (one pass).
struct VolumePairResult {
  RunResult approx;
  RunResult symdiff;
};

VolumePairResult run_volume_replicates(const ConvexBody& K, double lambda, long R,
                                       std::uint64_t master_seed, const RunOptions& options = {});

/// One jackknife sample Sum_x (S(X\{x}) - S(X))^2 for the given functional.
double jackknife_rhs(const PointConfig& config, const ConvexBody& K, Functional functional,
                     long mc_samples, std::uint64_t seed);

/// Replicated jackknife: per replicate both the functional value and its
/// leave-one-out sum, so the variance and the bound estimate share
/// realizations.
struct JackknifeRun {
  ReplicateStats functional_stats;
  ReplicateStats jackknife_stats;
  long invalid_replicates = 0;
};

JackknifeRun run_jackknife(Functional functional, const ConvexBody& K, double lambda, long R,
                           std::uint64_t master_seed, const RunOptions& options = {});

/// Variance of a single realization at intensity k*lambda0 versus the
/// variance of the mean of k independent realizations at lambda0.
/// Exact evaluation (d <= 2); expected ratio ~ k^{-1/d}.
struct JeulinResult {
  double var_single = 0;
  double var_averaged = 0;
  double ratio = 0;
  double se_single = 0;    // standard error of var_single
  double se_averaged = 0;  // standard error of var_averaged
  long replicates = 0;
};

JeulinResult jeulin_compare(double lambda0, int k, const ConvexBody& K, long R,
                            std::uint64_t master_seed, const RunOptions& options = {});

const char* functional_name(Functional f);

}  // namespace pva
