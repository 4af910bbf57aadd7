#include "pva/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pva/common.hpp"
#include "pva/process.hpp"

namespace pva {

ReplicateStats summarize(std::span<const double> values) {
  ReplicateStats s;
  s.n = static_cast<long>(values.size());
  if (s.n == 0) return s;
  long double sum = 0;
  s.min = values[0];
  s.max = values[0];
  for (double v : values) {
    sum += v;
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.mean = static_cast<double>(sum / s.n);
  if (s.n >= 2) {
    long double ss = 0;
    for (double v : values) {
      long double d = v - s.mean;
      ss += d * d;
    }
    s.variance = static_cast<double>(ss / (s.n - 1));
    s.std_error = std::sqrt(s.variance / s.n);
  }
  return s;
}

TheoryBracket symdiff_mean_bracket(const ConvexBody& K, double lambda) {
  const int d = K.dim();
  const double kd = unit_ball_volume(d);
  const double kdm1 = unit_ball_volume(d - 1);
  const double gamma_1d = std::tgamma(1.0 / d);
  TheoryBracket b;
  b.main_value = (2.0 / d) * std::pow(lambda * kd, -1.0 / d) * kdm1 * gamma_1d * K.surface_area();
  double delta_max = (d - 1) / (2.0 * d) * std::pow(kd, -1.0 / d) * gamma_1d / K.inradius();
  b.lower = b.main_value * (1.0 - std::pow(lambda, -1.0 / d) * delta_max);
  b.upper = b.main_value;
  return b;
}

double tail_bound_rate_constant(int dim) {
  return std::pow(2.0, -4) * std::pow(3.0, -2 * dim) * std::pow(dim, -dim - 0.5);
}

double deviation_tail_bound(const ConvexBody& K, double lambda, double t, int k, double cK) {
  if (k < 2) throw std::invalid_argument("tail bound requires k >= 2");
  if (t < 0) throw std::invalid_argument("tail bound requires t >= 0");
  if (!(cK > 0)) throw std::invalid_argument("leading constant must be positive");
  const int d = K.dim();
  const double S = K.surface_area();
  double rate = tail_bound_rate_constant(d) * t * t *
                std::pow(k * std::log(lambda), -1.0 - 1.0 / d) *
                std::pow(lambda, 1.0 + 1.0 / d) / S;
  double bound = cK * std::exp(-rate) + 16.0 * std::sqrt(static_cast<double>(d)) *
                                            std::pow(lambda, -(k - 1.0)) * S;
  return std::clamp(bound, 0.0, 1.0);
}

ScalingFit fit_power_law(std::span<const std::pair<double, double>> points) {
  if (points.size() < 2) throw std::invalid_argument("power-law fit needs >= 2 points");
  double first = points[0].first;
  bool distinct = false;
  for (const auto& [lam, val] : points) {
    if (!(lam > 0)) throw std::invalid_argument("intensities must be positive");
    if (!(val > 0)) throw std::invalid_argument("values must be positive for a log fit");
    if (lam != first) distinct = true;
  }
  if (!distinct) throw std::invalid_argument("power-law fit needs >= 2 distinct intensities");
  long double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  const long n = static_cast<long>(points.size());
  for (const auto& [lam, val] : points) {
    long double x = std::log(lam), y = std::log(val);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  long double den = n * sxx - sx * sx;
  ScalingFit fit;
  fit.slope = static_cast<double>((n * sxy - sx * sy) / den);
  fit.intercept = static_cast<double>((sy - fit.slope * sx) / n);
  long double ss_tot = syy - sy * sy / n;
  long double ss_res = 0;
  for (const auto& [lam, val] : points) {
    long double r = std::log(val) - (fit.intercept + fit.slope * std::log(lam));
    ss_res += r * r;
  }
  fit.r_squared = ss_tot > 0 ? static_cast<double>(1.0L - ss_res / ss_tot) : 1.0;
  fit.points.assign(points.begin(), points.end());
  return fit;
}

std::vector<TailPoint> exceedance_curve(std::span<const double> values, double center,
                                        double scale, std::span<const double> t_grid) {
  if (values.empty()) throw std::invalid_argument("exceedance curve needs samples");
  if (!(scale > 0)) throw std::invalid_argument("scale must be positive");
  const double n = static_cast<double>(values.size());
  const double z = 1.959963984540054;  // 95% Wilson
  std::vector<TailPoint> curve;
  curve.reserve(t_grid.size());
  for (double t : t_grid) {
    long count = 0;
    for (double v : values)
      if (std::abs(v - center) >= t * scale) ++count;
    double p = count / n;
    TailPoint tp;
    tp.t = t;
    tp.exceedance = p;
    tp.wilson_halfwidth =
        z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n);
    curve.push_back(tp);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Replication engine.
// ---------------------------------------------------------------------------

namespace {

Window replicate_window(const ConvexBody& K, double lambda, const RunOptions& opt) {
  if (opt.window_override) return *opt.window_override;
  double rho = opt.rho_override ? *opt.rho_override : buffer_radius(lambda, K.dim(), opt.buffer_k);
  return K.bounding_window(rho);
}

struct ReplicateOutcome {
  double value_a = 0;   // primary functional (or vol_approx of the pair)
  double value_b = 0;   // vol_symdiff of the pair
  double jackknife = 0;
  bool valid = true;
  long excluded_edges = 0;
  double uncertified = 0;
};

long count_in_body(const PointConfig& config, const ConvexBody& K) {
  long c = 0;
  for (int i = 0; i < config.size(); ++i) {
    Point p = config.point(i);
    if (K.contains(p)) ++c;
  }
  return c;
}

ReplicateOutcome evaluate_replicate(Functional functional, const ConvexBody& K,
                                    const PointConfig& config, const RunOptions& opt,
                                    std::uint64_t eval_seed, bool want_pair,
                                    bool want_jackknife) {
  ReplicateOutcome out;
  switch (functional) {
    case Functional::PointCount: {
      double c = static_cast<double>(count_in_body(config, K));
      out.value_a = c;
      out.jackknife = c;  // leave-one-out change is -1 exactly for counted points
      return out;
    }
    case Functional::EdgeSum: {
      EdgeFunctionalSample s = edge_functional(config, K, opt.edge_weight);
      out.value_a = s.value;
      out.excluded_edges = s.excluded_edges;
      out.uncertified = s.total_edges > 0
                            ? static_cast<double>(s.excluded_edges) / s.total_edges
                            : 0.0;
      out.valid = !s.degenerate;
      return out;
    }
    case Functional::VolApprox:
    case Functional::VolSymdiff: {
      if (opt.mode == EvalMode::Exact) {
        ExactVolumes ev = config.dim() == 1 ? exact_1d(config, K) : exact_cells_2d(config, K);
        out.value_a = functional == Functional::VolSymdiff && !want_pair ? ev.vol_symdiff
                                                                         : ev.vol_approx;
        out.value_b = ev.vol_symdiff;
        out.valid = ev.uncertified_cells == 0;
        out.uncertified = ev.uncertified_area / config.window().volume();
        if (want_jackknife)
          throw std::invalid_argument("jackknife uses the Monte Carlo evaluation path");
        return out;
      }
      if (want_jackknife) {
        VolumeJackknife vj = mc_volumes_jackknife(config, K, opt.mc_samples, eval_seed, 1);
        out.value_a = functional == Functional::VolSymdiff ? vj.estimate.vol_symdiff
                                                           : vj.estimate.vol_approx;
        out.value_b = vj.estimate.vol_symdiff;
        out.jackknife = functional == Functional::VolSymdiff ? vj.loo_sum_symdiff
                                                             : vj.loo_sum_approx;
        out.uncertified = vj.estimate.uncertified_fraction;
        out.valid = out.uncertified <= opt.invalid_uncertified_threshold;
        return out;
      }
      VolumeEstimate est = mc_volumes(config, K, opt.mc_samples, eval_seed, 1);
      out.value_a = functional == Functional::VolSymdiff && !want_pair ? est.vol_symdiff
                                                                       : est.vol_approx;
      out.value_b = est.vol_symdiff;
      out.uncertified = est.uncertified_fraction;
      out.valid = out.uncertified <= opt.invalid_uncertified_threshold;
      return out;
    }
  }
  throw std::logic_error("unknown functional");
}

struct Harvest {
  std::vector<double> values_a;
  std::vector<double> values_b;
  std::vector<double> jackknives;
  long invalid = 0;
  long excluded_edges = 0;
  double mean_uncertified = 0;
};

Harvest run_harvest(Functional functional, const ConvexBody& K, double lambda, long R,
                    std::uint64_t master_seed, const RunOptions& opt, bool want_pair,
                    bool want_jackknife) {
  if (R < 1) throw std::invalid_argument("replicate count must be >= 1");
  Window W = replicate_window(K, lambda, opt);
  std::vector<ReplicateOutcome> outcomes(R);
  std::vector<char> failed(R, 0);
  parallel_for(
      R,
      [&](long i) {
        std::uint64_t config_seed = derive_seed(master_seed, 2 * i);
        std::uint64_t eval_seed = derive_seed(master_seed, 2 * i + 1);
        try {
          PointConfig config = sample_poisson(lambda, W, config_seed);
          if (config.empty()) {
            failed[i] = 1;
            return;
          }
          outcomes[i] =
              evaluate_replicate(functional, K, config, opt, eval_seed, want_pair, want_jackknife);
        } catch (const NoPointsError&) {
          failed[i] = 1;
        }
      },
      opt.threads);
  Harvest h;
  h.values_a.reserve(R);
  double uncert_sum = 0;
  for (long i = 0; i < R; ++i) {
    if (failed[i] || !outcomes[i].valid) {
      ++h.invalid;
      continue;
    }
    h.values_a.push_back(outcomes[i].value_a);
    if (want_pair) h.values_b.push_back(outcomes[i].value_b);
    if (want_jackknife) h.jackknives.push_back(outcomes[i].jackknife);
    h.excluded_edges += outcomes[i].excluded_edges;
    uncert_sum += outcomes[i].uncertified;
  }
  if (h.values_a.empty()) throw std::runtime_error("all replicates invalid");
  h.mean_uncertified = uncert_sum / static_cast<double>(h.values_a.size());
  return h;
}

}  // namespace

RunResult run_replicates(Functional functional, const ConvexBody& K, double lambda, long R,
                         std::uint64_t master_seed, const RunOptions& options) {
  Harvest h = run_harvest(functional, K, lambda, R, master_seed, options, false, false);
  RunResult r;
  r.stats = summarize(h.values_a);
  r.invalid_replicates = h.invalid;
  r.excluded_edges = h.excluded_edges;
  r.mean_uncertified = h.mean_uncertified;
  if (options.keep_values) r.values = std::move(h.values_a);
  return r;
}

VolumePairResult run_volume_replicates(const ConvexBody& K, double lambda, long R,
                                       std::uint64_t master_seed, const RunOptions& options) {
  Harvest h = run_harvest(Functional::VolApprox, K, lambda, R, master_seed, options, true, false);
  VolumePairResult out;
  out.approx.stats = summarize(h.values_a);
  out.symdiff.stats = summarize(h.values_b);
  out.approx.invalid_replicates = out.symdiff.invalid_replicates = h.invalid;
  out.approx.mean_uncertified = out.symdiff.mean_uncertified = h.mean_uncertified;
  if (options.keep_values) {
    out.approx.values = std::move(h.values_a);
    out.symdiff.values = std::move(h.values_b);
  }
  return out;
}

double jackknife_rhs(const PointConfig& config, const ConvexBody& K, Functional functional,
                     long mc_samples, std::uint64_t seed) {
  switch (functional) {
    case Functional::PointCount:
      return static_cast<double>(count_in_body(config, K));
    case Functional::VolApprox:
      return mc_volumes_jackknife(config, K, mc_samples, seed, 1).loo_sum_approx;
    case Functional::VolSymdiff:
      return mc_volumes_jackknife(config, K, mc_samples, seed, 1).loo_sum_symdiff;
    case Functional::EdgeSum:
      break;
  }
  throw std::invalid_argument("functional does not support leave-one-out re-evaluation");
}

JackknifeRun run_jackknife(Functional functional, const ConvexBody& K, double lambda, long R,
                           std::uint64_t master_seed, const RunOptions& options) {
  Harvest h = run_harvest(functional, K, lambda, R, master_seed, options, false, true);
  JackknifeRun out;
  out.functional_stats = summarize(h.values_a);
  out.jackknife_stats = summarize(h.jackknives);
  out.invalid_replicates = h.invalid;
  return out;
}

JeulinResult jeulin_compare(double lambda0, int k, const ConvexBody& K, long R,
                            std::uint64_t master_seed, const RunOptions& options) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (R < 2) throw std::invalid_argument("need at least 2 replicates");
  if (K.dim() > 2) throw std::invalid_argument("the comparison uses exact evaluation (d <= 2)");
  RunOptions opt = options;
  opt.mode = EvalMode::Exact;
  const double lambda_single = k * lambda0;
  Window W_single = replicate_window(K, lambda_single, opt);
  Window W_avg = replicate_window(K, lambda0, opt);

  std::vector<double> single(R), averaged(R);
  std::vector<char> failed(R, 0);
  parallel_for(
      R,
      [&](long i) {
        try {
          // Both arms share the per-replicate seed stream, so k = 1 compares
          // identical realizations and the ratio is exactly 1.
          {
            PointConfig config =
                sample_poisson(lambda_single, W_single, derive_seed(master_seed, i, 0));
            if (config.empty()) {
              failed[i] = 1;
              return;
            }
            ExactVolumes ev = config.dim() == 1 ? exact_1d(config, K) : exact_cells_2d(config, K);
            if (ev.uncertified_cells > 0) failed[i] = 1;
            single[i] = ev.vol_approx;
          }
          double acc = 0;
          for (int j = 0; j < k; ++j) {
            PointConfig config = sample_poisson(lambda0, W_avg, derive_seed(master_seed, i, j));
            if (config.empty()) {
              failed[i] = 1;
              return;
            }
            ExactVolumes ev = config.dim() == 1 ? exact_1d(config, K) : exact_cells_2d(config, K);
            if (ev.uncertified_cells > 0) failed[i] = 1;
            acc += ev.vol_approx;
          }
          averaged[i] = acc / k;
        } catch (const NoPointsError&) {
          failed[i] = 1;
        }
      },
      opt.threads);

  std::vector<double> s_ok, a_ok;
  s_ok.reserve(R);
  a_ok.reserve(R);
  for (long i = 0; i < R; ++i) {
    if (failed[i]) continue;
    s_ok.push_back(single[i]);
    a_ok.push_back(averaged[i]);
  }
  if (s_ok.size() < 2) throw std::runtime_error("all replicates invalid");

  auto variance_with_se = [](const std::vector<double>& v, double& var, double& se) {
    ReplicateStats st = summarize(v);
    var = st.variance;
    long double m4 = 0;
    for (double x : v) {
      long double d = x - st.mean;
      m4 += d * d * d * d;
    }
    double n = static_cast<double>(v.size());
    m4 /= n;
    double var_of_var =
        (static_cast<double>(m4) - st.variance * st.variance * (n - 3) / (n - 1)) / n;
    se = var_of_var > 0 ? std::sqrt(var_of_var) : 0.0;
  };
  JeulinResult out;
  out.replicates = static_cast<long>(s_ok.size());
  variance_with_se(s_ok, out.var_single, out.se_single);
  variance_with_se(a_ok, out.var_averaged, out.se_averaged);
  if (k == 1) {
    out.ratio = 1.0;  // identical realizations by construction
  } else {
    out.ratio = out.var_single / out.var_averaged;
  }
  return out;
}

const char* functional_name(Functional f) {
  switch (f) {
    case Functional::VolApprox:
      return "vol_approx";
    case Functional::VolSymdiff:
      return "vol_symdiff";
    case Functional::EdgeSum:
      return "edge_functional";
    case Functional::PointCount:
      return "point_count";
  }
  return "unknown";
}

}  // namespace pva
