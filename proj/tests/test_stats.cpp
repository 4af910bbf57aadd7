#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pva/common.hpp"
#include "pva/process.hpp"
#include "pva/stats.hpp"

using namespace pva;

namespace {
ConvexBody unit_square() { return ConvexBody::make_box(Point(0, 0), Point(1, 1)); }
}

TEST_CASE("replicate summary moments") {
  std::vector<double> v = {1, 2, 3, 4};
  ReplicateStats s = summarize(v);
  CHECK(s.n == 4);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3));
  CHECK(s.std_error == doctest::Approx(std::sqrt(5.0 / 12)));
  CHECK(s.min == 1);
  CHECK(s.max == 4);
}

TEST_CASE("symmetric-difference bracket evaluates the closed form") {
  // d=2 unit square at lambda=1000: main = 2 * 1000^{-1/2} * 4.
  TheoryBracket b = symdiff_mean_bracket(unit_square(), 1000.0);
  CHECK(b.main_value == doctest::Approx(0.252982212813470).epsilon(1e-12));
  // Delta_max = (1/4) * pi^{-1/2} * Gamma(1/2) / 0.5 = 0.5.
  CHECK(b.lower == doctest::Approx(b.main_value * (1 - 0.5 / std::sqrt(1000.0))).epsilon(1e-12));
  CHECK(b.lower == doctest::Approx(0.248982).epsilon(1e-5));
  CHECK(b.upper == b.main_value);

  // d=1: main = 2/lambda and the correction term vanishes.
  TheoryBracket b1 = symdiff_mean_bracket(ConvexBody::make_box(Point(0.0), Point(1.0)), 50.0);
  CHECK(b1.main_value == doctest::Approx(2.0 / 50).epsilon(1e-12));
  CHECK(b1.lower == doctest::Approx(b1.main_value));
  CHECK(b1.upper == doctest::Approx(b1.main_value));

  // Power-law scaling: main(lambda) / main(2^d lambda) = 2 exactly.
  for (int d = 1; d <= 2; ++d) {
    ConvexBody K = d == 1 ? ConvexBody::make_box(Point(0.0), Point(1.0)) : unit_square();
    double ratio = symdiff_mean_bracket(K, 100.0).main_value /
                   symdiff_mean_bracket(K, std::pow(2.0, d) * 100.0).main_value;
    CHECK(ratio == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("deviation tail bound pieces") {
  // Rate constant at d=2: 2^-4 * 3^-4 * 2^-2.5.
  CHECK(tail_bound_rate_constant(2) == doctest::Approx(1.36402e-4).epsilon(1e-5));
  // Second term alone at t -> infinity: 16 sqrt(2) * 100^-1 * 4.
  double floor_term = deviation_tail_bound(unit_square(), 100.0, 1e9, 2, 1.0);
  CHECK(floor_term == doctest::Approx(16 * std::sqrt(2.0) / 100 * 4).epsilon(1e-9));
  CHECK(floor_term == doctest::Approx(0.9051).epsilon(1e-4));
  // Monotone non-increasing in t; clamped to [0,1].
  double prev = 2;
  for (double t : {0.0, 1.0, 5.0, 20.0, 100.0}) {
    double b = deviation_tail_bound(unit_square(), 100.0, t, 2, 1.0);
    CHECK(b <= prev + 1e-15);
    CHECK(b <= 1.0);
    CHECK(b >= 0.0);
    prev = b;
  }
  CHECK_THROWS_AS(deviation_tail_bound(unit_square(), 100.0, 1.0, 1, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(deviation_tail_bound(unit_square(), 100.0, -1.0, 2, 1.0),
                  std::invalid_argument);
}

TEST_CASE("power-law fit: exact law, two points, noisy law vs closed-form oracle") {
  std::vector<std::pair<double, double>> pts;
  for (double lam : {100.0, 200.0, 400.0}) pts.emplace_back(lam, 7.0 * std::pow(lam, -1.5));
  ScalingFit f = fit_power_law(pts);
  CHECK(f.slope == doctest::Approx(-1.5).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<std::pair<double, double>> two = {{10.0, 3.0}, {100.0, 1.0}};
  CHECK(fit_power_law(two).r_squared == doctest::Approx(1.0));

  // 5% multiplicative noise: slope within 0.1, and identical to an
  // independently coded least-squares solution.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> noise(0.0, 0.05);
  std::vector<std::pair<double, double>> noisy;
  for (double lam : {50.0, 100.0, 200.0, 400.0, 800.0})
    noisy.emplace_back(lam, 7.0 * std::pow(lam, -1.5) * std::exp(noise(rng)));
  ScalingFit g = fit_power_law(noisy);
  CHECK(std::abs(g.slope + 1.5) <= 0.1);
  long double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [lam, val] : noisy) {
    long double x = std::log(lam), y = std::log(val);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  long double n = noisy.size();
  long double slope_oracle = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(g.slope == doctest::Approx(static_cast<double>(slope_oracle)).epsilon(1e-12));

  CHECK_THROWS_AS(fit_power_law(std::vector<std::pair<double, double>>{{10.0, 1.0}}),
                  std::invalid_argument);
  std::vector<std::pair<double, double>> bad = {{10.0, 1.0}, {20.0, -1.0}};
  CHECK_THROWS_AS(fit_power_law(bad), std::invalid_argument);
  std::vector<std::pair<double, double>> same = {{10.0, 1.0}, {10.0, 2.0}};
  CHECK_THROWS_AS(fit_power_law(same), std::invalid_argument);
}

TEST_CASE("exceedance curve: endpoints and monotonicity") {
  std::vector<double> values;
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) values.push_back(gauss(rng));
  std::vector<double> grid = {0, 0.5, 1, 2, 3};
  auto curve = exceedance_curve(values, 0.0, 1.0, grid);
  CHECK(curve[0].exceedance == doctest::Approx(1.0));
  for (size_t i = 1; i < curve.size(); ++i)
    CHECK(curve[i].exceedance <= curve[i - 1].exceedance);
  CHECK(curve[3].exceedance == doctest::Approx(0.0455).epsilon(0.15));
  for (const auto& tp : curve) CHECK(tp.wilson_halfwidth > 0);
  CHECK_THROWS_AS(exceedance_curve(values, 0.0, 0.0, grid), std::invalid_argument);
}

TEST_CASE("volume estimate is unbiased for every body kind at lambda=200") {
  RunOptions opt;
  opt.mode = EvalMode::Exact;
  std::vector<ConvexBody> bodies;
  bodies.push_back(ConvexBody::make_ball(Point(0, 0), 1.0));
  bodies.push_back(unit_square());
  bodies.push_back(ConvexBody::make_box(Point(0.0), Point(1.0)));
  for (size_t i = 0; i < bodies.size(); ++i) {
    RunResult r = run_replicates(Functional::VolApprox, bodies[i], 200.0, 2000,
                                 derive_seed(5150, i), opt);
    CHECK(std::abs(r.stats.mean - bodies[i].volume()) <= 4 * r.stats.std_error);
    CHECK(r.invalid_replicates == 0);
  }
}

TEST_CASE("replicated point counts reproduce the mean-variance identity") {
  // X(W) for W = K = the unit square (buffer zero).
  RunOptions opt;
  opt.rho_override = 0.0;
  const long R = 10000;
  RunResult r = run_replicates(Functional::PointCount, unit_square(), 50.0, R, 424242, opt);
  double se_mean = std::sqrt(50.0 / R);
  CHECK(std::abs(r.stats.mean - 50.0) <= 4 * se_mean);
  double se_var = std::sqrt((50.0 * (1 + 3 * 50.0) - 2500.0) / R);
  CHECK(std::abs(r.stats.variance - 50.0) <= 4 * se_var);
  CHECK(r.invalid_replicates == 0);
}

TEST_CASE("replication is deterministic in the master seed") {
  RunOptions opt;
  opt.mc_samples = 20000;
  RunResult a = run_replicates(Functional::VolApprox, unit_square(), 50.0, 50, 777, opt);
  RunResult b = run_replicates(Functional::VolApprox, unit_square(), 50.0, 50, 777, opt);
  CHECK(a.stats.mean == b.stats.mean);
  CHECK(a.stats.variance == b.stats.variance);
  RunResult c = run_replicates(Functional::VolApprox, unit_square(), 50.0, 50, 778, opt);
  CHECK(a.stats.mean != c.stats.mean);
}

TEST_CASE("constant functional has zero variance") {
  // K contains the whole window, so the edge statistic is identically zero.
  auto K = ConvexBody::make_ball(Point(0.5, 0.5), 50.0);
  RunOptions opt;
  opt.window_override = Window(Point(0, 0), Point(1, 1));
  RunResult r = run_replicates(Functional::EdgeSum, K, 40.0, 100, 5, opt);
  CHECK(r.stats.variance == 0.0);
  CHECK(r.stats.mean == 0.0);
}

TEST_CASE("all-invalid replication reports an error") {
  RunOptions opt;
  opt.mc_samples = 1000;
  opt.invalid_uncertified_threshold = -1.0;  // everything trips the wire
  CHECK_THROWS_AS(
      run_replicates(Functional::VolApprox, unit_square(), 50.0, 10, 1, opt),
      std::runtime_error);
}

TEST_CASE("volume pair shares realizations between both functionals") {
  RunOptions opt;
  opt.mode = EvalMode::Exact;
  VolumePairResult pair = run_volume_replicates(unit_square(), 100.0, 50, 2024, opt);
  RunResult symdiff = run_replicates(Functional::VolSymdiff, unit_square(), 100.0, 50, 2024, opt);
  CHECK(pair.symdiff.stats.mean == doctest::Approx(symdiff.stats.mean).epsilon(1e-12));
  CHECK(pair.approx.stats.n == pair.symdiff.stats.n);
}

TEST_CASE("jackknife sum for the counting functional equals the count") {
  Window W(Point(0, 0), Point(1, 1));
  PointConfig cfg = sample_poisson(80.0, W, 99);
  double jk = jackknife_rhs(cfg, unit_square(), Functional::PointCount, 0, 0);
  CHECK(jk == doctest::Approx(static_cast<double>(cfg.size())));
  CHECK_THROWS_AS(jackknife_rhs(cfg, unit_square(), Functional::EdgeSum, 0, 0),
                  std::invalid_argument);
}

TEST_CASE("jackknife bound is tight for point counts (mean equals variance)") {
  RunOptions opt;
  opt.rho_override = 0.5;
  const long R = 800;
  JackknifeRun run = run_jackknife(Functional::PointCount, unit_square(), 100.0, R, 31, opt);
  // Mean of the leave-one-out sum is lambda*V(K) = Var X(K); both about 100.
  double se = std::sqrt(std::pow(run.jackknife_stats.std_error, 2) +
                        2 * 100.0 * 100.0 / R + 100.0 / R);
  CHECK(std::abs(run.jackknife_stats.mean - run.functional_stats.variance) <= 4 * se);
}

TEST_CASE("jackknife bound dominates the Monte Carlo volume variance") {
  RunOptions opt;
  opt.mc_samples = 30000;
  const long R = 400;
  JackknifeRun run = run_jackknife(Functional::VolApprox, unit_square(), 80.0, R, 2025, opt);
  double se = std::sqrt(std::pow(run.jackknife_stats.std_error, 2) +
                        2 * std::pow(run.functional_stats.variance, 2) / (R - 1));
  CHECK(run.jackknife_stats.mean >= run.functional_stats.variance - 4 * se);
}

TEST_CASE("single dense realization beats averaged sparse ones") {
  RunOptions opt;
  JeulinResult r1 = jeulin_compare(60.0, 1, unit_square(), 300, 8, opt);
  CHECK(r1.ratio == 1.0);  // same estimator by construction
  JeulinResult r4 = jeulin_compare(50.0, 4, unit_square(), 600, 9, opt);
  CHECK(r4.var_single > 0);
  CHECK(r4.var_averaged > 0);
  // Expected about k^{-1/2} = 0.5; allow a generous band at this replicate count.
  CHECK(r4.ratio > 0.25);
  CHECK(r4.ratio < 0.9);
  CHECK_THROWS_AS(jeulin_compare(50.0, 0, unit_square(), 100, 1, opt), std::invalid_argument);
}

TEST_CASE("functional names for reports") {
  CHECK(std::string(functional_name(Functional::VolApprox)) == "vol_approx");
  CHECK(std::string(functional_name(Functional::VolSymdiff)) == "vol_symdiff");
  CHECK(std::string(functional_name(Functional::EdgeSum)) == "edge_functional");
  CHECK(std::string(functional_name(Functional::PointCount)) == "point_count");
}
