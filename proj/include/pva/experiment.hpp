#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pva/geometry.hpp"
#include "pva/stats.hpp"

namespace pva {

/// Shared configuration for the batch commands. Precedence: built-in
/// defaults < JSON config file < command-line flags.
struct ExperimentConfig {
  int dim = 2;
  std::string body_spec = "box:0,1;0,1";
  std::vector<double> lambdas;
  long replicates = 1000;   // R
  long mc_samples = 100000; // N per replicate (Monte Carlo paths)
  std::uint64_t seed = 1;
  int buffer_k = 3;
  std::string out_dir = ".";
  int threads = 0;
  bool exact = true;        // exact evaluation where available (d <= 2)
  int jeulin_k = 4;
  std::string points_spec;  // probe points for the oracle command
  double oracle_tol = 1e-6;

  void validate() const;  // throws std::invalid_argument on bad fields
};

/// Body mini-grammar:
///   ball:<r>[@cx,cy,...]   (center defaults to the origin of `dim`)
///   box:<x0,x1;y0,y1;...>
///   poly:<x1,y1;x2,y2;...>
ConvexBody parse_body(const std::string& spec, int dim);

/// Probe-point list "x1,y1;x2,y2" (dimension checked against dim).
std::vector<Point> parse_points(const std::string& spec, int dim);

/// Merge fields present in a JSON config file into `config`.
void load_config_file(ExperimentConfig& config, const std::string& path);

/// One-line provenance header naming all config fields.
std::string config_header(const ExperimentConfig& config, const std::string& command);

/// Format a double with round-trip precision.
std::string fmt_g(double v);

// Commands. Return codes: 0 = all checks pass, 2 = a statistical check
// failed, 1 = usage/config error (thrown as std::invalid_argument by
// validate/parse and mapped by the CLI driver).
int cmd_estimate(const ExperimentConfig& config);
int cmd_scan(const ExperimentConfig& config);
int cmd_oracle(const ExperimentConfig& config);
int cmd_jeulin(const ExperimentConfig& config);
int cmd_dump(const ExperimentConfig& config);

/// Self-contained log-log SVG chart: scatter series, fitted lines, and a
/// reference slope; purely a convenience output.
struct SvgSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (lambda, value)
  double slope = 0, intercept = 0;                // fitted line in log-log
  std::string color = "#1f77b4";
};

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<SvgSeries>& series, double reference_slope,
                      const std::string& header_comment);

}  // namespace pva
