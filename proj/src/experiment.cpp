#include "pva/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "pva/common.hpp"
#include "pva/process.hpp"

namespace pva {

namespace {

std::vector<double> split_numbers(const std::string& s, char sep) {
  std::vector<double> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    if (item.empty()) continue;
    size_t pos = 0;
    double v = std::stod(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad number '" + item + "'");
    out.push_back(v);
  }
  return out;
}

Point point_from(const std::vector<double>& c) {
  switch (c.size()) {
    case 1:
      return Point(c[0]);
    case 2:
      return Point(c[0], c[1]);
    case 3:
      return Point(c[0], c[1], c[2]);
    default:
      throw std::invalid_argument("points must have 1 to 3 coordinates");
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  if (dim < 1 || dim > 3) throw std::invalid_argument("dimension must be 1, 2 or 3");
  if (lambdas.empty()) throw std::invalid_argument("intensity list must not be empty");
  for (double l : lambdas)
    if (!(l > 0)) throw std::invalid_argument("intensities must be positive");
  if (replicates < 2) throw std::invalid_argument("replicate count must be >= 2");
  if (mc_samples < 1) throw std::invalid_argument("sample count must be >= 1");
  if (buffer_k < 2) throw std::invalid_argument("buffer exponent k must be >= 2");
  if (exact && dim > 2)
    throw std::invalid_argument("exact evaluation is available for d <= 2 only");
  if (jeulin_k < 1) throw std::invalid_argument("jeulin factor must be >= 1");
}

ConvexBody parse_body(const std::string& spec, int dim) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("body spec must look like kind:args, got '" + spec + "'");
  std::string kind = spec.substr(0, colon);
  std::string args = spec.substr(colon + 1);
  if (kind == "ball") {
    auto at = args.find('@');
    double r = std::stod(at == std::string::npos ? args : args.substr(0, at));
    Point center = Point::zero(dim);
    if (at != std::string::npos) center = point_from(split_numbers(args.substr(at + 1), ','));
    return ConvexBody::make_ball(center, r);
  }
  if (kind == "box") {
    std::vector<std::vector<double>> ranges;
    std::string range;
    std::istringstream is(args);
    while (std::getline(is, range, ';'))
      if (!range.empty()) ranges.push_back(split_numbers(range, ','));
    if (ranges.empty()) throw std::invalid_argument("box spec needs ranges");
    Point lo = Point::zero(static_cast<int>(ranges.size()));
    Point hi = Point::zero(static_cast<int>(ranges.size()));
    for (size_t i = 0; i < ranges.size(); ++i) {
      if (ranges[i].size() != 2) throw std::invalid_argument("box range needs two numbers");
      lo[static_cast<int>(i)] = ranges[i][0];
      hi[static_cast<int>(i)] = ranges[i][1];
    }
    return ConvexBody::make_box(lo, hi);
  }
  if (kind == "poly") {
    std::vector<Vec2> verts;
    std::string v;
    std::istringstream is(args);
    while (std::getline(is, v, ';')) {
      if (v.empty()) continue;
      auto c = split_numbers(v, ',');
      if (c.size() != 2) throw std::invalid_argument("polygon vertices need two coordinates");
      verts.push_back(Vec2{c[0], c[1]});
    }
    return ConvexBody::make_polygon(std::move(verts));
  }
  throw std::invalid_argument("unknown body kind '" + kind + "'");
}

std::vector<Point> parse_points(const std::string& spec, int dim) {
  std::vector<Point> out;
  std::string item;
  std::istringstream is(spec);
  while (std::getline(is, item, ';')) {
    if (item.empty()) continue;
    Point p = point_from(split_numbers(item, ','));
    if (p.dim() != dim) throw std::invalid_argument("probe point dimension mismatch");
    out.push_back(p);
  }
  return out;
}

void load_config_file(ExperimentConfig& config, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  nlohmann::json j;
  in >> j;
  if (j.contains("dim")) config.dim = j["dim"].get<int>();
  if (j.contains("body")) config.body_spec = j["body"].get<std::string>();
  if (j.contains("lambda")) config.lambdas = j["lambda"].get<std::vector<double>>();
  if (j.contains("replicates")) config.replicates = j["replicates"].get<long>();
  if (j.contains("mc_samples")) config.mc_samples = j["mc_samples"].get<long>();
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("buffer_k")) config.buffer_k = j["buffer_k"].get<int>();
  if (j.contains("out_dir")) config.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("threads")) config.threads = j["threads"].get<int>();
  if (j.contains("exact")) config.exact = j["exact"].get<bool>();
  if (j.contains("jeulin_k")) config.jeulin_k = j["jeulin_k"].get<int>();
  if (j.contains("points")) config.points_spec = j["points"].get<std::string>();
  if (j.contains("oracle_tol")) config.oracle_tol = j["oracle_tol"].get<double>();
}

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string config_header(const ExperimentConfig& c, const std::string& command) {
  std::ostringstream os;
  os << "# command=" << command << " dim=" << c.dim << " body=\"" << c.body_spec << "\""
     << " lambda=";
  for (size_t i = 0; i < c.lambdas.size(); ++i) os << (i ? "," : "") << fmt_g(c.lambdas[i]);
  os << " replicates=" << c.replicates << " mc_samples=" << c.mc_samples << " seed=" << c.seed
     << " buffer_k=" << c.buffer_k << " exact=" << (c.exact ? 1 : 0)
     << " jeulin_k=" << c.jeulin_k << " threads=" << c.threads;
  return os.str();
}

namespace {

std::ofstream open_out(const ExperimentConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  std::string path = c.out_dir + "/" + name;
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write output file '" + path + "'");
  return out;
}

void stats_row(std::ostream& os, const ExperimentConfig& c, const std::string& functional,
               double lambda, const RunResult& r) {
  os << functional << "," << c.dim << ",\"" << c.body_spec << "\"," << fmt_g(lambda) << ","
     << r.stats.n << "," << fmt_g(r.stats.mean) << "," << fmt_g(r.stats.variance) << ","
     << fmt_g(r.stats.std_error) << "," << r.invalid_replicates << "," << c.seed << "\n";
}

RunOptions make_options(const ExperimentConfig& c) {
  RunOptions opt;
  opt.mc_samples = c.mc_samples;
  opt.buffer_k = c.buffer_k;
  opt.threads = c.threads;
  opt.mode = c.exact && c.dim <= 2 ? EvalMode::Exact : EvalMode::MonteCarlo;
  return opt;
}

}  // namespace

int cmd_estimate(const ExperimentConfig& config) {
  config.validate();
  ConvexBody K = parse_body(config.body_spec, config.dim);
  if (K.dim() != config.dim) throw std::invalid_argument("body dimension mismatch");
  RunOptions opt = make_options(config);
  double lambda = config.lambdas.front();
  VolumePairResult run =
      run_volume_replicates(K, lambda, config.replicates, config.seed, opt);
  TheoryBracket bracket = symdiff_mean_bracket(K, lambda);

  auto out = open_out(config, "estimate.csv");
  out << config_header(config, "estimate") << "\n";
  out << "functional,d,body,lambda,R,mean,variance,std_error,invalid_count,seed\n";
  stats_row(out, config, "vol_approx", lambda, run.approx);
  stats_row(out, config, "vol_symdiff", lambda, run.symdiff);
  out << "# symdiff_bracket main=" << fmt_g(bracket.main_value)
      << " lower=" << fmt_g(bracket.lower) << " upper=" << fmt_g(bracket.upper) << "\n";

  double se = run.symdiff.stats.std_error;
  bool in_bracket = run.symdiff.stats.mean >= bracket.lower - 4 * se &&
                    run.symdiff.stats.mean <= bracket.upper + 4 * se;
  double z_unbiased =
      std::abs(run.approx.stats.mean - K.volume()) / std::max(run.approx.stats.std_error, 1e-300);
  bool unbiased_ok = z_unbiased <= 4.0;
  out << "# checks unbiased=" << (unbiased_ok ? "pass" : "fail")
      << " symdiff_in_bracket=" << (in_bracket ? "pass" : "fail") << "\n";
  std::cout << "estimate: vol_approx mean=" << fmt_g(run.approx.stats.mean)
            << " se=" << fmt_g(run.approx.stats.std_error)
            << " | vol_symdiff mean=" << fmt_g(run.symdiff.stats.mean)
            << " se=" << fmt_g(se) << " bracket=[" << fmt_g(bracket.lower) << ", "
            << fmt_g(bracket.upper) << "]"
            << (in_bracket ? " (inside)" : " (OUTSIDE)") << "\n";
  return unbiased_ok && in_bracket ? 0 : 2;
}

int cmd_scan(const ExperimentConfig& config) {
  config.validate();
  if (config.lambdas.size() < 2)
    throw std::invalid_argument("scan needs at least two intensities");
  ConvexBody K = parse_body(config.body_spec, config.dim);
  RunOptions opt = make_options(config);

  std::vector<std::pair<double, double>> var_approx, var_symdiff;
  auto out = open_out(config, "scan_stats.csv");
  out << config_header(config, "scan") << "\n";
  out << "functional,d,body,lambda,R,mean,variance,std_error,invalid_count,seed\n";
  for (size_t li = 0; li < config.lambdas.size(); ++li) {
    double lambda = config.lambdas[li];
    VolumePairResult run = run_volume_replicates(
        K, lambda, config.replicates, derive_seed(config.seed, li), opt);
    stats_row(out, config, "vol_approx", lambda, run.approx);
    stats_row(out, config, "vol_symdiff", lambda, run.symdiff);
    var_approx.emplace_back(lambda, run.approx.stats.variance);
    var_symdiff.emplace_back(lambda, run.symdiff.stats.variance);
  }
  ScalingFit fit_a = fit_power_law(var_approx);
  ScalingFit fit_s = fit_power_law(var_symdiff);

  auto fout = open_out(config, "scan_fit.csv");
  fout << config_header(config, "scan") << "\n";
  fout << "functional,slope,intercept,r_squared,reference_slope\n";
  double ref = -(1.0 + 1.0 / config.dim);
  fout << "vol_approx," << fmt_g(fit_a.slope) << "," << fmt_g(fit_a.intercept) << ","
       << fmt_g(fit_a.r_squared) << "," << fmt_g(ref) << "\n";
  fout << "vol_symdiff," << fmt_g(fit_s.slope) << "," << fmt_g(fit_s.intercept) << ","
       << fmt_g(fit_s.r_squared) << "," << fmt_g(ref) << "\n";

  std::vector<SvgSeries> series(2);
  series[0] = SvgSeries{"vol_approx variance", var_approx, fit_a.slope, fit_a.intercept,
                        "#1f77b4"};
  series[1] = SvgSeries{"vol_symdiff variance", var_symdiff, fit_s.slope, fit_s.intercept,
                        "#d62728"};
  write_loglog_svg(config.out_dir + "/scan_variance.svg", "replicate variance vs intensity",
                   series, ref, config_header(config, "scan"));

  bool ok = fit_a.slope <= -1.3 && fit_a.r_squared >= 0.9 && fit_s.slope <= -1.3 &&
            fit_s.r_squared >= 0.9;
  std::cout << "scan: vol_approx slope=" << fmt_g(fit_a.slope) << " R2=" << fmt_g(fit_a.r_squared)
            << " | vol_symdiff slope=" << fmt_g(fit_s.slope) << " R2=" << fmt_g(fit_s.r_squared)
            << " (reference " << fmt_g(ref) << ")\n";
  return ok ? 0 : 2;
}

int cmd_oracle(const ExperimentConfig& config) {
  config.validate();
  ConvexBody K = parse_body(config.body_spec, config.dim);
  double lambda = config.lambdas.front();
  std::vector<Point> probes;
  if (!config.points_spec.empty()) {
    probes = parse_points(config.points_spec, config.dim);
  } else {
    // Default probes on the first axis: center, just inside, just outside.
    Point c = K.center();
    probes.push_back(c);
    for (double f : {0.8, 1.2}) {
      Point p = c;
      p[0] = c[0] + f * K.inradius();
      probes.push_back(p);
    }
  }
  Window W = K.bounding_window(buffer_radius(lambda, config.dim, config.buffer_k));
  auto out = open_out(config, "oracle.csv");
  out << config_header(config, "oracle") << "\n";
  out << "point,quadrature,tail_bound,mc_frequency,mc_se,z\n";
  bool ok = true;
  for (const auto& x : probes) {
    CoverageResult cov = coverage_probability_detailed(K, x, lambda, config.oracle_tol);
    double target = K.contains(x) ? 1.0 - cov.probability : cov.probability;
    std::vector<char> hits(config.replicates, 0);
    parallel_for(
        config.replicates,
        [&](long i) {
          PointConfig cfg = sample_poisson(lambda, W, derive_seed(config.seed, i));
          if (cfg.empty()) return;
          hits[i] = classify(cfg, K, x).in_approx ? 1 : 0;
        },
        config.threads);
    long count = 0;
    for (char h : hits) count += h;
    double freq = static_cast<double>(count) / config.replicates;
    double se = std::sqrt(std::max(freq * (1 - freq), 1e-12) / config.replicates);
    double z = std::abs(freq - target) / se;
    ok = ok && z <= 4.0;
    out << "\"" << x.to_string() << "\"," << fmt_g(target) << "," << fmt_g(cov.tail_bound) << ","
        << fmt_g(freq) << "," << fmt_g(se) << "," << fmt_g(z) << "\n";
    std::cout << "oracle: x=" << x.to_string() << " quadrature=" << fmt_g(target)
              << " mc=" << fmt_g(freq) << " z=" << fmt_g(z) << "\n";
  }
  return ok ? 0 : 2;
}

int cmd_jeulin(const ExperimentConfig& config) {
  config.validate();
  ConvexBody K = parse_body(config.body_spec, config.dim);
  RunOptions opt = make_options(config);
  double lambda0 = config.lambdas.front();
  JeulinResult r = jeulin_compare(lambda0, config.jeulin_k, K, config.replicates, config.seed, opt);
  double expected = std::pow(static_cast<double>(config.jeulin_k), -1.0 / config.dim);
  bool ok = r.ratio >= 0.7 * expected && r.ratio <= 1.4 * expected;
  auto out = open_out(config, "jeulin.csv");
  out << config_header(config, "jeulin") << "\n";
  out << "lambda0,k,R,var_single,var_averaged,ratio,expected_ratio\n";
  out << fmt_g(lambda0) << "," << config.jeulin_k << "," << r.replicates << ","
      << fmt_g(r.var_single) << "," << fmt_g(r.var_averaged) << "," << fmt_g(r.ratio) << ","
      << fmt_g(expected) << "\n";
  std::cout << "jeulin: var_single=" << fmt_g(r.var_single)
            << " var_averaged=" << fmt_g(r.var_averaged) << " ratio=" << fmt_g(r.ratio)
            << " expected~" << fmt_g(expected) << "\n";
  return ok ? 0 : 2;
}

int cmd_dump(const ExperimentConfig& config) {
  config.validate();
  ConvexBody K = parse_body(config.body_spec, config.dim);
  double lambda = config.lambdas.front();
  Window W = K.bounding_window(buffer_radius(lambda, config.dim, config.buffer_k));
  PointConfig cfg = sample_poisson(lambda, W, config.seed);
  auto out = open_out(config, "points.csv");
  out << config_header(config, "dump") << "\n";
  for (int i = 0; i < cfg.size(); ++i) {
    for (int j = 0; j < cfg.dim(); ++j) out << (j ? "," : "") << fmt_g(cfg.coord(i)[j]);
    out << "\n";
  }
  if (config.dim == 2 && !cfg.empty()) {
    std::vector<VoronoiCell2D> cells;
    exact_cells_2d(cfg, K, &cells);
    auto cout_file = open_out(config, "cells.csv");
    cout_file << config_header(config, "dump") << "\n";
    cout_file << "# nucleus_x,nucleus_y,vertex_count,x1,y1,...\n";
    for (const auto& cell : cells) {
      cout_file << fmt_g(cfg.coord(cell.nucleus)[0]) << "," << fmt_g(cfg.coord(cell.nucleus)[1])
                << "," << cell.polygon.size();
      for (const auto& v : cell.polygon) cout_file << "," << fmt_g(v.x) << "," << fmt_g(v.y);
      cout_file << "\n";
    }
  }
  std::cout << "dump: " << cfg.size() << " points written\n";
  return 0;
}

// ---------------------------------------------------------------------------
// SVG chart.
// ---------------------------------------------------------------------------

void write_loglog_svg(const std::string& path, const std::string& title,
                      const std::vector<SvgSeries>& series, double reference_slope,
                      const std::string& header_comment) {
  const int width = 640, height = 480, margin = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& s : series)
    for (const auto& [lam, val] : s.points) {
      xmin = std::min(xmin, std::log(lam));
      xmax = std::max(xmax, std::log(lam));
      ymin = std::min(ymin, std::log(val));
      ymax = std::max(ymax, std::log(val));
    }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  double xpad = 0.05 * (xmax - xmin), ypad = 0.08 * (ymax - ymin);
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;
  auto X = [&](double lx) { return margin + (lx - xmin) / (xmax - xmin) * (width - 2 * margin); };
  auto Y = [&](double ly) {
    return height - margin - (ly - ymin) / (ymax - ymin) * (height - 2 * margin);
  };
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\">\n<!-- " << header_comment << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
      << title << "</text>\n";
  // Axes.
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 16
      << "\" text-anchor=\"middle\" font-size=\"12\">ln lambda</text>\n";
  out << "<text x=\"16\" y=\"" << height / 2 << "\" font-size=\"12\" transform=\"rotate(-90 16 "
      << height / 2 << ")\">ln value</text>\n";
  // Tick labels at the data points of the first series.
  if (!series.empty())
    for (const auto& [lam, val] : series[0].points) {
      (void)val;
      out << "<text x=\"" << X(std::log(lam)) << "\" y=\"" << height - margin + 16
          << "\" text-anchor=\"middle\" font-size=\"10\">" << lam << "</text>\n";
    }
  int legend_y = margin;
  for (const auto& s : series) {
    for (const auto& [lam, val] : s.points)
      out << "<circle cx=\"" << X(std::log(lam)) << "\" cy=\"" << Y(std::log(val))
          << "\" r=\"3.5\" fill=\"" << s.color << "\"/>\n";
    out << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(s.intercept + s.slope * xmin) << "\" x2=\""
        << X(xmax) << "\" y2=\"" << Y(s.intercept + s.slope * xmax) << "\" stroke=\"" << s.color
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << width - margin - 4 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << s.color << "\">" << s.label
        << " (slope " << fmt_g(s.slope).substr(0, 7) << ")</text>\n";
    legend_y += 16;
  }
  // Reference slope through the first series' first point.
  if (!series.empty() && !series[0].points.empty()) {
    double lx0 = std::log(series[0].points[0].first);
    double ly0 = std::log(series[0].points[0].second);
    out << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(ly0 + reference_slope * (xmin - lx0))
        << "\" x2=\"" << X(xmax) << "\" y2=\"" << Y(ly0 + reference_slope * (xmax - lx0))
        << "\" stroke=\"#7f7f7f\" stroke-dasharray=\"5,4\"/>\n";
    out << "<text x=\"" << width - margin - 4 << "\" y=\"" << legend_y
        << "\" text-anchor=\"end\" font-size=\"11\" fill=\"#7f7f7f\">reference slope "
        << reference_slope << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace pva
