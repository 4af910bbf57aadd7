// Batch experiment driver: estimators over Poisson-Voronoi approximations of
// convex bodies, with CSV/SVG outputs. See README for the body mini-grammar.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pva/acceptance.hpp"
#include "pva/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config_path;
  std::string lambda_list;
};

void add_common(CLI::App* cmd, pva::ExperimentConfig& cfg, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file (flags override it)");
  cmd->add_option("--dim", cfg.dim, "dimension (1, 2 or 3)");
  cmd->add_option("--body", cfg.body_spec,
                  "body spec: ball:<r>[@cx,cy,...] | box:<x0,x1;y0,y1;...> | poly:<x1,y1;...>");
  cmd->add_option("--lambda", flags.lambda_list, "comma-separated intensity list");
  cmd->add_option("--replicates", cfg.replicates, "replicate count R");
  cmd->add_option("--mc", cfg.mc_samples, "Monte Carlo samples N per replicate");
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--buffer-k", cfg.buffer_k, "window buffer exponent k");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--threads", cfg.threads, "thread cap (0 = auto, PVAPPROX_THREADS honored)");
  cmd->add_flag("--exact,!--mc-only", cfg.exact, "exact evaluation where available (d <= 2)");
  cmd->add_option("--k-factor", cfg.jeulin_k, "intensity factor for the jeulin command");
  cmd->add_option("--points", cfg.points_spec, "probe points for oracle, e.g. \"1.2,0;0,0\"");
  cmd->add_option("--tol", cfg.oracle_tol, "quadrature relative tolerance");
}

// Apply precedence: defaults < JSON file < explicit flags.
void finalize(const CLI::App* cmd, pva::ExperimentConfig& cfg, CommonFlags& flags,
              const pva::ExperimentConfig& defaults) {
  if (!flags.config_path.empty()) {
    pva::ExperimentConfig from_file = defaults;
    pva::load_config_file(from_file, flags.config_path);
    // Fields not set on the command line take the file value.
    auto keep = [&](const std::string& name) { return cmd->count(name) > 0; };
    pva::ExperimentConfig merged = from_file;
    if (keep("--dim")) merged.dim = cfg.dim;
    if (keep("--body")) merged.body_spec = cfg.body_spec;
    if (keep("--replicates")) merged.replicates = cfg.replicates;
    if (keep("--mc")) merged.mc_samples = cfg.mc_samples;
    if (keep("--seed")) merged.seed = cfg.seed;
    if (keep("--buffer-k")) merged.buffer_k = cfg.buffer_k;
    if (keep("--out")) merged.out_dir = cfg.out_dir;
    if (keep("--threads")) merged.threads = cfg.threads;
    if (keep("--exact") || keep("--mc-only")) merged.exact = cfg.exact;
    if (keep("--k-factor")) merged.jeulin_k = cfg.jeulin_k;
    if (keep("--points")) merged.points_spec = cfg.points_spec;
    if (keep("--tol")) merged.oracle_tol = cfg.oracle_tol;
    cfg = merged;
  }
  if (!flags.lambda_list.empty()) {
    cfg.lambdas.clear();
    std::string item;
    size_t pos = 0;
    std::string s = flags.lambda_list;
    while (pos <= s.size()) {
      size_t next = s.find(',', pos);
      item = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      if (!item.empty()) cfg.lambdas.push_back(std::stod(item));
      if (next == std::string::npos) break;
      pos = next + 1;
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson-Voronoi approximation of convex bodies: simulation and verification"};
  app.require_subcommand(1);

  pva::ExperimentConfig defaults;
  pva::ExperimentConfig cfg_est = defaults, cfg_scan = defaults, cfg_oracle = defaults,
                        cfg_jeulin = defaults, cfg_dump = defaults;
  CommonFlags fl_est, fl_scan, fl_oracle, fl_jeulin, fl_dump;

  auto* est = app.add_subcommand("estimate", "replicate statistics at a single intensity");
  add_common(est, cfg_est, fl_est);
  auto* scan = app.add_subcommand("scan", "variance scaling across intensities (CSV + SVG)");
  add_common(scan, cfg_scan, fl_scan);
  auto* oracle = app.add_subcommand("oracle", "coverage quadrature vs Monte Carlo frequencies");
  add_common(oracle, cfg_oracle, fl_oracle);
  auto* jeulin = app.add_subcommand("jeulin", "single dense vs averaged sparse comparison");
  add_common(jeulin, cfg_jeulin, fl_jeulin);
  auto* dump = app.add_subcommand("dump", "write one realization (and d=2 cells) as CSV");
  add_common(dump, cfg_dump, fl_dump);

  auto* verify = app.add_subcommand("verify", "run the acceptance suite");
  bool quick = false;
  std::vector<int> only;
  std::uint64_t vseed = 20090719;
  int vthreads = 0;
  std::string vlambda;
  verify->add_flag("--quick", quick, "reduced replicate counts (smoke mode)");
  verify->add_option("--criteria", only, "run only these criterion numbers");
  verify->add_option("--seed", vseed, "master seed");
  verify->add_option("--threads", vthreads, "thread cap");
  verify->add_option("--lambda", vlambda, "unused by verify; must not be empty if given");

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed()) {
      finalize(est, cfg_est, fl_est, defaults);
      return pva::cmd_estimate(cfg_est);
    }
    if (scan->parsed()) {
      finalize(scan, cfg_scan, fl_scan, defaults);
      return pva::cmd_scan(cfg_scan);
    }
    if (oracle->parsed()) {
      finalize(oracle, cfg_oracle, fl_oracle, defaults);
      return pva::cmd_oracle(cfg_oracle);
    }
    if (jeulin->parsed()) {
      finalize(jeulin, cfg_jeulin, fl_jeulin, defaults);
      return pva::cmd_jeulin(cfg_jeulin);
    }
    if (dump->parsed()) {
      finalize(dump, cfg_dump, fl_dump, defaults);
      return pva::cmd_dump(cfg_dump);
    }
    if (verify->parsed()) {
      if (verify->count("--lambda") > 0 && vlambda.empty()) {
        std::fprintf(stderr, "usage error: --lambda must not be empty\n");
        return 1;
      }
      pva::AcceptanceOptions opt;
      opt.quick = quick;
      opt.only = only;
      opt.seed = vseed;
      opt.threads = vthreads;
      auto results = pva::run_acceptance(opt);
      return pva::all_passed(results) ? 0 : 2;
    }
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
