#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pva/experiment.hpp"

using namespace pva;

namespace {

std::string temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / "pva_experiment_test";
  std::filesystem::create_directories(dir);
  return dir.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("body spec mini-grammar") {
  auto ball = parse_body("ball:1", 2);
  CHECK(ball.dim() == 2);
  CHECK(ball.volume() == doctest::Approx(M_PI));

  auto ball_c = parse_body("ball:0.5@1,2", 2);
  CHECK(ball_c.center()[0] == doctest::Approx(1.0));
  CHECK(ball_c.center()[1] == doctest::Approx(2.0));

  auto box = parse_body("box:0,1;0,2", 2);
  CHECK(box.volume() == doctest::Approx(2.0));
  auto interval = parse_body("box:0,1", 1);
  CHECK(interval.dim() == 1);

  auto poly = parse_body("poly:0,0;1,0;1,1;0,1", 2);
  CHECK(poly.volume() == doctest::Approx(1.0));

  CHECK_THROWS_AS(parse_body("blob:1", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_body("ball", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_body("box:0;1", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_body("poly:0,0;1,0", 2), std::invalid_argument);
  CHECK_THROWS_AS(parse_body("ball:x", 2), std::invalid_argument);
}

TEST_CASE("probe point parsing") {
  auto pts = parse_points("1.2,0;0,0.5", 2);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0][0] == doctest::Approx(1.2));
  CHECK(pts[1][1] == doctest::Approx(0.5));
  CHECK_THROWS_AS(parse_points("1,2,3", 2), std::invalid_argument);
}

TEST_CASE("config validation") {
  ExperimentConfig c;
  c.lambdas = {100.0};
  CHECK_NOTHROW(c.validate());
  ExperimentConfig empty = c;
  empty.lambdas.clear();
  CHECK_THROWS_AS(empty.validate(), std::invalid_argument);
  ExperimentConfig bad_r = c;
  bad_r.replicates = 1;
  CHECK_THROWS_AS(bad_r.validate(), std::invalid_argument);
  ExperimentConfig bad_d = c;
  bad_d.dim = 4;
  CHECK_THROWS_AS(bad_d.validate(), std::invalid_argument);
  ExperimentConfig exact3 = c;
  exact3.dim = 3;
  exact3.exact = true;
  CHECK_THROWS_AS(exact3.validate(), std::invalid_argument);
}

TEST_CASE("JSON config merge") {
  std::string dir = temp_dir();
  std::string path = dir + "/cfg.json";
  {
    std::ofstream out(path);
    out << R"({"dim":1,"body":"box:0,1","lambda":[25,50],"replicates":64,"seed":9})";
  }
  ExperimentConfig c;
  load_config_file(c, path);
  CHECK(c.dim == 1);
  CHECK(c.body_spec == "box:0,1");
  REQUIRE(c.lambdas.size() == 2);
  CHECK(c.lambdas[1] == doctest::Approx(50.0));
  CHECK(c.replicates == 64);
  CHECK(c.seed == 9);
  CHECK(c.mc_samples == 100000);  // untouched default
  CHECK_THROWS_AS(load_config_file(c, dir + "/missing.json"), std::invalid_argument);
}

TEST_CASE("provenance header names all config fields") {
  ExperimentConfig c;
  c.lambdas = {10.0, 20.0};
  std::string h = config_header(c, "scan");
  for (const char* key : {"command=", "dim=", "body=", "lambda=", "replicates=", "mc_samples=",
                          "seed=", "buffer_k=", "exact=", "threads="})
    CHECK(h.find(key) != std::string::npos);
}

TEST_CASE("estimate command writes a self-describing CSV") {
  ExperimentConfig c;
  c.dim = 1;
  c.body_spec = "box:0,1";
  c.lambdas = {100.0};
  c.replicates = 300;
  c.exact = true;
  c.seed = 33;
  c.out_dir = temp_dir() + "/est";
  int code = cmd_estimate(c);
  CHECK((code == 0 || code == 2));  // bracket containment is a statistical check
  std::string text = slurp(c.out_dir + "/estimate.csv");
  CHECK(text.find("# command=estimate") != std::string::npos);
  CHECK(text.find("vol_approx,1,\"box:0,1\",100,") != std::string::npos);
  CHECK(text.find("vol_symdiff,1,") != std::string::npos);
  CHECK(text.find("unbiased=pass") != std::string::npos);

  // Determinism: identical config gives byte-identical output.
  ExperimentConfig c2 = c;
  c2.out_dir = temp_dir() + "/est2";
  cmd_estimate(c2);
  CHECK(slurp(c.out_dir + "/estimate.csv") == slurp(c2.out_dir + "/estimate.csv"));
}

TEST_CASE("scan command writes stats, fit, and chart") {
  ExperimentConfig c;
  c.dim = 1;
  c.body_spec = "box:0,1";
  c.lambdas = {50.0, 100.0, 200.0};
  c.replicates = 400;
  c.exact = true;
  c.seed = 7;
  c.out_dir = temp_dir() + "/scan";
  int code = cmd_scan(c);
  CHECK((code == 0 || code == 2));
  CHECK(slurp(c.out_dir + "/scan_stats.csv").find("vol_symdiff") != std::string::npos);
  std::string fit = slurp(c.out_dir + "/scan_fit.csv");
  CHECK(fit.find("vol_approx,") != std::string::npos);
  std::string svg = slurp(c.out_dir + "/scan_variance.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("reference slope") != std::string::npos);
}

TEST_CASE("dump command round-trips points") {
  ExperimentConfig c;
  c.dim = 2;
  c.body_spec = "ball:1";
  c.lambdas = {30.0};
  c.seed = 12;
  c.out_dir = temp_dir() + "/dump";
  CHECK(cmd_dump(c) == 0);
  std::ifstream in(c.out_dir + "/points.csv");
  std::string line;
  std::getline(in, line);  // header
  CHECK(line.find("# command=dump") == 0);
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows > 0);
  std::string cells = slurp(c.out_dir + "/cells.csv");
  CHECK(cells.find("nucleus_x,nucleus_y,vertex_count") != std::string::npos);
}
