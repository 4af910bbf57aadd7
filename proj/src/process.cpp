#include "pva/process.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "pva/common.hpp"

namespace pva {

double buffer_radius(double lambda, int dim, int k) {
  if (k < 2) throw std::invalid_argument("buffer exponent k must be >= 2");
  if (!(lambda > 1.0))
    throw std::invalid_argument(
        "intensity too small for log-based buffer; supply explicit rho");
  return 4.0 * std::sqrt(static_cast<double>(dim)) *
         std::pow(k * std::log(lambda) / lambda, 1.0 / dim);
}

double radius_tail_bound(double lambda, int dim, double circumradius, double r) {
  double slack = r - std::sqrt(static_cast<double>(dim)) - circumradius;
  if (slack <= 0) return 1.0;
  double bound = std::pow(2.0, dim) * std::pow(r, dim) *
                 std::exp(-lambda * unit_ball_volume(dim) * std::pow(slack, dim));
  return std::min(bound, 1.0);
}

PointConfig::PointConfig(std::vector<double> coords, Window window, double intensity,
                         std::uint64_t seed)
    : coords_(std::move(coords)),
      window_(window),
      intensity_(intensity),
      seed_(seed),
      n_(static_cast<int>(coords_.size()) / window.dim()),
      index_(coords_, window.dim()) {}

Point PointConfig::point(int i) const {
  Point p = Point::zero(dim());
  for (int j = 0; j < dim(); ++j) p[j] = coords_[i * dim() + j];
  return p;
}

PointConfig sample_poisson(double lambda, const Window& window, std::uint64_t seed,
                           double max_expected_points) {
  if (!(lambda > 0)) throw std::invalid_argument("intensity must be positive");
  double mean = lambda * window.volume();
  if (mean > max_expected_points)
    throw std::invalid_argument("expected point count exceeds the configured cap");
  std::mt19937_64 rng(splitmix64(seed));
  std::poisson_distribution<long> count_dist(mean);
  long n = count_dist(rng);
  const int d = window.dim();
  std::vector<double> coords(static_cast<size_t>(n) * d);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (long i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j)
      coords[i * d + j] = window.lo[j] + window.side(j) * unif(rng);
  return PointConfig(std::move(coords), window, lambda, seed);
}

std::optional<Neighbor> nearest(const PointConfig& config, const Point& z) {
  if (config.empty()) return std::nullopt;
  double q[3] = {0, 0, 0};
  for (int j = 0; j < config.dim(); ++j) q[j] = z[j];
  KdTree::Hit hit = config.index().nearest(q);
  return Neighbor{hit.index, config.point(hit.index), std::sqrt(hit.dist2)};
}

std::optional<std::pair<Neighbor, Neighbor>> nearest_two(const PointConfig& config,
                                                         const Point& z) {
  if (config.empty()) return std::nullopt;
  double q[3] = {0, 0, 0};
  for (int j = 0; j < config.dim(); ++j) q[j] = z[j];
  KdTree::Hit h1, h2;
  config.index().nearest_two(q, h1, h2);
  Neighbor first{h1.index, config.point(h1.index), std::sqrt(h1.dist2)};
  Neighbor second{-1, Point::zero(config.dim()), 0};
  if (h2.index >= 0) second = Neighbor{h2.index, config.point(h2.index), std::sqrt(h2.dist2)};
  return std::make_pair(first, second);
}

bool certify(const PointConfig& config, const Point& z) {
  auto nn = nearest(config, z);
  if (!nn) throw NoPointsError();
  return config.window().contains_ball(z, nn->distance);
}

}  // namespace pva
