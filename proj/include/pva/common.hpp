#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace pva {

// Absolute tolerance for degeneracy detection in geometric predicates.
// Never used to change a mathematical definition, only to detect ties.
inline constexpr double kDegenerateTol = 1e-12;

/// Raised when an operation needs at least one point and the realization is empty.
class NoPointsError : public std::runtime_error {
 public:
  NoPointsError() : std::runtime_error("point configuration is empty") {}
  explicit NoPointsError(const std::string& what) : std::runtime_error(what) {}
};

/// Volume of the unit ball in R^d.
inline double unit_ball_volume(int dim) {
  return std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim + 1.0);
}

/// Surface measure of the sphere of radius r in R^d (2, 2*pi*r, 4*pi*r^2, ...).
inline double sphere_surface(int dim, double r) {
  return dim * unit_ball_volume(dim) * std::pow(r, dim - 1);
}

// ---------------------------------------------------------------------------
// Seeding. A 64-bit master seed is split into independent streams with
// splitmix64, so replicate i's stream depends only on (master, i) and
// parallel execution order cannot change any result.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derived stream seed for substream `index` of `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Two-level derivation (replicate, subreplicate).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(master, a), b);
}

// ---------------------------------------------------------------------------
// Parallel replicate execution. Each index is processed exactly once; workers
// write to disjoint slots, so results are independent of thread count and
// completion order. Thread count: explicit > PVAPPROX_THREADS > hardware.
// ---------------------------------------------------------------------------

int default_thread_count();
void parallel_for(long n, const std::function<void(long)>& body, int threads = 0);

}  // namespace pva
