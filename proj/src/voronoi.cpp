#include "pva/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pva/common.hpp"

namespace pva {

namespace {

bool contains_coord(const ConvexBody& K, const double* c, int dim) {
  Point p = Point::zero(dim);
  for (int j = 0; j < dim; ++j) p[j] = c[j];
  return K.contains(p);
}

}  // namespace

Classification classify(const PointConfig& config, const ConvexBody& K, const Point& z) {
  auto nn = nearest(config, z);
  if (!nn) throw NoPointsError("cannot classify against an empty realization");
  bool in_approx = K.contains(nn->point);
  bool certified = !in_approx || config.window().contains_ball(z, nn->distance);
  return Classification{in_approx, certified};
}

// ---------------------------------------------------------------------------
// Monte Carlo volumes. Samples are drawn in fixed-size chunks, each chunk
// with a seed derived from (seed, chunk index), and integer tallies are
// reduced in chunk order, so the result is bitwise independent of threading.
// ---------------------------------------------------------------------------

namespace {

constexpr long kChunk = 8192;

struct ChunkTally {
  long in_approx = 0;
  long symdiff = 0;
  long uncertified = 0;
};

struct LooTally {
  std::vector<double> flip_approx;   // per-nucleus signed flip counts
  std::vector<double> flip_symdiff;
};

template <bool WithLoo>
void mc_volume_scan(const PointConfig& config, const ConvexBody& K, long n_samples,
                    std::uint64_t seed, int threads, std::vector<ChunkTally>& tallies,
                    std::vector<LooTally>* loo) {
  const int d = config.dim();
  const Window& W = config.window();
  const long chunks = (n_samples + kChunk - 1) / kChunk;
  tallies.assign(chunks, ChunkTally{});
  int nt = threads >= 1 ? threads : default_thread_count();
  if (loo) loo->assign(nt, LooTally{});
  std::vector<std::pair<long, long>> ranges;  // per-thread chunk ranges
  long per = (chunks + nt - 1) / nt;
  for (int t = 0; t < nt; ++t) {
    long lo = t * per, hi = std::min(chunks, lo + per);
    if (lo < hi) ranges.emplace_back(lo, hi);
  }
  parallel_for(
      static_cast<long>(ranges.size()),
      [&](long ri) {
        auto [clo, chi] = ranges[ri];
        LooTally* lt = nullptr;
        if (loo) {
          lt = &(*loo)[ri];
          lt->flip_approx.assign(config.size(), 0.0);
          lt->flip_symdiff.assign(config.size(), 0.0);
        }
        double q[3];
        for (long c = clo; c < chi; ++c) {
          std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
          std::uniform_real_distribution<double> unif(0.0, 1.0);
          long lo = c * kChunk, hi = std::min(n_samples, lo + kChunk);
          ChunkTally tally;
          for (long s = lo; s < hi; ++s) {
            Point z = Point::zero(d);
            for (int j = 0; j < d; ++j) {
              q[j] = W.lo[j] + W.side(j) * unif(rng);
              z[j] = q[j];
            }
            bool zin = K.contains(z);
            if constexpr (WithLoo) {
              KdTree::Hit h1, h2;
              config.index().nearest_two(q, h1, h2);
              bool in1 = contains_coord(K, config.coord(h1.index), d);
              if (in1) ++tally.in_approx;
              if (in1 != zin) ++tally.symdiff;
              bool certified = !in1 || W.contains_ball(z, std::sqrt(h1.dist2));
              if (!certified) ++tally.uncertified;
              if (h2.index >= 0) {
                bool in2 = contains_coord(K, config.coord(h2.index), d);
                if (in2 != in1) {
                  double da = (in2 ? 1.0 : 0.0) - (in1 ? 1.0 : 0.0);
                  lt->flip_approx[h1.index] += da;
                  double ds = ((in2 != zin) ? 1.0 : 0.0) - ((in1 != zin) ? 1.0 : 0.0);
                  lt->flip_symdiff[h1.index] += ds;
                }
              }
            } else {
              KdTree::Hit h1 = config.index().nearest(q);
              bool in1 = contains_coord(K, config.coord(h1.index), d);
              if (in1) ++tally.in_approx;
              if (in1 != zin) ++tally.symdiff;
              bool certified = !in1 || W.contains_ball(z, std::sqrt(h1.dist2));
              if (!certified) ++tally.uncertified;
            }
          }
          tallies[c] = tally;
        }
      },
      static_cast<int>(ranges.size()));
}

VolumeEstimate reduce_tallies(const std::vector<ChunkTally>& tallies, double window_volume,
                              long n_samples) {
  long in_approx = 0, symdiff = 0, uncertified = 0;
  for (const auto& t : tallies) {
    in_approx += t.in_approx;
    symdiff += t.symdiff;
    uncertified += t.uncertified;
  }
  VolumeEstimate est;
  est.n_samples = n_samples;
  double n = static_cast<double>(n_samples);
  double pa = in_approx / n, ps = symdiff / n;
  est.vol_approx = window_volume * pa;
  est.vol_symdiff = window_volume * ps;
  est.std_error_approx = window_volume * std::sqrt(pa * (1 - pa) / n);
  est.std_error_symdiff = window_volume * std::sqrt(ps * (1 - ps) / n);
  est.uncertified_fraction = uncertified / n;
  return est;
}

}  // namespace

VolumeEstimate mc_volumes(const PointConfig& config, const ConvexBody& K, long n_samples,
                          std::uint64_t seed, int threads) {
  if (config.empty()) throw NoPointsError();
  if (n_samples < 1) throw std::invalid_argument("sample count must be >= 1");
  std::vector<ChunkTally> tallies;
  mc_volume_scan<false>(config, K, n_samples, seed, threads, tallies, nullptr);
  return reduce_tallies(tallies, config.window().volume(), n_samples);
}

VolumeJackknife mc_volumes_jackknife(const PointConfig& config, const ConvexBody& K,
                                     long n_samples, std::uint64_t seed, int threads) {
  if (config.empty()) throw NoPointsError();
  if (n_samples < 1) throw std::invalid_argument("sample count must be >= 1");
  std::vector<ChunkTally> tallies;
  std::vector<LooTally> loo;
  mc_volume_scan<true>(config, K, n_samples, seed, threads, tallies, &loo);
  VolumeJackknife out;
  out.estimate = reduce_tallies(tallies, config.window().volume(), n_samples);
  const double scale = config.window().volume() / static_cast<double>(n_samples);
  for (int i = 0; i < config.size(); ++i) {
    double fa = 0, fs = 0;
    for (const auto& lt : loo) {
      if (!lt.flip_approx.empty()) {
        fa += lt.flip_approx[i];
        fs += lt.flip_symdiff[i];
      }
    }
    out.loo_sum_approx += (scale * fa) * (scale * fa);
    out.loo_sum_symdiff += (scale * fs) * (scale * fs);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exact evaluation, d = 1: sort nuclei, cells are midpoint intervals.
// ---------------------------------------------------------------------------

ExactVolumes exact_1d(const PointConfig& config, const ConvexBody& K) {
  if (config.dim() != 1 || K.dim() != 1)
    throw std::invalid_argument("exact_1d requires a 1-D configuration and body");
  if (config.empty()) throw NoPointsError();
  const Window& W = config.window();
  // K as an interval [k0, k1].
  double k0, k1;
  if (const Ball* b = std::get_if<Ball>(&K.shape())) {
    k0 = b->center[0] - b->radius;
    k1 = b->center[0] + b->radius;
  } else if (const Box* bx = std::get_if<Box>(&K.shape())) {
    k0 = bx->lo[0];
    k1 = bx->hi[0];
  } else {
    throw std::invalid_argument("1-D body must be an interval");
  }
  std::vector<double> x(config.coords());
  std::sort(x.begin(), x.end());
  const int n = static_cast<int>(x.size());
  ExactVolumes out;
  double inter_len = 0;  // length of v_X(K) ∩ K
  for (int i = 0; i < n; ++i) {
    if (x[i] < k0 || x[i] > k1) continue;
    double lo = i == 0 ? W.lo[0] : 0.5 * (x[i - 1] + x[i]);
    double hi = i + 1 == n ? W.hi[0] : 0.5 * (x[i] + x[i + 1]);
    lo = std::max(lo, W.lo[0]);
    hi = std::min(hi, W.hi[0]);
    if (hi <= lo) continue;
    out.vol_approx += hi - lo;
    inter_len += std::max(0.0, std::min(hi, k1) - std::max(lo, k0));
    // Certificate at the cell endpoints: their nearest-distance balls in W.
    bool cert = W.contains_ball(Point(lo), std::abs(lo - x[i])) &&
                W.contains_ball(Point(hi), std::abs(hi - x[i]));
    if (!cert) {
      out.all_certified = false;
      out.uncertified_area += hi - lo;
      ++out.uncertified_cells;
    }
  }
  out.vol_symdiff = (out.vol_approx - inter_len) + ((k1 - k0) - inter_len);
  return out;
}

// ---------------------------------------------------------------------------
// Exact evaluation, d = 2: clip the window by the bisector halfplanes of the
// Delaunay neighbors of each nucleus.
// ---------------------------------------------------------------------------

ExactVolumes exact_cells_2d(const PointConfig& config, const ConvexBody& K,
                            std::vector<VoronoiCell2D>* cells_out) {
  if (config.dim() != 2 || K.dim() != 2)
    throw std::invalid_argument("exact_cells_2d requires a 2-D configuration and body");
  if (config.empty()) throw NoPointsError();
  const Window& W = config.window();
  const int n = config.size();
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = {config.coord(i)[0], config.coord(i)[1]};

  Delaunay2D del(pts);
  std::vector<std::vector<int>> adj;
  if (del.degenerate_chain()) {
    // Too few or collinear nuclei: clip against every other site.
    adj.assign(n, {});
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != i) adj[i].push_back(j);
  } else {
    adj = del.neighbor_lists();
  }

  const std::vector<Vec2> window_rect = window_polygon(W);
  ExactVolumes out;
  double inter_area = 0;
  if (cells_out) cells_out->clear();

  for (int i = 0; i < n; ++i) {
    Vec2 xi = pts[i];
    bool in_K = contains_coord(K, config.coord(i), 2);
    if (!in_K && !cells_out) continue;  // only nuclei in K contribute volumes
    std::vector<Vec2> cell = window_rect;
    for (int j : adj[i]) {
      Vec2 nvec = pts[j] - xi;
      Vec2 mid = (pts[j] + xi) * 0.5;
      cell = clip_halfplane(cell, nvec, nvec.dot(mid));
      if (cell.empty()) break;
    }
    bool cert = true;
    for (const auto& v : cell) {
      double r = (v - xi).norm();
      if (!W.contains_ball(Point(v.x, v.y), r)) {
        cert = false;
        break;
      }
    }
    if (cells_out) cells_out->push_back(VoronoiCell2D{i, cell, cert});
    if (!in_K) continue;
    double area = polygon_area(cell);
    out.vol_approx += area;
    inter_area += polygon_body_area(cell, K);
    if (!cert) {
      out.all_certified = false;
      out.uncertified_area += area;
      ++out.uncertified_cells;
    }
  }
  out.vol_symdiff = (out.vol_approx - inter_area) + (K.volume() - inter_area);
  return out;
}

// ---------------------------------------------------------------------------
// Delaunay edge statistic.
// ---------------------------------------------------------------------------

EdgeFunctionalSample edge_functional(const PointConfig& config, const ConvexBody& K,
                                     const EdgeWeight& weight) {
  if (config.dim() != 2 || K.dim() != 2)
    throw std::invalid_argument("edge_functional requires a 2-D configuration and body");
  if (config.empty()) throw NoPointsError();
  const int n = config.size();
  std::vector<Vec2> pts(n);
  for (int i = 0; i < n; ++i) pts[i] = {config.coord(i)[0], config.coord(i)[1]};
  Delaunay2D del(pts);

  EdgeFunctionalSample out;
  out.degenerate = del.degenerate_chain();

  // Per-nucleus weights.
  std::vector<double> w;
  switch (weight.kind) {
    case EdgeWeight::Kind::ConstantOne:
      w.assign(n, 1.0);
      break;
    case EdgeWeight::Kind::CellVolumeSquared: {
      std::vector<VoronoiCell2D> cells;
      exact_cells_2d(config, K, &cells);
      w.assign(n, 0.0);
      for (const auto& c : cells) w[c.nucleus] = polygon_area(c.polygon) * polygon_area(c.polygon);
      break;
    }
    case EdgeWeight::Kind::UserScalar:
      w.resize(n);
      for (int i = 0; i < n; ++i) w[i] = weight.fn(config, i);
      break;
  }

  std::vector<bool> in_K(n);
  for (int i = 0; i < n; ++i) in_K[i] = contains_coord(K, config.coord(i), 2);

  const Window& W = config.window();
  auto disk_in_window = [&](const Delaunay2D::Disk& d) {
    return W.contains_ball(Point(d.center.x, d.center.y), std::sqrt(d.radius2));
  };

  out.total_edges = static_cast<long>(del.edges().size());
  for (const auto& e : del.edges()) {
    bool meets = in_K[e.a] || in_K[e.b] ||
                 K.intersects(Segment(config.point(e.a), config.point(e.b)));
    int nk = 2 * (meets ? 1 : 0) - (in_K[e.a] ? 1 : 0) - (in_K[e.b] ? 1 : 0);
    if (nk == 0) continue;
    // Witness that this edge survives any extension outside the window:
    // an adjacent circumdisk (empty by construction) contained in W.
    bool certified = false;
    if (!out.degenerate) {
      if (e.tri1 >= 0 && disk_in_window(del.circumdisk(e.tri1))) certified = true;
      if (!certified && e.tri2 >= 0 && disk_in_window(del.circumdisk(e.tri2))) certified = true;
    }
    if (!certified) {
      ++out.excluded_edges;
      continue;
    }
    out.value += (w[e.a] + w[e.b]) * nk;
    ++out.contributing_edges;
  }
  return out;
}

}  // namespace pva
