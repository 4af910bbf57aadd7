#include "pva/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace pva {

namespace {
constexpr int kLeafSize = 8;
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

KdTree::KdTree(const std::vector<double>& coords, int dim) : dim_(dim) {
  n_ = static_cast<int>(coords.size()) / dim;
  if (n_ == 0) return;
  pts_ = coords;
  order_.resize(n_);
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * n_ / kLeafSize + 2);
  root_ = build(0, n_);
  // Reorder coordinates to match order_ for contiguous leaf scans.
  std::vector<double> re(coords.size());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < dim_; ++j) re[i * dim_ + j] = coords[order_[i] * dim_ + j];
  pts_ = std::move(re);
}

bool KdTree::lex_less(int a, int b) const {
  for (int j = 0; j < dim_; ++j) {
    double x = pts_[a * dim_ + j], y = pts_[b * dim_ + j];
    if (x < y) return true;
    if (x > y) return false;
  }
  return false;
}

int KdTree::build(int begin, int end) {
  Node node;
  if (end - begin <= kLeafSize) {
    node.begin = begin;
    node.end = end;
    nodes_.push_back(node);
    return static_cast<int>(nodes_.size()) - 1;
  }
  // Split on the axis with the largest spread.
  int axis = 0;
  double best_spread = -1;
  for (int j = 0; j < dim_; ++j) {
    double lo = kInf, hi = -kInf;
    for (int i = begin; i < end; ++i) {
      double v = pts_[order_[i] * dim_ + j];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      axis = j;
    }
  }
  int mid = (begin + end) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) { return pts_[a * dim_ + axis] < pts_[b * dim_ + axis]; });
  node.axis = axis;
  node.split = pts_[order_[mid] * dim_ + axis];
  int self = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  int l = build(begin, mid);
  int r = build(mid, end);
  nodes_[self].left = l;
  nodes_[self].right = r;
  return self;
}

template <int K>
void KdTree::search(int node_id, const double* q, Hit* best) const {
  const Node& node = nodes_[node_id];
  if (node.axis < 0) {
    for (int i = node.begin; i < node.end; ++i) {
      double d2 = 0;
      const double* p = &pts_[i * dim_];
      for (int j = 0; j < dim_; ++j) {
        double d = q[j] - p[j];
        d2 += d * d;
      }
      // Insert into the best-K list; equal distances prefer the
      // lexicographically smaller point.
      for (int k = 0; k < K; ++k) {
        bool better = d2 < best[k].dist2 ||
                      (d2 == best[k].dist2 && best[k].index >= 0 && lex_less(i, best[k].index));
        if (better) {
          for (int m = K - 1; m > k; --m) best[m] = best[m - 1];
          best[k] = Hit{i, d2};
          break;
        }
      }
    }
    return;
  }
  double delta = q[node.axis] - node.split;
  int near = delta <= 0 ? node.left : node.right;
  int far = delta <= 0 ? node.right : node.left;
  search<K>(near, q, best);
  if (delta * delta <= best[K - 1].dist2) search<K>(far, q, best);
}

KdTree::Hit KdTree::nearest(const double* q) const {
  Hit best{-1, kInf};
  if (n_ == 0) return best;
  search<1>(root_, q, &best);
  best.index = order_[best.index];
  return best;
}

void KdTree::nearest_two(const double* q, Hit& first, Hit& second) const {
  Hit best[2] = {{-1, kInf}, {-1, kInf}};
  search<2>(root_, q, best);
  first = best[0];
  second = best[1];
  if (first.index >= 0) first.index = order_[first.index];
  if (second.index >= 0) second.index = order_[second.index];
}

}  // namespace pva
