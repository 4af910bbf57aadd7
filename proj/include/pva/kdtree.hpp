#pragma once

#include <vector>

namespace pva {

/// Immutable k-d tree over n points in R^dim for exact nearest-neighbor
/// queries. Ties in distance are broken toward the lexicographically
/// smallest point so queries are fully deterministic.
class KdTree {
 public:
  KdTree() = default;
  /// coords: n*dim doubles, point i at coords[i*dim .. i*dim+dim).
  KdTree(const std::vector<double>& coords, int dim);

  struct Hit {
    int index = -1;
    double dist2 = 0;
  };

  bool empty() const { return n_ == 0; }
  int size() const { return n_; }

  /// Exact nearest neighbor of q (q has dim_ components).
  Hit nearest(const double* q) const;
  /// Exact nearest and second nearest (requires >= 2 points).
  void nearest_two(const double* q, Hit& first, Hit& second) const;

 private:
  struct Node {
    double split = 0;
    int axis = -1;       // -1 marks a leaf
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into order_
  };

  int build(int begin, int end);
  bool lex_less(int a, int b) const;

  template <int K>
  void search(int node, const double* q, Hit* best) const;

  int dim_ = 0;
  int n_ = 0;
  std::vector<double> pts_;    // reordered coordinates, contiguous per leaf
  std::vector<int> order_;     // pts_ slot -> original index
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace pva
