#pragma once

#include <Eigen/Core>
#include <vector>

#include "rbffd/types.hpp"

namespace rbffd {

/// Static k-d tree over a fixed point set (one column per point). Query
/// results match a brute-force scan exactly, with ties broken by point index.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(Eigen::MatrixXd points);

  Index size() const { return pts_.cols(); }
  int dim() const { return static_cast<int>(pts_.rows()); }
  const Eigen::MatrixXd& points() const { return pts_; }

  /// Indices of the k nearest points, ordered by (distance, index).
  std::vector<Index> knn(const Eigen::Ref<const Eigen::VectorXd>& query, Index k) const;

  /// Indices of all points within `radius` (inclusive), ordered by (distance, index).
  std::vector<Index> within(const Eigen::Ref<const Eigen::VectorXd>& query, double radius) const;

 private:
  struct Node {
    Index begin = 0, end = 0;  // range in perm_
    int axis = -1;             // -1 marks a leaf
    double split = 0;
    Index left = -1, right = -1;
  };

  Index build(Index begin, Index end);

  static constexpr Index kLeafSize = 12;

  Eigen::MatrixXd pts_;
  std::vector<Index> perm_;
  std::vector<Node> nodes_;
  Index root_ = -1;
};

}  // namespace rbffd
