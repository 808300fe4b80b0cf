#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "rbffd/types.hpp"

namespace rbffd {

/// Closed ball given by center and radius.
struct Ball {
  Eigen::VectorXd center;
  double radius = 0;

  Ball(Eigen::VectorXd c, double r);
};

/// A point on the domain boundary together with its outward unit normal and
/// the index (into CsgDomain::ball) of the sphere it lies on.
struct BoundaryPoint {
  Eigen::VectorXd position;
  Eigen::VectorXd normal;
  Index owner = -1;
};

/// Points within this absolute distance of a sphere are classified as lying
/// on it for interior membership purposes.
inline constexpr double kSurfaceBand = 1e-12;

/// Implicit domain: (union of positive balls) minus (union of negative
/// balls). Immutable after construction; all queries are const and safe to
/// call concurrently. Construction probes the bounding box with a fixed RNG
/// and rejects domains in which no interior point can be found.
class CsgDomain {
 public:
  CsgDomain(std::vector<Ball> positive, std::vector<Ball> negative);

  int dim() const { return dim_; }
  const std::vector<Ball>& positive() const { return positive_; }
  const std::vector<Ball>& negative() const { return negative_; }

  /// Balls in global order: positives first, then negatives.
  Index ball_count() const { return static_cast<Index>(positive_.size() + negative_.size()); }
  const Ball& ball(Index i) const;
  bool is_negative(Index i) const;

  /// Strict interior test with a kSurfaceBand-wide exclusion zone around
  /// every sphere that contributes boundary there.
  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// True when p, assumed to lie on the surface of ball(i), belongs to the
  /// domain boundary rather than being swallowed by another ball.
  bool on_boundary_of(Index i, const Eigen::Ref<const Eigen::VectorXd>& p) const;

  /// Outward unit normal at a boundary point; throws when p is not on the
  /// boundary within a 1e-7 relative surface tolerance.
  Eigen::VectorXd outward_normal(const Eigen::Ref<const Eigen::VectorXd>& p) const;

  /// Axis-aligned box enclosing all positive balls.
  void bounding_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const;

 private:
  int dim_ = 0;
  std::vector<Ball> positive_;
  std::vector<Ball> negative_;
};

/// Covers the domain boundary with points spaced approximately h apart (no
/// two closer than h, no statistical gap wider than about 2h), each carrying
/// its outward normal. In 1D the boundary is the finite set of interval
/// endpoints and h only validates feature separation.
std::vector<BoundaryPoint> discretize_boundary(const CsgDomain& domain, double h,
                                               std::uint64_t seed = 0);

}  // namespace rbffd
