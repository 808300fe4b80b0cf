#pragma once

#include <Eigen/Core>
#include <vector>

#include "rbffd/geometry.hpp"
#include "rbffd/nodegen.hpp"
#include "rbffd/types.hpp"

namespace rbffd {

/// Smooth closed-form field used to manufacture Poisson benchmark problems in
/// any dimension: value(x) = exp(sum_i x_i^(2+i)) / (1 + x' H x) with H the
/// d x d Hilbert matrix. The Dirichlet data, Neumann data, and the equation
/// right-hand side are all evaluated from the same expression, so the
/// discrete solution can be compared against it directly.
class ManufacturedPoisson {
 public:
  explicit ManufacturedPoisson(int dim);

  int dim() const { return dim_; }
  const Eigen::MatrixXd& hilbert() const { return hilbert_; }

  double value(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  Eigen::VectorXd gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const;
  double laplacian(const Eigen::Ref<const Eigen::VectorXd>& x) const;

 private:
  // exponent sum E, quadratic form g = 1 + x'Hx (throws when g <= 0), and Hx
  void parts(const Eigen::Ref<const Eigen::VectorXd>& x, double& e, double& g,
             Eigen::VectorXd& hx) const;

  int dim_;
  Eigen::MatrixXd hilbert_;
};

/// Splits boundary points into Dirichlet and Neumann: Dirichlet where the
/// first coordinate is below `dirichlet_below` or where the owning ball is
/// listed in `dirichlet_owners`, Neumann elsewhere.
struct BoundaryRule {
  double dirichlet_below = 0.5;
  std::vector<Index> dirichlet_owners;
};

NodeRole classify_boundary(const BoundaryPoint& point, const BoundaryRule& rule);

/// Relative error norms of a numeric field against the exact one: mean
/// absolute, root mean square, and maximum, each normalized by the same
/// norm of the exact field.
struct ErrorReport {
  double e1 = 0;
  double e2 = 0;
  double e_inf = 0;
  Index n = 0;
};

ErrorReport error_norms(const Eigen::Ref<const Eigen::VectorXd>& numeric,
                        const Eigen::Ref<const Eigen::VectorXd>& exact);

/// Augmentation degree suggested for a target accuracy class k (roughly
/// e_inf ~ 10^-k) in d dimensions: the positive even integer nearest to
/// 1.25 k + 0.8 d - 2, never below 2.
int recommend_order(double accuracy_class, int dim);

}  // namespace rbffd
