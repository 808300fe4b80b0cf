#include "rbffd/problems.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rbffd/types.hpp"

namespace rbffd {

ManufacturedPoisson::ManufacturedPoisson(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("ManufacturedPoisson: dimension must be >= 1");
  hilbert_.resize(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) hilbert_(i, j) = 1.0 / (i + j + 1);
}

void ManufacturedPoisson::parts(const Eigen::Ref<const Eigen::VectorXd>& x, double& e, double& g,
                                Eigen::VectorXd& hx) const {
  if (x.size() != dim_) throw std::invalid_argument("ManufacturedPoisson: dimension mismatch");
  double sum = 0;
  for (int i = 0; i < dim_; ++i) sum += detail::ipow(x[i], 2 + i + 1);  // exponent 3, 4, ...
  e = std::exp(sum);
  hx = hilbert_ * x;
  g = 1 + x.dot(hx);
  if (g <= 0) throw std::domain_error("ManufacturedPoisson: quadratic form is not positive here");
}

double ManufacturedPoisson::value(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double e, g;
  Eigen::VectorXd hx;
  parts(x, e, g, hx);
  return e / g;
}

Eigen::VectorXd ManufacturedPoisson::gradient(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double e, g;
  Eigen::VectorXd hx;
  parts(x, e, g, hx);
  Eigen::VectorXd s(dim_);
  for (int i = 0; i < dim_; ++i) {
    const int a = 2 + i + 1;
    s[i] = a * detail::ipow(x[i], a - 1);
  }
  return (e / g) * (s - (2 / g) * hx);
}

double ManufacturedPoisson::laplacian(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double e, g;
  Eigen::VectorXd hx;
  parts(x, e, g, hx);
  Eigen::VectorXd s(dim_);
  double t = 0;
  for (int i = 0; i < dim_; ++i) {
    const int a = 2 + i + 1;
    s[i] = a * detail::ipow(x[i], a - 1);
    t += a * (a - 1) * detail::ipow(x[i], a - 2);
  }
  const double g2 = g * g;
  return 8 * e / (g2 * g) * hx.squaredNorm() -
         2 * e / g2 * (2 * hx.dot(s) + hilbert_.trace()) +
         e / g * (t + s.squaredNorm());
}

NodeRole classify_boundary(const BoundaryPoint& point, const BoundaryRule& rule) {
  if (point.position.size() < 1)
    throw std::invalid_argument("classify_boundary: empty boundary point");
  if (std::find(rule.dirichlet_owners.begin(), rule.dirichlet_owners.end(), point.owner) !=
      rule.dirichlet_owners.end())
    return NodeRole::Dirichlet;
  return point.position[0] < rule.dirichlet_below ? NodeRole::Dirichlet : NodeRole::Neumann;
}

ErrorReport error_norms(const Eigen::Ref<const Eigen::VectorXd>& numeric,
                        const Eigen::Ref<const Eigen::VectorXd>& exact) {
  if (numeric.size() != exact.size())
    throw std::invalid_argument("error_norms: vector sizes differ");
  const Index n = numeric.size();
  if (n == 0) throw std::invalid_argument("error_norms: empty vectors");

  const Eigen::VectorXd diff = numeric - exact;
  const double ref1 = exact.lpNorm<1>();
  const double ref2 = exact.norm();
  const double ref_inf = exact.lpNorm<Eigen::Infinity>();
  if (ref_inf == 0)
    throw std::invalid_argument("error_norms: exact field is identically zero, relative norms undefined");

  ErrorReport r;
  r.n = n;
  r.e1 = diff.lpNorm<1>() / ref1;
  r.e2 = diff.norm() / ref2;
  r.e_inf = diff.lpNorm<Eigen::Infinity>() / ref_inf;
  return r;
}

int recommend_order(double accuracy_class, int dim) {
  if (!(accuracy_class > 0)) throw std::invalid_argument("recommend_order: accuracy class must be positive");
  if (dim < 1) throw std::invalid_argument("recommend_order: dimension must be >= 1");
  const double m = 1.25 * accuracy_class + 0.8 * dim - 2.0;
  const long long even = llround(m / 2.0) * 2;
  return static_cast<int>(std::max(2ll, even));
}

}  // namespace rbffd
