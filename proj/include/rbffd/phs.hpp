#pragma once

#include <Eigen/Core>
#include <cmath>
#include <stdexcept>

#include "rbffd/operators.hpp"
#include "rbffd/types.hpp"

namespace rbffd {

/// Polyharmonic spline phi(r) = r^k for odd k, r^k log r for even k. There is
/// no shape parameter. Operator evaluations at r = 0 return the symbolic
/// limit, which is zero whenever k exceeds the operator order, so the
/// diagonal entries of collocation right-hand sides stay finite.
struct PhsBasis {
  int exponent = 3;

  explicit PhsBasis(int k = 3) : exponent(k) {
    if (k < 1) throw std::invalid_argument("PhsBasis: exponent must be >= 1");
  }

  template <typename Scalar>
  Scalar value(Scalar r) const {
    if (r <= Scalar(0)) return Scalar(0);
    if (exponent % 2 == 1) return detail::ipow(r, exponent);
    return detail::ipow(r, exponent) * std::log(r);
  }

  /// phi'(r)/r. Multiplying by (x_i - y_i) gives d/dx_i phi(|x - y|).
  template <typename Scalar>
  Scalar gradient_factor(Scalar r) const {
    if (r <= Scalar(0)) return Scalar(0);
    const Scalar p = pow_km2(r);
    if (exponent % 2 == 1) return Scalar(exponent) * p;
    return p * (Scalar(exponent) * std::log(r) + Scalar(1));
  }

  /// Laplacian of phi(|x - y|) in `dim` dimensions as a function of r.
  template <typename Scalar>
  Scalar laplacian(Scalar r, int dim) const {
    if (dim < 1) throw std::invalid_argument("PhsBasis::laplacian: dimension must be >= 1");
    if (r <= Scalar(0)) return Scalar(0);
    const Scalar k(exponent);
    const Scalar p = pow_km2(r);
    if (exponent % 2 == 1) return k * (k + Scalar(dim - 2)) * p;
    return p * (k * (k + Scalar(dim - 2)) * std::log(r) + Scalar(2 * exponent + dim - 2));
  }

 private:
  // r^(k-2) for r > 0; k = 1 yields 1/r.
  template <typename Scalar>
  Scalar pow_km2(Scalar r) const {
    if (exponent >= 2) return detail::ipow(r, exponent - 2);
    return Scalar(1) / r;
  }
};

/// (L phi(|x - node|)) evaluated at x = center.
template <typename DerivedC, typename DerivedN>
typename DerivedC::Scalar phs_apply(const PhsBasis& phs, const OperatorDescriptor& op,
                                    const Eigen::MatrixBase<DerivedC>& center,
                                    const Eigen::MatrixBase<DerivedN>& node) {
  using Scalar = typename DerivedC::Scalar;
  if (center.size() != node.size())
    throw std::invalid_argument("phs_apply: dimension mismatch");
  const Scalar r = (center - node).norm();
  if (op.kind == OperatorDescriptor::Kind::Laplacian)
    return phs.laplacian(r, static_cast<int>(center.size()));
  if (op.axis >= center.size())
    throw std::invalid_argument("phs_apply: axis out of range");
  return phs.gradient_factor(r) * (center[op.axis] - node[op.axis]);
}

}  // namespace rbffd
