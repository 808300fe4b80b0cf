#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <stdexcept>

#include "rbffd/operators.hpp"
#include "rbffd/types.hpp"

namespace rbffd {

/// Number of d-variate monomials of total degree <= m, i.e. C(m+d, d).
/// m = -1 denotes the empty basis (no augmentation).
inline Index monomial_count(int m, int d) {
  if (d < 1) throw std::invalid_argument("monomial_count: dimension must be >= 1");
  if (m < -1) throw std::invalid_argument("monomial_count: degree must be >= -1");
  if (m == -1) return 0;
  long long c = 1;
  for (int i = 1; i <= d; ++i) c = c * (m + i) / i;  // exact at every step
  return static_cast<Index>(c);
}

/// Stencil size paired with augmentation degree m in d dimensions: twice the
/// monomial count, floored at the 2d+1 classical FD stencil.
inline Index stencil_size(int m, int d) {
  return std::max<Index>(2 * monomial_count(m, d), 2 * d + 1);
}

/// Multivariate monomials x^a with |a| <= m in graded order: grade ascending,
/// leading exponent descending within a grade. The constant term comes first.
class MonomialBasis {
 public:
  MonomialBasis(int dim, int degree) : dim_(dim), degree_(degree) {
    const Index s = monomial_count(degree, dim);  // validates arguments
    exponents_.resize(dim_, s);
    Index col = 0;
    Eigen::VectorXi alpha = Eigen::VectorXi::Zero(dim_);
    for (int g = 0; g <= degree; ++g) emit(g, 0, alpha, col);
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  Index size() const { return exponents_.cols(); }

  /// Exponent vectors, one column per basis monomial.
  const Eigen::MatrixXi& exponents() const { return exponents_; }

  template <typename Derived>
  typename Derived::Scalar value(Index j, const Eigen::MatrixBase<Derived>& x) const {
    using Scalar = typename Derived::Scalar;
    check(j, x.size());
    Scalar v(1);
    for (int i = 0; i < dim_; ++i) v *= detail::ipow(Scalar(x[i]), exponents_(i, j));
    return v;
  }

  /// (L p_j)(x) for the supported operators.
  template <typename Derived>
  typename Derived::Scalar apply(const OperatorDescriptor& op, Index j,
                                 const Eigen::MatrixBase<Derived>& x) const {
    using Scalar = typename Derived::Scalar;
    check(j, x.size());
    if (op.kind == OperatorDescriptor::Kind::Laplacian) {
      Scalar acc(0);
      for (int i = 0; i < dim_; ++i) {
        const int e = exponents_(i, j);
        if (e < 2) continue;
        Scalar term = Scalar(e) * Scalar(e - 1) * detail::ipow(Scalar(x[i]), e - 2);
        for (int l = 0; l < dim_; ++l)
          if (l != i) term *= detail::ipow(Scalar(x[l]), exponents_(l, j));
        acc += term;
      }
      return acc;
    }
    if (op.axis >= dim_) throw std::invalid_argument("MonomialBasis::apply: axis out of range");
    const int e = exponents_(op.axis, j);
    if (e == 0) return Scalar(0);
    Scalar term = Scalar(e) * detail::ipow(Scalar(x[op.axis]), e - 1);
    for (int l = 0; l < dim_; ++l)
      if (l != op.axis) term *= detail::ipow(Scalar(x[l]), exponents_(l, j));
    return term;
  }

 private:
  void emit(int budget, int pos, Eigen::VectorXi& alpha, Index& col) {
    if (pos == dim_ - 1) {
      alpha[pos] = budget;
      exponents_.col(col++) = alpha;
      return;
    }
    for (int e = budget; e >= 0; --e) {
      alpha[pos] = e;
      emit(budget - e, pos + 1, alpha, col);
    }
    alpha[pos] = 0;
  }

  void check(Index j, Index xdim) const {
    if (j < 0 || j >= size()) throw std::out_of_range("MonomialBasis: index out of range");
    if (xdim != dim_) throw std::invalid_argument("MonomialBasis: point dimension mismatch");
  }

  int dim_;
  int degree_;
  Eigen::MatrixXi exponents_;
};

}  // namespace rbffd
