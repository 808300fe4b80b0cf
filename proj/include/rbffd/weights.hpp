#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "rbffd/monomials.hpp"
#include "rbffd/operators.hpp"
#include "rbffd/phs.hpp"
#include "rbffd/types.hpp"

namespace rbffd {

/// The augmented collocation matrix was singular to working precision,
/// typically because the stencil does not determine the monomial basis
/// (collinear or otherwise degenerate geometry).
class UnisolventFailure : public std::runtime_error {
 public:
  UnisolventFailure(const std::string& what, double rcond)
      : std::runtime_error(what), rcond_(rcond) {}
  double rcond() const { return rcond_; }

 private:
  double rcond_;
};

/// Reciprocal condition estimates at or below this are treated as singular.
inline constexpr double kUnisolventRcondFloor = 1e-14;

/// phi(|x_i - x_j|) collocation matrix; symmetric by construction.
template <typename Derived>
Matrix<typename Derived::Scalar> rbf_matrix(const PhsBasis& phs,
                                            const Eigen::MatrixBase<Derived>& pts) {
  using Scalar = typename Derived::Scalar;
  const Index n = pts.cols();
  Matrix<Scalar> a(n, n);
  for (Index j = 0; j < n; ++j) {
    a(j, j) = phs.value(Scalar(0));
    for (Index i = j + 1; i < n; ++i) {
      const Scalar v = phs.value((pts.col(i) - pts.col(j)).norm());
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

/// Monomial evaluation matrix, one row per point, one column per monomial.
template <typename Derived>
Matrix<typename Derived::Scalar> monomial_matrix(const MonomialBasis& mono,
                                                 const Eigen::MatrixBase<Derived>& pts) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> p(pts.cols(), mono.size());
  for (Index i = 0; i < pts.cols(); ++i)
    for (Index j = 0; j < mono.size(); ++j) p(i, j) = mono.value(j, pts.col(i));
  return p;
}

template <typename Scalar>
struct StencilWeights {
  Vector<Scalar> weights;      // one per stencil node
  Vector<Scalar> multipliers;  // Lagrange multipliers in scaled coordinates, diagnostic only
};

/// Factored augmented collocation system for one stencil. The stencil is
/// translated so its first point (the center) sits at the origin and scaled
/// by the stencil radius before factorization; weight solves for any number
/// of operators then reuse the single LU decomposition.
template <typename Scalar>
class StencilSystem {
 public:
  template <typename Derived>
  StencilSystem(const Eigen::MatrixBase<Derived>& stencil, const PhsBasis& phs,
                const MonomialBasis& mono)
      : phs_(phs), mono_(&mono) {
    static_assert(std::is_same_v<typename Derived::Scalar, Scalar>);
    const Index n = stencil.cols();
    const Index d = stencil.rows();
    const Index s = mono.size();
    if (n < 1) throw std::invalid_argument("StencilSystem: empty stencil");
    if (mono.dim() != d) throw std::invalid_argument("StencilSystem: basis dimension mismatch");
    if (n < s)
      throw std::invalid_argument(
          "StencilSystem: stencil size " + std::to_string(n) +
          " is smaller than the monomial basis (" + std::to_string(s) + ")");

    local_ = stencil.colwise() - stencil.col(0);
    scale_ = std::sqrt(local_.colwise().squaredNorm().maxCoeff());
    if (scale_ <= Scalar(0)) scale_ = Scalar(1);
    local_ /= scale_;

    Matrix<Scalar> saddle = Matrix<Scalar>::Zero(n + s, n + s);
    saddle.topLeftCorner(n, n) = rbf_matrix(phs_, local_);
    if (s > 0) {
      const Matrix<Scalar> p = monomial_matrix(mono, local_);
      saddle.topRightCorner(n, s) = p;
      saddle.bottomLeftCorner(s, n) = p.transpose();
    }
    lu_.compute(saddle);
    rcond_ = static_cast<double>(lu_.rcond());
    if (!(rcond_ > kUnisolventRcondFloor))
      throw UnisolventFailure(
          "stencil is not unisolvent: collocation matrix rcond " + std::to_string(rcond_),
          rcond_);
  }

  StencilWeights<Scalar> solve(const OperatorDescriptor& op) const {
    const Index n = local_.cols();
    const Index s = mono_->size();
    Vector<Scalar> rhs(n + s);
    const Vector<Scalar> origin = Vector<Scalar>::Zero(local_.rows());
    for (Index j = 0; j < n; ++j) rhs[j] = phs_apply(phs_, op, origin, local_.col(j));
    for (Index j = 0; j < s; ++j) rhs[n + j] = mono_->apply(op, j, origin);
    const Vector<Scalar> sol = lu_.solve(rhs);
    StencilWeights<Scalar> out;
    out.weights = sol.head(n) / detail::ipow(scale_, op.order());
    out.multipliers = sol.tail(s);
    return out;
  }

  double rcond() const { return rcond_; }
  Scalar scale() const { return scale_; }

 private:
  PhsBasis phs_;
  const MonomialBasis* mono_;
  Matrix<Scalar> local_;
  Scalar scale_;
  Eigen::PartialPivLU<Matrix<Scalar>> lu_;
  double rcond_;
};

/// Stencil weights for `op` at the stencil's first point. Columns of
/// `stencil` are the point positions, the first column being the center.
template <typename Derived>
StencilWeights<typename Derived::Scalar> compute_weights(
    const OperatorDescriptor& op, const Eigen::MatrixBase<Derived>& stencil,
    const PhsBasis& phs, const MonomialBasis& mono) {
  StencilSystem<typename Derived::Scalar> sys(stencil, phs, mono);
  return sys.solve(op);
}

}  // namespace rbffd
