#pragma once

#include <Eigen/Core>

namespace rbffd {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

namespace detail {

/// x^e for integer e >= 0 by repeated multiplication, exact for integer bases.
template <typename Scalar>
Scalar ipow(Scalar x, int e) {
  Scalar r(1);
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace detail

}  // namespace rbffd
