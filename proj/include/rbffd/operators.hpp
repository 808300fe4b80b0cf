#pragma once

#include <stdexcept>

namespace rbffd {

/// Differential operator evaluated at a stencil center: the Laplacian or a
/// first partial derivative along a coordinate axis.
struct OperatorDescriptor {
  enum class Kind { Laplacian, Partial };

  Kind kind = Kind::Laplacian;
  int axis = -1;  // 0-based axis for Partial, unused for Laplacian

  static OperatorDescriptor laplacian() { return {Kind::Laplacian, -1}; }

  static OperatorDescriptor partial(int axis) {
    if (axis < 0) throw std::invalid_argument("OperatorDescriptor::partial: axis must be >= 0");
    return {Kind::Partial, axis};
  }

  /// Differentiation order; weights scale as h^-order under stencil dilation.
  int order() const { return kind == Kind::Laplacian ? 2 : 1; }
};

}  // namespace rbffd
