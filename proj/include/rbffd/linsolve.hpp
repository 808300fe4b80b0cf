#pragma once

#include <string>

#include "rbffd/discretize.hpp"
#include "rbffd/types.hpp"

namespace rbffd {

enum class SolveStatus { Converged, NotConverged, Breakdown };

const char* to_string(SolveStatus status);

/// BiCGSTAB + incomplete-LU settings. The factory returns the drop tolerance
/// and fill factor tuned per spatial dimension; dimensions beyond 3 reuse
/// the 3D values.
struct IterativeSettings {
  double tolerance = 1e-15;
  int max_iterations = 500;
  double drop_tolerance = 1e-4;
  int fill_factor = 30;

  static IterativeSettings for_dimension(int dim);
};

/// Solver outcome. The residual is always recomputed from the system and the
/// returned solution, never taken from the solver's own accounting.
struct SolveReport {
  Eigen::VectorXd solution;
  double residual = 0;  // ||Ax - b|| / ||b|| (absolute when b = 0)
  int iterations = 0;
  double seconds = 0;
  std::string method;
  SolveStatus status = SolveStatus::Converged;
};

/// Sparse LU. Throws on a singular matrix; reports Converged only when the
/// recomputed relative residual is at most 1e-10.
SolveReport solve_direct(const SparseSystem& system);

/// BiCGSTAB preconditioned with incomplete LU. A zero right-hand side short
/// circuits to the zero solution. Non-convergence and preconditioner
/// breakdown are reported in the status, not thrown.
SolveReport solve_iterative(const SparseSystem& system, const IterativeSettings& settings = {});

/// ||Ax - b|| / ||b||, or the absolute residual when b = 0.
double relative_residual(const SparseSystem& system, const Eigen::Ref<const Eigen::VectorXd>& x);

}  // namespace rbffd
