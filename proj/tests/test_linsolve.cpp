#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "rbffd/linsolve.hpp"

using namespace rbffd;

namespace {

SparseSystem make_system(const Eigen::SparseMatrix<double, Eigen::RowMajor>& m,
                         Eigen::VectorXd b) {
  SparseSystem s;
  s.matrix = m;
  s.rhs = std::move(b);
  s.row_node.resize(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) s.row_node[static_cast<std::size_t>(i)] = i;
  return s;
}

SparseSystem identity_system(Index n, const Eigen::VectorXd& b) {
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(n, n);
  m.setIdentity();
  return make_system(m, b);
}

// second-difference matrix of the 1d Poisson problem u'' = f on a unit
// interval with zero Dirichlet ends, eliminated to the interior unknowns
SparseSystem tridiagonal_poisson(Index n, Eigen::VectorXd b) {
  const double h = 1.0 / double(n + 1);
  std::vector<Eigen::Triplet<double>> trip;
  for (Index i = 0; i < n; ++i) {
    trip.emplace_back(int(i), int(i), -2.0 / (h * h));
    if (i > 0) trip.emplace_back(int(i), int(i - 1), 1.0 / (h * h));
    if (i + 1 < n) trip.emplace_back(int(i), int(i + 1), 1.0 / (h * h));
  }
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(n, n);
  m.setFromTriplets(trip.begin(), trip.end());
  return make_system(m, std::move(b));
}

}  // namespace

TEST_CASE("iterative settings carry the per-dimension preconditioner tuning") {
  const IterativeSettings d1 = IterativeSettings::for_dimension(1);
  CHECK(d1.drop_tolerance == 1e-4);
  CHECK(d1.fill_factor == 20);
  const IterativeSettings d2 = IterativeSettings::for_dimension(2);
  CHECK(d2.drop_tolerance == 1e-4);
  CHECK(d2.fill_factor == 30);
  const IterativeSettings d3 = IterativeSettings::for_dimension(3);
  CHECK(d3.drop_tolerance == 1e-5);
  CHECK(d3.fill_factor == 50);
  // beyond 3d the 3d tuning is reused
  const IterativeSettings d4 = IterativeSettings::for_dimension(4);
  CHECK(d4.drop_tolerance == d3.drop_tolerance);
  CHECK(d4.fill_factor == d3.fill_factor);
  // shared defaults
  CHECK(d2.tolerance == 1e-15);
  CHECK(d2.max_iterations == 500);
}

TEST_CASE("direct solve of the identity returns the right-hand side") {
  Eigen::VectorXd b(5);
  b << 1, -2, 3, 0.5, -0.25;
  const SolveReport r = solve_direct(identity_system(5, b));
  CHECK(r.solution == b);
  CHECK(r.residual == 0.0);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(r.method == "sparse-lu");
  CHECK(r.iterations == 0);
  CHECK(r.seconds >= 0.0);
}

TEST_CASE("direct solve matches a dense factorization oracle") {
  const Index n = 50;
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  Eigen::VectorXd b(n);
  for (Index i = 0; i < n; ++i) b(i) = coord(rng);
  const SparseSystem system = tridiagonal_poisson(n, b);

  const Eigen::MatrixXd dense = Eigen::MatrixXd(system.matrix);
  const Eigen::VectorXd expected = Eigen::PartialPivLU<Eigen::MatrixXd>(dense).solve(b);

  const SolveReport r = solve_direct(system);
  CHECK(r.status == SolveStatus::Converged);
  CHECK((r.solution - expected).norm() <= 1e-12 * expected.norm());
  CHECK(r.residual <= 1e-10);
  CHECK(r.residual == doctest::Approx(relative_residual(system, r.solution)).epsilon(1e-12));
}

TEST_CASE("direct solve rejects singular matrices") {
  // zero row makes the matrix structurally singular
  Eigen::SparseMatrix<double, Eigen::RowMajor> m(3, 3);
  std::vector<Eigen::Triplet<double>> trip{{0, 0, 1.0}, {1, 1, 1.0}};
  m.setFromTriplets(trip.begin(), trip.end());
  CHECK_THROWS_AS(solve_direct(make_system(m, Eigen::Vector3d(1, 1, 1))), std::runtime_error);

  // non-square systems are malformed
  SparseSystem rect;
  rect.matrix.resize(2, 3);
  rect.rhs = Eigen::Vector2d(1, 1);
  rect.row_node = {0, 1};
  CHECK_THROWS_AS(solve_direct(rect), std::invalid_argument);
}

TEST_CASE("iterative solve agrees with the direct solver") {
  const Index n = 120;
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  Eigen::VectorXd b(n);
  for (Index i = 0; i < n; ++i) b(i) = coord(rng);
  const SparseSystem system = tridiagonal_poisson(n, b);

  const SolveReport direct = solve_direct(system);
  const SolveReport iter = solve_iterative(system, IterativeSettings::for_dimension(1));
  CHECK(iter.status == SolveStatus::Converged);
  CHECK(iter.method == "bicgstab-ilut");
  CHECK(iter.iterations >= 1);
  CHECK((iter.solution - direct.solution).norm() <= 1e-8 * direct.solution.norm());
  CHECK(iter.residual == doctest::Approx(relative_residual(system, iter.solution)).epsilon(1e-12));
}

TEST_CASE("zero right-hand side short circuits to the zero solution") {
  const SparseSystem system = tridiagonal_poisson(40, Eigen::VectorXd::Zero(40));
  const SolveReport r = solve_iterative(system);
  CHECK(r.solution.isZero(0.0));
  CHECK(r.iterations == 0);
  CHECK(r.status == SolveStatus::Converged);
  CHECK(r.residual == 0.0);
}

TEST_CASE("iteration cap is reported as NotConverged, not an error") {
  const Index n = 200;
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  Eigen::VectorXd b(n);
  for (Index i = 0; i < n; ++i) b(i) = coord(rng);
  const SparseSystem system = tridiagonal_poisson(n, b);

  IterativeSettings strangled = IterativeSettings::for_dimension(1);
  strangled.max_iterations = 1;
  strangled.drop_tolerance = 0.9;  // cripple the preconditioner too
  strangled.fill_factor = 1;
  const SolveReport r = solve_iterative(system, strangled);
  CHECK(r.status == SolveStatus::NotConverged);
  CHECK(std::isfinite(r.residual));
  CHECK(r.residual > strangled.tolerance);
}

TEST_CASE("iterative settings are validated") {
  const SparseSystem system = tridiagonal_poisson(10, Eigen::VectorXd::Ones(10));
  IterativeSettings bad;
  bad.tolerance = 0.0;
  CHECK_THROWS_AS(solve_iterative(system, bad), std::invalid_argument);
  bad = IterativeSettings{};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(solve_iterative(system, bad), std::invalid_argument);
  CHECK_THROWS_AS(IterativeSettings::for_dimension(0), std::invalid_argument);
}

TEST_CASE("relative residual falls back to absolute for zero rhs") {
  const SparseSystem system = identity_system(3, Eigen::Vector3d(0, 0, 0));
  // x nonzero, b zero: residual is ||Ax|| itself
  CHECK(relative_residual(system, Eigen::Vector3d(1, 2, 2)) == doctest::Approx(3.0));
  const SparseSystem nonzero = identity_system(2, Eigen::Vector2d(3, 4));
  // exactly solved
  CHECK(relative_residual(nonzero, Eigen::Vector2d(3, 4)) == 0.0);
  // off by (0,5): ||r|| / ||b|| = 5 / 5
  CHECK(relative_residual(nonzero, Eigen::Vector2d(3, 9)) == doctest::Approx(1.0));
}
