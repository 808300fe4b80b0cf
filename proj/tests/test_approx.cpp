#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "rbffd/monomials.hpp"
#include "rbffd/operators.hpp"
#include "rbffd/phs.hpp"
#include "rbffd/weights.hpp"

using namespace rbffd;

TEST_CASE("monomial_count matches binomial values") {
  CHECK(monomial_count(2, 2) == 6);
  CHECK(monomial_count(4, 3) == 35);
  CHECK(monomial_count(0, 1) == 1);
  CHECK(monomial_count(0, 7) == 1);
  CHECK(monomial_count(-1, 1) == 0);
  CHECK(monomial_count(-1, 4) == 0);
  CHECK(monomial_count(3, 1) == 4);
  CHECK(monomial_count(2, 4) == 15);
  CHECK(monomial_count(8, 3) == 165);
  CHECK_THROWS_AS(monomial_count(2, 0), std::invalid_argument);
  CHECK_THROWS_AS(monomial_count(-2, 2), std::invalid_argument);
}

TEST_CASE("stencil_size: twice the basis size, floored at 2d+1") {
  // order -1 and 0 sit on the floor
  CHECK(stencil_size(-1, 1) == 3);
  CHECK(stencil_size(-1, 2) == 5);
  CHECK(stencil_size(-1, 3) == 7);
  CHECK(stencil_size(0, 1) == 3);
  CHECK(stencil_size(0, 2) == 5);
  CHECK(stencil_size(0, 3) == 7);
  // even orders 2..8
  CHECK(stencil_size(2, 1) == 6);
  CHECK(stencil_size(2, 2) == 12);
  CHECK(stencil_size(2, 3) == 20);
  CHECK(stencil_size(4, 1) == 10);
  CHECK(stencil_size(4, 2) == 30);
  CHECK(stencil_size(4, 3) == 70);
  CHECK(stencil_size(6, 1) == 14);
  CHECK(stencil_size(6, 2) == 56);
  CHECK(stencil_size(6, 3) == 168);
  CHECK(stencil_size(8, 1) == 18);
  CHECK(stencil_size(8, 2) == 90);
  CHECK(stencil_size(8, 3) == 330);
}

TEST_CASE("MonomialBasis enumerates graded order, constant first") {
  const MonomialBasis basis(2, 2);
  REQUIRE(basis.size() == 6);
  const Eigen::MatrixXi& e = basis.exponents();
  // 1, x, y, x^2, xy, y^2
  CHECK((e.col(0).transpose() == Eigen::RowVector2i(0, 0)));
  CHECK((e.col(1).transpose() == Eigen::RowVector2i(1, 0)));
  CHECK((e.col(2).transpose() == Eigen::RowVector2i(0, 1)));
  CHECK((e.col(3).transpose() == Eigen::RowVector2i(2, 0)));
  CHECK((e.col(4).transpose() == Eigen::RowVector2i(1, 1)));
  CHECK((e.col(5).transpose() == Eigen::RowVector2i(0, 2)));
}

TEST_CASE("MonomialBasis: no duplicates, grades ascending, any dimension") {
  for (int d : {1, 2, 3, 4}) {
    for (int m : {-1, 0, 2, 4}) {
      const MonomialBasis basis(d, m);
      REQUIRE(basis.size() == monomial_count(m, d));
      int prev_grade = 0;
      for (Index j = 0; j < basis.size(); ++j) {
        const int grade = basis.exponents().col(j).sum();
        CHECK(grade >= prev_grade);
        CHECK(grade <= m);
        prev_grade = grade;
        for (Index i = j + 1; i < basis.size(); ++i)
          CHECK(basis.exponents().col(j) != basis.exponents().col(i));
      }
    }
  }
}

TEST_CASE("MonomialBasis evaluates values and operator actions") {
  const MonomialBasis basis(2, 2);
  Eigen::Vector2d x(2.0, 3.0);
  CHECK(basis.value(0, x) == doctest::Approx(1.0));
  CHECK(basis.value(3, x) == doctest::Approx(4.0));   // x^2
  CHECK(basis.value(4, x) == doctest::Approx(6.0));   // xy
  const auto lap = OperatorDescriptor::laplacian();
  CHECK(basis.apply(lap, 0, x) == doctest::Approx(0.0));
  CHECK(basis.apply(lap, 3, x) == doctest::Approx(2.0));  // d2/dx2 x^2
  CHECK(basis.apply(lap, 4, x) == doctest::Approx(0.0));  // xy is harmonic
  const auto dx = OperatorDescriptor::partial(0);
  const auto dy = OperatorDescriptor::partial(1);
  CHECK(basis.apply(dx, 4, x) == doctest::Approx(3.0));  // d/dx xy = y
  CHECK(basis.apply(dy, 4, x) == doctest::Approx(2.0));
  CHECK(basis.apply(dy, 5, x) == doctest::Approx(6.0));  // d/dy y^2 = 2y
}

TEST_CASE("phs value and closed-form operators, odd exponent") {
  const PhsBasis phs(3);
  CHECK(phs.value(2.0) == doctest::Approx(8.0));
  CHECK(phs.value(0.0) == 0.0);
  // laplacian of r^3 is k(k+d-2) r^(k-2)
  CHECK(phs.laplacian(1.0, 2) == doctest::Approx(9.0));
  CHECK(phs.laplacian(0.5, 3) == doctest::Approx(6.0));
  CHECK(phs.laplacian(0.0, 3) == 0.0);
  // partial derivative vanishes at the center
  Eigen::Vector2d c(0.3, -0.1);
  CHECK(phs_apply(phs, OperatorDescriptor::partial(0), c, c) == 0.0);
}

TEST_CASE("phs operators agree with finite differences of phi, both parities") {
  std::mt19937_64 rng(7);
  for (int k : {2, 3, 4, 5}) {
    const PhsBasis phs(k);
    for (int d : {1, 2, 3}) {
      const Eigen::VectorXd y = oracles::random_in_ball(Eigen::VectorXd::Zero(d), 1.0, rng);
      Eigen::VectorXd x = y + 0.8 * oracles::random_unit(d, rng);
      auto field = [&](const Eigen::VectorXd& p) { return phs.value((p - y).norm()); };

      const double lap_fd = oracles::fd_laplacian(field, x, 1e-5);
      const double lap = phs_apply(phs, OperatorDescriptor::laplacian(), x, y);
      CHECK(lap == doctest::Approx(lap_fd).epsilon(1e-4));

      const Eigen::VectorXd grad_fd = oracles::fd_gradient(field, x, 1e-6);
      for (int a = 0; a < d; ++a) {
        const double g = phs_apply(phs, OperatorDescriptor::partial(a), x, y);
        CHECK(g == doctest::Approx(grad_fd[a]).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("rbf_matrix is exactly symmetric with zero diagonal") {
  std::mt19937_64 rng(11);
  const Eigen::MatrixXd pts = oracles::random_stencil(Eigen::Vector3d(0.2, -0.4, 0.9), 1.0, 12, rng);
  const Eigen::MatrixXd a = rbf_matrix(PhsBasis(3), pts);
  CHECK(a == a.transpose());
  CHECK(a.diagonal().isZero(0.0));
  CHECK(a(2, 7) == PhsBasis(3).value((pts.col(2) - pts.col(7)).norm()));
}

TEST_CASE("1D three-point stencil reproduces classical second differences") {
  for (double h : {1.0, 0.1, 0.003}) {
    Eigen::MatrixXd pts(1, 3);
    pts << 0.7, 0.7 - h, 0.7 + h;
    const auto w = compute_weights(OperatorDescriptor::laplacian(), pts, PhsBasis(3),
                                   MonomialBasis(1, 2));
    const double s = 1.0 / (h * h);
    CHECK(w.weights[0] == doctest::Approx(-2.0 * s).epsilon(1e-11));
    CHECK(w.weights[1] == doctest::Approx(s).epsilon(1e-11));
    CHECK(w.weights[2] == doctest::Approx(s).epsilon(1e-11));
    CHECK(w.multipliers.size() == 3);
  }
}

TEST_CASE("determined grid stencils reproduce the classical cross weights") {
  // with n equal to the basis size the weights are fixed by polynomial
  // exactness alone, and degree-2 exactness forces the classical Laplacian
  // stencil extended by zeros on the completion points
  for (int d : {2, 3}) {
    const double h = 0.05;
    const Eigen::VectorXd center = Eigen::VectorXd::Constant(d, 0.4);
    const Eigen::MatrixXd pts = oracles::determined_grid_stencil(center, h);
    REQUIRE(pts.cols() == monomial_count(2, d));
    const auto w = compute_weights(OperatorDescriptor::laplacian(), pts, PhsBasis(3),
                                   MonomialBasis(d, 2));
    const Eigen::VectorXd expected = oracles::classical_laplacian_weights(d, h, pts.cols());
    const double scale = 2.0 * d / (h * h);
    for (Index j = 0; j < pts.cols(); ++j)
      CHECK(std::abs(w.weights[j] - expected[j]) <= 1e-9 * scale);
  }
}

TEST_CASE("weights satisfy the exactness conditions they were built from") {
  std::mt19937_64 rng(23);
  for (int d : {1, 2, 3}) {
    for (int m : {0, 2, 4}) {
      const MonomialBasis basis(d, m);
      const Index n = stencil_size(m, d);
      const Eigen::VectorXd center = oracles::random_in_ball(Eigen::VectorXd::Zero(d), 2.0, rng);
      const Eigen::MatrixXd pts = oracles::random_stencil(center, 0.3, n, rng);
      for (const auto& op :
           {OperatorDescriptor::laplacian(), OperatorDescriptor::partial(d - 1)}) {
        const auto w = compute_weights(op, pts, PhsBasis(3), basis);
        REQUIRE(w.weights.size() == n);
        REQUIRE(w.multipliers.size() == basis.size());
        for (Index j = 0; j < basis.size(); ++j) {
          double applied = 0;
          for (Index i = 0; i < n; ++i) applied += w.weights[i] * basis.value(j, pts.col(i));
          const double target = basis.apply(op, j, center);
          CHECK(applied == doctest::Approx(target).epsilon(1e-8).scale(1.0 / 0.3 / 0.3));
        }
      }
    }
  }
}

TEST_CASE("weights are translation invariant and scale like h^-order") {
  std::mt19937_64 rng(31);
  const int d = 2;
  const MonomialBasis basis(d, 2);
  const PhsBasis phs(3);
  const Eigen::MatrixXd base =
      oracles::random_stencil(Eigen::VectorXd::Zero(d), 1.0, stencil_size(2, d), rng);

  const auto w0 = compute_weights(OperatorDescriptor::laplacian(), base, phs, basis);

  Eigen::VectorXd shift(d);
  shift << 12.25, -3.5;
  const Eigen::MatrixXd moved = base.colwise() + shift;
  const auto w1 = compute_weights(OperatorDescriptor::laplacian(), moved, phs, basis);
  CHECK((w1.weights - w0.weights).lpNorm<Eigen::Infinity>() <
        1e-9 * w0.weights.lpNorm<Eigen::Infinity>());

  const double factor = 0.01;
  const Eigen::MatrixXd scaled = base * factor;
  const auto w2 = compute_weights(OperatorDescriptor::laplacian(), scaled, phs, basis);
  CHECK((w2.weights * factor * factor - w0.weights).lpNorm<Eigen::Infinity>() <
        1e-9 * w0.weights.lpNorm<Eigen::Infinity>());

  const auto g0 = compute_weights(OperatorDescriptor::partial(0), base, phs, basis);
  const auto g2 = compute_weights(OperatorDescriptor::partial(0), scaled, phs, basis);
  CHECK((g2.weights * factor - g0.weights).lpNorm<Eigen::Infinity>() <
        1e-9 * g0.weights.lpNorm<Eigen::Infinity>());
}

TEST_CASE("local truncation error converges at the design rate") {
  // centrally symmetric stencils so even orders see their full rate
  std::mt19937_64 rng(101);
  auto field = [](const Eigen::VectorXd& x) { return std::exp(x[0] + 0.5 * x[1]); };
  auto field_lap = [&](const Eigen::VectorXd& x) { return 1.25 * field(x); };
  const Eigen::VectorXd center = Eigen::Vector2d(0.3, 0.6);

  for (int m : {2, 4}) {
    const MonomialBasis basis(2, m);
    const Index pairs = stencil_size(m, 2) / 2;
    std::vector<double> hs{0.4, 0.2, 0.1, 0.05}, errs;
    for (double h : hs) {
      double worst = 0;
      for (int rep = 0; rep < 3; ++rep) {
        const Eigen::MatrixXd pts = oracles::symmetric_stencil(center, h, pairs, rng);
        const auto w = compute_weights(OperatorDescriptor::laplacian(), pts, PhsBasis(3), basis);
        double applied = 0;
        for (Index i = 0; i < pts.cols(); ++i) applied += w.weights[i] * field(pts.col(i));
        worst = std::max(worst, std::abs(applied - field_lap(center)));
      }
      errs.push_back(worst);
    }
    const double rate = oracles::loglog_slope(hs, errs);
    INFO("m = " << m << " observed rate " << rate);
    CHECK(rate >= m - 0.5);
  }
}

TEST_CASE("degenerate stencils raise UnisolventFailure") {
  // collinear points cannot determine the quadratic monomials in 2D
  const Index n = stencil_size(2, 2);
  Eigen::MatrixXd pts(2, n);
  for (Index j = 0; j < n; ++j) {
    pts(0, j) = 0.1 * static_cast<double>(j);
    pts(1, j) = 2.0 + 0.2 * static_cast<double>(j);
  }
  CHECK_THROWS_AS(
      compute_weights(OperatorDescriptor::laplacian(), pts, PhsBasis(3), MonomialBasis(2, 2)),
      UnisolventFailure);

  // coincident points are degenerate even without augmentation
  Eigen::MatrixXd dup = Eigen::MatrixXd::Zero(2, 3);
  CHECK_THROWS_AS(
      compute_weights(OperatorDescriptor::laplacian(), dup, PhsBasis(3), MonomialBasis(2, 0)),
      UnisolventFailure);
}

TEST_CASE("stencil smaller than the basis is a configuration error") {
  std::mt19937_64 rng(5);
  const Eigen::MatrixXd pts = oracles::random_stencil(Eigen::Vector2d(0, 0), 1.0, 5, rng);
  CHECK_THROWS_AS(
      compute_weights(OperatorDescriptor::laplacian(), pts, PhsBasis(3), MonomialBasis(2, 2)),
      std::invalid_argument);
}

TEST_CASE("basis and stencil dimensions must agree") {
  std::mt19937_64 rng(6);
  const Eigen::MatrixXd pts = oracles::random_stencil(Eigen::Vector3d(0, 0, 0), 1.0, 12, rng);
  CHECK_THROWS_AS(
      compute_weights(OperatorDescriptor::laplacian(), pts, PhsBasis(3), MonomialBasis(2, 2)),
      std::invalid_argument);
}
