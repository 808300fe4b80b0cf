#include "rbffd/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <stdexcept>
#include <string>

#include "proximity_grid.hpp"
#include "rbffd/nodegen.hpp"

namespace rbffd {

namespace {

// relative tolerance for deciding that a user-supplied point sits on a sphere
constexpr double kOnSurfaceTol = 1e-7;

// candidate steps overshoot h slightly so that exactly-h spacing survives roundoff
constexpr double kStepMargin = 1 + 1e-9;

}  // namespace

Ball::Ball(Eigen::VectorXd c, double r) : center(std::move(c)), radius(r) {
  if (center.size() < 1) throw std::invalid_argument("Ball: center must have at least one component");
  if (!(radius > 0)) throw std::invalid_argument("Ball: radius must be positive");
}

CsgDomain::CsgDomain(std::vector<Ball> positive, std::vector<Ball> negative)
    : positive_(std::move(positive)), negative_(std::move(negative)) {
  if (positive_.empty())
    throw std::invalid_argument("CsgDomain: at least one positive ball is required");
  dim_ = static_cast<int>(positive_[0].center.size());
  for (const Ball& b : positive_)
    if (b.center.size() != dim_) throw std::invalid_argument("CsgDomain: mixed ball dimensions");
  for (const Ball& b : negative_)
    if (b.center.size() != dim_) throw std::invalid_argument("CsgDomain: mixed ball dimensions");

  // reject empty domains: probe the bounding box for an interior point
  Eigen::VectorXd lo, hi;
  bounding_box(lo, hi);
  std::mt19937_64 rng(0x5eedf00dULL);
  std::uniform_real_distribution<double> u(0, 1);
  Eigen::VectorXd x(dim_);
  bool found = false;
  for (int t = 0; t < 20000 && !found; ++t) {
    for (int i = 0; i < dim_; ++i) x[i] = lo[i] + (hi[i] - lo[i]) * u(rng);
    found = contains(x);
  }
  if (!found)
    throw std::invalid_argument("CsgDomain: no interior point found by probing; domain appears empty");
}

const Ball& CsgDomain::ball(Index i) const {
  if (i < 0 || i >= ball_count()) throw std::out_of_range("CsgDomain::ball: index out of range");
  const auto np = static_cast<Index>(positive_.size());
  return i < np ? positive_[static_cast<size_t>(i)] : negative_[static_cast<size_t>(i - np)];
}

bool CsgDomain::is_negative(Index i) const {
  if (i < 0 || i >= ball_count()) throw std::out_of_range("CsgDomain::is_negative: index out of range");
  return i >= static_cast<Index>(positive_.size());
}

bool CsgDomain::contains(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.size() != dim_) throw std::invalid_argument("CsgDomain::contains: dimension mismatch");
  bool inside = false;
  for (const Ball& b : positive_) {
    if ((x - b.center).norm() < b.radius - kSurfaceBand) {
      inside = true;
      break;
    }
  }
  if (!inside) return false;
  for (const Ball& b : negative_)
    if ((x - b.center).norm() < b.radius + kSurfaceBand) return false;
  return true;
}

bool CsgDomain::on_boundary_of(Index i, const Eigen::Ref<const Eigen::VectorXd>& p) const {
  const auto np = static_cast<Index>(positive_.size());
  if (is_negative(i)) {
    // hole surface: must touch the closure of the positive union and stay
    // outside every other hole
    bool in_closure = false;
    for (const Ball& b : positive_) {
      if ((p - b.center).norm() <= b.radius + kSurfaceBand) {
        in_closure = true;
        break;
      }
    }
    if (!in_closure) return false;
    for (Index j = np; j < ball_count(); ++j) {
      if (j == i) continue;
      const Ball& b = ball(j);
      if ((p - b.center).norm() < b.radius - kSurfaceBand) return false;
    }
    return true;
  }
  // outer surface: not swallowed by another positive ball, not inside a hole
  for (Index j = 0; j < np; ++j) {
    if (j == i) continue;
    const Ball& b = ball(j);
    if ((p - b.center).norm() < b.radius - kSurfaceBand) return false;
  }
  for (const Ball& b : negative_)
    if ((p - b.center).norm() < b.radius - kSurfaceBand) return false;
  return true;
}

Eigen::VectorXd CsgDomain::outward_normal(const Eigen::Ref<const Eigen::VectorXd>& p) const {
  if (p.size() != dim_) throw std::invalid_argument("CsgDomain::outward_normal: dimension mismatch");
  Index best = -1;
  double best_err = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < ball_count(); ++i) {
    const Ball& b = ball(i);
    const double err = std::abs((p - b.center).norm() - b.radius);
    if (err <= kOnSurfaceTol * b.radius && err < best_err && on_boundary_of(i, p)) {
      best = i;
      best_err = err;
    }
  }
  if (best < 0)
    throw std::invalid_argument("CsgDomain::outward_normal: point does not lie on the domain boundary");
  const Ball& b = ball(best);
  Eigen::VectorXd n = (p - b.center).normalized();
  return is_negative(best) ? Eigen::VectorXd(-n) : n;
}

void CsgDomain::bounding_box(Eigen::VectorXd& lo, Eigen::VectorXd& hi) const {
  lo = (positive_[0].center.array() - positive_[0].radius).matrix();
  hi = (positive_[0].center.array() + positive_[0].radius).matrix();
  for (const Ball& b : positive_) {
    lo = lo.cwiseMin((b.center.array() - b.radius).matrix());
    hi = hi.cwiseMax((b.center.array() + b.radius).matrix());
  }
}

namespace {

Eigen::VectorXd surface_normal(const CsgDomain& dom, Index owner,
                               const Eigen::Ref<const Eigen::VectorXd>& p) {
  Eigen::VectorXd n = (p - dom.ball(owner).center).normalized();
  return dom.is_negative(owner) ? Eigen::VectorXd(-n) : n;
}

std::vector<BoundaryPoint> discretize_boundary_1d(const CsgDomain& dom, double h) {
  std::vector<BoundaryPoint> out;
  for (Index i = 0; i < dom.ball_count(); ++i) {
    const Ball& b = dom.ball(i);
    for (double side : {-1.0, 1.0}) {
      Eigen::VectorXd p(1);
      p[0] = b.center[0] + side * b.radius;
      if (!dom.on_boundary_of(i, p)) continue;
      Eigen::VectorXd n(1);
      n[0] = dom.is_negative(i) ? -side : side;
      out.push_back({p, n, i});
    }
  }
  for (size_t a = 0; a < out.size(); ++a)
    for (size_t b = a + 1; b < out.size(); ++b)
      if (std::abs(out[a].position[0] - out[b].position[0]) < h)
        throw std::invalid_argument(
            "discretize_boundary: boundary features closer than h; reduce the spacing");
  return out;
}

// Candidate points on the sphere of `ball` at chord distance just above h
// from p. In 2D the two tangent directions are deterministic; in higher
// dimensions `count` random tangents are drawn.
void surface_candidates(const Ball& ball, const Eigen::Ref<const Eigen::VectorXd>& p, double h,
                        int count, std::mt19937_64& rng, std::vector<Eigen::VectorXd>& out) {
  const int d = static_cast<int>(ball.center.size());
  const double step = h * kStepMargin;
  const double cos_t = 1 - step * step / (2 * ball.radius * ball.radius);
  const double sin_t = std::sqrt(std::max(0.0, 1 - cos_t * cos_t));
  const Eigen::VectorXd u = (p - ball.center).normalized();

  out.clear();
  auto push = [&](const Eigen::VectorXd& tangent) {
    Eigen::VectorXd dir = cos_t * u + sin_t * tangent;
    out.push_back(ball.center + ball.radius * dir.normalized());
  };

  if (d == 2) {
    Eigen::VectorXd t(2);
    t << -u[1], u[0];
    push(t);
    push(Eigen::VectorXd(-t));
    return;
  }
  std::normal_distribution<double> gauss(0, 1);
  for (int c = 0; c < count; ++c) {
    Eigen::VectorXd t(d);
    do {
      for (int i = 0; i < d; ++i) t[i] = gauss(rng);
      t -= t.dot(u) * u;
    } while (t.norm() < 1e-8);
    push(t.normalized());
  }
}

}  // namespace

std::vector<BoundaryPoint> discretize_boundary(const CsgDomain& dom, double h,
                                               std::uint64_t seed) {
  if (!(h > 0)) throw std::invalid_argument("discretize_boundary: h must be positive");
  const int d = dom.dim();
  if (d == 1) return discretize_boundary_1d(dom, h);

  double min_radius = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < dom.ball_count(); ++i) min_radius = std::min(min_radius, dom.ball(i).radius);
  if (h >= min_radius)
    throw std::invalid_argument("discretize_boundary: h must be smaller than the smallest radius");

  std::mt19937_64 rng(seed);
  detail::ProximityGrid grid(d, h);
  std::vector<BoundaryPoint> accepted;
  const int tangent_count = default_candidate_count(d - 1);
  const int probes = 32 * (1 << d);

  for (Index bi = 0; bi < dom.ball_count(); ++bi) {
    const Ball& ball = dom.ball(bi);
    std::deque<Eigen::VectorXd> front;
    Index placed = 0;
    bool active = false;

    auto try_accept = [&](const Eigen::VectorXd& p) {
      if (grid.any_within(p, h)) return;
      grid.insert(p);
      accepted.push_back({p, surface_normal(dom, bi, p), bi});
      front.push_back(p);
      ++placed;
    };

    const Eigen::MatrixXd seeds = sphere_candidates(ball.center, ball.radius, probes, rng);
    for (Index c = 0; c < seeds.cols(); ++c) {
      if (!dom.on_boundary_of(bi, seeds.col(c))) continue;
      active = true;
      try_accept(seeds.col(c));
    }

    std::vector<Eigen::VectorXd> cand;
    while (!front.empty()) {
      const Eigen::VectorXd p = front.front();
      front.pop_front();
      surface_candidates(ball, p, h, tangent_count, rng, cand);
      for (const Eigen::VectorXd& q : cand)
        if (dom.on_boundary_of(bi, q)) try_accept(q);
    }

    if (active && placed < 2)
      throw std::invalid_argument("discretize_boundary: spacing h too large for ball " +
                                  std::to_string(bi));
  }
  return accepted;
}

}  // namespace rbffd
