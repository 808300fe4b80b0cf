#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rbffd/types.hpp"

namespace rbffd::detail {

// Uniform hash grid with cell size equal to the query radius, so every point
// within that radius of a query sits in one of the 3^d surrounding cells.
// Cells are addressed by a 64-bit hash of their integer coordinates; hash
// collisions merely merge candidate lists and are resolved by the exact
// distance test.
class ProximityGrid {
 public:
  ProximityGrid(int dim, double cell) : dim_(dim), cell_(cell) {}

  Index size() const { return static_cast<Index>(pts_.size()); }

  void insert(const Eigen::VectorXd& p) {
    pts_.push_back(p);
    cells_[hash_cell(p, nullptr)].push_back(static_cast<int>(pts_.size()) - 1);
  }

  // true iff some inserted point lies strictly within r of p
  bool any_within(const Eigen::VectorXd& p, double r) const {
    const double r2 = r * r;
    std::vector<std::int64_t> base(static_cast<size_t>(dim_));
    hash_cell(p, &base);
    std::vector<int> offset(static_cast<size_t>(dim_), -1);
    while (true) {
      std::uint64_t h = kFnvOffset;
      for (int i = 0; i < dim_; ++i) mix(h, base[static_cast<size_t>(i)] + offset[static_cast<size_t>(i)]);
      if (auto it = cells_.find(h); it != cells_.end()) {
        for (int idx : it->second)
          if ((pts_[static_cast<size_t>(idx)] - p).squaredNorm() < r2) return true;
      }
      int i = 0;
      for (; i < dim_; ++i) {
        if (++offset[static_cast<size_t>(i)] <= 1) break;
        offset[static_cast<size_t>(i)] = -1;
      }
      if (i == dim_) return false;
    }
  }

 private:
  static constexpr std::uint64_t kFnvOffset = 1469598103934665603ull;

  static void mix(std::uint64_t& h, std::int64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= static_cast<std::uint64_t>(v >> (8 * b)) & 0xffull;
      h *= 1099511628211ull;
    }
  }

  std::uint64_t hash_cell(const Eigen::VectorXd& p, std::vector<std::int64_t>* coords_out) const {
    std::uint64_t h = kFnvOffset;
    for (int i = 0; i < dim_; ++i) {
      const auto c = static_cast<std::int64_t>(std::floor(p[i] / cell_));
      if (coords_out) (*coords_out)[static_cast<size_t>(i)] = c;
      mix(h, c);
    }
    return h;
  }

  int dim_;
  double cell_;
  std::vector<Eigen::VectorXd> pts_;
  std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

}  // namespace rbffd::detail
