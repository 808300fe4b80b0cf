#include "rbffd/kdtree.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <utility>

namespace rbffd {

namespace {

using Entry = std::pair<double, Index>;  // (squared distance, index)

// Lexicographic order on (distance, index); the priority queue keeps the
// worst candidate on top under this comparison.
struct EntryLess {
  bool operator()(const Entry& a, const Entry& b) const {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  }
};

}  // namespace

KdTree::KdTree(Eigen::MatrixXd points) : pts_(std::move(points)) {
  if (pts_.cols() == 0) return;
  perm_.resize(pts_.cols());
  std::iota(perm_.begin(), perm_.end(), Index{0});
  nodes_.reserve(static_cast<size_t>(2 * pts_.cols() / kLeafSize + 2));
  root_ = build(0, pts_.cols());
}

Index KdTree::build(Index begin, Index end) {
  const Index id = static_cast<Index>(nodes_.size());
  nodes_.push_back({begin, end, -1, 0, -1, -1});
  if (end - begin <= kLeafSize) return id;

  // split along the widest axis at the median coordinate
  Eigen::VectorXd lo = pts_.col(perm_[begin]);
  Eigen::VectorXd hi = lo;
  for (Index i = begin + 1; i < end; ++i) {
    lo = lo.cwiseMin(pts_.col(perm_[i]));
    hi = hi.cwiseMax(pts_.col(perm_[i]));
  }
  Index axis = 0;
  (hi - lo).maxCoeff(&axis);

  const Index mid = begin + (end - begin - 1) / 2;
  std::nth_element(perm_.begin() + begin, perm_.begin() + mid, perm_.begin() + end,
                   [&](Index a, Index b) { return pts_(axis, a) < pts_(axis, b); });

  nodes_[id].axis = static_cast<int>(axis);
  nodes_[id].split = pts_(axis, perm_[mid]);
  const Index left = build(begin, mid + 1);
  const Index right = build(mid + 1, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

std::vector<Index> KdTree::knn(const Eigen::Ref<const Eigen::VectorXd>& query, Index k) const {
  if (query.size() != pts_.rows()) throw std::invalid_argument("KdTree::knn: dimension mismatch");
  if (k < 1) throw std::invalid_argument("KdTree::knn: k must be >= 1");
  if (k > size()) throw std::invalid_argument("KdTree::knn: k exceeds the point count");

  std::priority_queue<Entry, std::vector<Entry>, EntryLess> best;

  auto visit = [&](auto&& self, Index nid) -> void {
    const Node& nd = nodes_[nid];
    if (nd.axis < 0) {
      for (Index i = nd.begin; i < nd.end; ++i) {
        const Index p = perm_[i];
        const Entry e{(query - pts_.col(p)).squaredNorm(), p};
        if (static_cast<Index>(best.size()) < k) {
          best.push(e);
        } else if (EntryLess{}(e, best.top())) {
          best.pop();
          best.push(e);
        }
      }
      return;
    }
    const double delta = query[nd.axis] - nd.split;
    const Index near = delta <= 0 ? nd.left : nd.right;
    const Index far = delta <= 0 ? nd.right : nd.left;
    self(self, near);
    // descend the far side unless every point there is provably worse
    if (static_cast<Index>(best.size()) < k || delta * delta <= best.top().first)
      self(self, far);
  };
  visit(visit, root_);

  std::vector<Index> out(static_cast<size_t>(k));
  for (Index i = k - 1; i >= 0; --i) {
    out[static_cast<size_t>(i)] = best.top().second;
    best.pop();
  }
  return out;
}

std::vector<Index> KdTree::within(const Eigen::Ref<const Eigen::VectorXd>& query,
                                  double radius) const {
  if (query.size() != pts_.rows())
    throw std::invalid_argument("KdTree::within: dimension mismatch");
  if (radius < 0) throw std::invalid_argument("KdTree::within: radius must be >= 0");
  if (size() == 0) return {};

  const double r2 = radius * radius;
  std::vector<Entry> hits;

  auto visit = [&](auto&& self, Index nid) -> void {
    const Node& nd = nodes_[nid];
    if (nd.axis < 0) {
      for (Index i = nd.begin; i < nd.end; ++i) {
        const Index p = perm_[i];
        const double d2 = (query - pts_.col(p)).squaredNorm();
        if (d2 <= r2) hits.emplace_back(d2, p);
      }
      return;
    }
    const double delta = query[nd.axis] - nd.split;
    const Index near = delta <= 0 ? nd.left : nd.right;
    const Index far = delta <= 0 ? nd.right : nd.left;
    self(self, near);
    if (delta * delta <= r2) self(self, far);
  };
  visit(visit, root_);

  std::sort(hits.begin(), hits.end(), [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second < b.second;
  });
  std::vector<Index> out(hits.size());
  for (size_t i = 0; i < hits.size(); ++i) out[i] = hits[i].second;
  return out;
}

}  // namespace rbffd
