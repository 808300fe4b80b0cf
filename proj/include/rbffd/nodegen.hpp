#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <vector>

#include "rbffd/geometry.hpp"
#include "rbffd/types.hpp"

namespace rbffd {

enum class NodeRole : std::uint8_t { Interior, Dirichlet, Neumann, Ghost };

const char* to_string(NodeRole role);

/// Scattered discretization nodes: positions (one column per node), role
/// tags, outward unit normals for boundary and ghost nodes (zero columns for
/// interior), and the nominal spacing h. Nodes are blocked by role in the
/// order interior, Dirichlet, Neumann, ghost; ghosts, when present, occupy
/// the tail and ghost_parent maps each of them to the boundary node it was
/// offset from.
struct NodeSet {
  Eigen::MatrixXd positions;
  std::vector<NodeRole> roles;
  Eigen::MatrixXd normals;
  double h = 0;
  std::vector<Index> ghost_parent;

  int dim() const { return static_cast<int>(positions.rows()); }
  Index total() const { return positions.cols(); }
  Index count(NodeRole role) const;
  /// Nodes that carry a field value, i.e. everything except ghosts.
  Index n_real() const { return total() - count(NodeRole::Ghost); }
};

struct FillOptions {
  std::uint64_t seed = 0;
  int candidates = 0;      // expansion candidates per node; 0 picks the per-dimension default
  double proximity = 1.0;  // acceptance radius in units of h
};

/// Candidates per front node used by fill: 2, 15, 30, 60, ... for d = 1, 2, 3, 4, ...
int default_candidate_count(int dim);

/// `count` points uniformly distributed on the sphere around `center`. In 1D
/// the sphere is the two-point set {center - radius, center + radius} and
/// count is clamped to 2.
Eigen::MatrixXd sphere_candidates(const Eigen::Ref<const Eigen::VectorXd>& center, double radius,
                                  int count, std::mt19937_64& rng);

/// Advancing-front interior fill. Seeds (kept verbatim, in order) and every
/// subsequently accepted node are expanded in FIFO order by candidate points
/// at distance just above h; a candidate is accepted when it lies in the
/// domain interior and no previous node is within proximity*h. Returns the
/// seeds followed by the accepted interior points. Deterministic for a fixed
/// seed value.
Eigen::MatrixXd fill(const CsgDomain& domain, double h,
                     const Eigen::Ref<const Eigen::MatrixXd>& seeds, const FillOptions& opt = {});

/// Full node pipeline without ghosts: boundary discretization, role
/// classification, interior fill seeded by the boundary points, and block
/// reordering (interior, Dirichlet, Neumann). The classifier must return
/// Dirichlet or Neumann for every boundary point.
NodeSet build_node_set(const CsgDomain& domain, double h,
                       const std::function<NodeRole(const BoundaryPoint&)>& classify,
                       const FillOptions& opt = {});

/// nodes.csv: one row per node with coordinates, role, and normal components
/// (blank for interior nodes). Starts with a schema comment line.
void write_nodes_csv(std::ostream& os, const NodeSet& nodes);

}  // namespace rbffd
