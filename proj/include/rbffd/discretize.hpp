#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <iosfwd>
#include <vector>

#include "rbffd/monomials.hpp"
#include "rbffd/nodegen.hpp"
#include "rbffd/phs.hpp"
#include "rbffd/types.hpp"

namespace rbffd {

/// Appends one ghost node per boundary node, offset by h along the outward
/// normal, and records the pairing in ghost_parent. When a domain is passed,
/// ghosts that land back inside it (concave regions) are counted and a
/// warning is printed to stderr; the nodes are kept either way.
NodeSet add_ghosts(const NodeSet& nodes, double h, const CsgDomain* domain = nullptr);

/// n-nearest-node stencils (the node itself first) for every non-ghost node,
/// drawn from all nodes including ghosts. Ghost entries stay empty.
std::vector<std::vector<Index>> select_stencils(const NodeSet& nodes, Index n);

/// Per-node operator weights: Laplacian rows for every non-ghost node and
/// one first-derivative row per axis for Neumann nodes. Entries for ghosts
/// stay empty.
struct WeightStore {
  Index stencil_n = 0;
  std::vector<std::vector<Index>> stencils;
  std::vector<Eigen::VectorXd> laplacian;
  std::vector<Eigen::MatrixXd> gradient;  // d x n, Neumann nodes only
};

/// Computes all weights needed for assembly, factoring the collocation
/// system once per node and reusing it across operators. Node order in the
/// output is independent of the thread count. Unisolvency failures are
/// rethrown with the offending node index.
WeightStore compute_all_weights(const NodeSet& nodes, std::vector<std::vector<Index>> stencils,
                                const PhsBasis& phs, const MonomialBasis& mono, int threads = 1);

/// Poisson problem data: equation right-hand side, Dirichlet values, and
/// Neumann flux (x, outward unit normal) -> normal derivative.
struct PoissonProblem {
  std::function<double(const Eigen::VectorXd&)> rhs;
  std::function<double(const Eigen::VectorXd&)> dirichlet;
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> neumann;
};

struct SparseSystem {
  Eigen::SparseMatrix<double, Eigen::RowMajor> matrix;
  Eigen::VectorXd rhs;
  std::vector<Index> row_node;  // row index -> node index
};

/// Square sparse collocation system over all nodes including ghosts.
/// Interior rows collocate the equation at the node, Dirichlet rows pin the
/// value, Neumann rows impose the normal derivative, and each ghost row
/// collocates the equation a second time at its parent boundary node.
SparseSystem assemble(const NodeSet& nodes, const WeightStore& weights,
                      const PoissonProblem& problem);

/// One "row col value" triplet per line, preceded by a size header line.
void write_triplets(std::ostream& os, const SparseSystem& system);

/// weights.csv: one row per stored operator row (center index, operator tag,
/// space-separated stencil indices, space-separated weights).
void write_weights_csv(std::ostream& os, const WeightStore& weights);

}  // namespace rbffd
