#include "rbffd/discretize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iostream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "rbffd/kdtree.hpp"
#include "rbffd/weights.hpp"

namespace rbffd {

NodeSet add_ghosts(const NodeSet& nodes, double h, const CsgDomain* domain) {
  if (!(h > 0)) throw std::invalid_argument("add_ghosts: h must be positive");
  if (nodes.count(NodeRole::Ghost) != 0)
    throw std::invalid_argument("add_ghosts: node set already has ghosts");

  std::vector<Index> parents;
  for (Index i = 0; i < nodes.total(); ++i) {
    const NodeRole role = nodes.roles[static_cast<size_t>(i)];
    if (role != NodeRole::Dirichlet && role != NodeRole::Neumann) continue;
    if (std::abs(nodes.normals.col(i).norm() - 1.0) > 1e-9)
      throw std::invalid_argument("add_ghosts: boundary node " + std::to_string(i) +
                                  " has no unit normal");
    parents.push_back(i);
  }

  const Index n = nodes.total();
  const auto ng = static_cast<Index>(parents.size());
  NodeSet out = nodes;
  out.positions.conservativeResize(Eigen::NoChange, n + ng);
  out.normals.conservativeResize(Eigen::NoChange, n + ng);
  out.roles.resize(static_cast<size_t>(n + ng), NodeRole::Ghost);
  out.ghost_parent = parents;

  Index inside = 0;
  for (Index g = 0; g < ng; ++g) {
    const Index p = parents[static_cast<size_t>(g)];
    out.positions.col(n + g) = nodes.positions.col(p) + h * nodes.normals.col(p);
    out.normals.col(n + g) = nodes.normals.col(p);
    if (domain && domain->contains(out.positions.col(n + g))) ++inside;
  }
  if (inside > 0)
    std::cerr << "add_ghosts: warning: " << inside
              << " ghost node(s) fall back inside the domain (concave boundary); keeping them\n";
  return out;
}

std::vector<std::vector<Index>> select_stencils(const NodeSet& nodes, Index n) {
  if (n < 1) throw std::invalid_argument("select_stencils: stencil size must be >= 1");
  if (n > nodes.total())
    throw std::invalid_argument("select_stencils: stencil size " + std::to_string(n) +
                                " exceeds the node count " + std::to_string(nodes.total()));
  const KdTree tree(nodes.positions);
  std::vector<std::vector<Index>> out(static_cast<size_t>(nodes.total()));
  for (Index i = 0; i < nodes.total(); ++i) {
    if (nodes.roles[static_cast<size_t>(i)] == NodeRole::Ghost) continue;
    std::vector<Index> st = tree.knn(nodes.positions.col(i), n);
    // the node is its own nearest neighbor; keep it in front even if a
    // duplicate position ties with a lower index
    if (st[0] != i) {
      auto it = std::find(st.begin(), st.end(), i);
      if (it == st.end())
        throw std::runtime_error("select_stencils: node " + std::to_string(i) +
                                 " missing from its own stencil");
      std::iter_swap(st.begin(), it);
    }
    out[static_cast<size_t>(i)] = std::move(st);
  }
  return out;
}

WeightStore compute_all_weights(const NodeSet& nodes, std::vector<std::vector<Index>> stencils,
                                const PhsBasis& phs, const MonomialBasis& mono, int threads) {
  if (mono.dim() != nodes.dim())
    throw std::invalid_argument("compute_all_weights: basis dimension mismatch");
  if (stencils.size() != static_cast<size_t>(nodes.total()))
    throw std::invalid_argument("compute_all_weights: one stencil per node required");
  if (threads < 1) threads = 1;

  const int d = nodes.dim();
  WeightStore ws;
  ws.stencils = std::move(stencils);
  for (const auto& st : ws.stencils)
    ws.stencil_n = std::max(ws.stencil_n, static_cast<Index>(st.size()));
  ws.laplacian.resize(static_cast<size_t>(nodes.total()));
  ws.gradient.resize(static_cast<size_t>(nodes.total()));

  std::atomic<Index> next{0};
  std::vector<std::exception_ptr> errors(static_cast<size_t>(threads));

  auto worker = [&](int tid) {
    try {
      for (Index i = next.fetch_add(1); i < nodes.total(); i = next.fetch_add(1)) {
        const auto ui = static_cast<size_t>(i);
        if (nodes.roles[ui] == NodeRole::Ghost) continue;
        const std::vector<Index>& st = ws.stencils[ui];
        if (st.empty())
          throw std::invalid_argument("compute_all_weights: node " + std::to_string(i) +
                                      " has an empty stencil");
        Eigen::MatrixXd pts(d, static_cast<Index>(st.size()));
        for (size_t j = 0; j < st.size(); ++j) pts.col(static_cast<Index>(j)) = nodes.positions.col(st[j]);
        try {
          const StencilSystem<double> sys(pts, phs, mono);
          ws.laplacian[ui] = sys.solve(OperatorDescriptor::laplacian()).weights;
          if (nodes.roles[ui] == NodeRole::Neumann) {
            Eigen::MatrixXd grad(d, static_cast<Index>(st.size()));
            for (int a = 0; a < d; ++a)
              grad.row(a) = sys.solve(OperatorDescriptor::partial(a)).weights.transpose();
            ws.gradient[ui] = std::move(grad);
          }
        } catch (const UnisolventFailure& e) {
          throw UnisolventFailure("node " + std::to_string(i) + ": " + e.what(), e.rcond());
        }
      }
    } catch (...) {
      errors[static_cast<size_t>(tid)] = std::current_exception();
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return ws;
}

SparseSystem assemble(const NodeSet& nodes, const WeightStore& weights,
                      const PoissonProblem& problem) {
  const Index n_total = nodes.total();
  if (weights.stencils.size() != static_cast<size_t>(n_total))
    throw std::invalid_argument("assemble: weight store does not match the node set");
  if (!problem.rhs || !problem.dirichlet)
    throw std::invalid_argument("assemble: rhs and dirichlet callbacks are required");
  if (nodes.count(NodeRole::Neumann) > 0 && !problem.neumann)
    throw std::invalid_argument("assemble: neumann callback required for Neumann nodes");

  const Index n_ghost = nodes.count(NodeRole::Ghost);
  const Index first_ghost = n_total - n_ghost;

  auto laplacian_row = [&](Index row, Index node, std::vector<Eigen::Triplet<double>>& trip) {
    const auto un = static_cast<size_t>(node);
    const Eigen::VectorXd& w = weights.laplacian[un];
    const std::vector<Index>& st = weights.stencils[un];
    if (w.size() == 0 || static_cast<size_t>(w.size()) != st.size())
      throw std::invalid_argument("assemble: missing Laplacian weights for node " +
                                  std::to_string(node));
    for (size_t j = 0; j < st.size(); ++j)
      trip.emplace_back(static_cast<int>(row), static_cast<int>(st[j]), w[static_cast<Index>(j)]);
  };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(n_total) * static_cast<size_t>(std::max<Index>(weights.stencil_n, 1)));
  Eigen::VectorXd rhs(n_total);
  std::vector<Index> row_node(static_cast<size_t>(n_total));

  for (Index i = 0; i < n_total; ++i) {
    const auto ui = static_cast<size_t>(i);
    row_node[ui] = i;
    switch (nodes.roles[ui]) {
      case NodeRole::Interior:
        laplacian_row(i, i, trip);
        rhs[i] = problem.rhs(nodes.positions.col(i));
        break;
      case NodeRole::Dirichlet:
        trip.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
        rhs[i] = problem.dirichlet(nodes.positions.col(i));
        break;
      case NodeRole::Neumann: {
        const Eigen::MatrixXd& g = weights.gradient[ui];
        const std::vector<Index>& st = weights.stencils[ui];
        if (g.size() == 0 || static_cast<size_t>(g.cols()) != st.size())
          throw std::invalid_argument("assemble: missing gradient weights for node " +
                                      std::to_string(i));
        const Eigen::VectorXd combo = g.transpose() * nodes.normals.col(i);
        for (size_t j = 0; j < st.size(); ++j)
          trip.emplace_back(static_cast<int>(i), static_cast<int>(st[j]), combo[static_cast<Index>(j)]);
        rhs[i] = problem.neumann(nodes.positions.col(i), nodes.normals.col(i));
        break;
      }
      case NodeRole::Ghost: {
        const Index parent = nodes.ghost_parent[static_cast<size_t>(i - first_ghost)];
        laplacian_row(i, parent, trip);
        rhs[i] = problem.rhs(nodes.positions.col(parent));
        break;
      }
    }
  }

  SparseSystem sys;
  sys.matrix.resize(n_total, n_total);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  sys.rhs = std::move(rhs);
  sys.row_node = std::move(row_node);
  return sys;
}

void write_triplets(std::ostream& os, const SparseSystem& system) {
  os.precision(17);
  os << system.matrix.rows() << " " << system.matrix.cols() << " " << system.matrix.nonZeros()
     << "\n";
  for (Index k = 0; k < system.matrix.outerSize(); ++k)
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(system.matrix, k); it;
         ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

namespace {

void write_weight_row(std::ostream& os, Index center, const std::string& op,
                      const std::vector<Index>& st, const Eigen::VectorXd& w) {
  os << center << "," << op << ",\"";
  for (size_t j = 0; j < st.size(); ++j) os << (j ? " " : "") << st[j];
  os << "\",\"";
  for (Index j = 0; j < w.size(); ++j) os << (j ? " " : "") << w[j];
  os << "\"\n";
}

}  // namespace

void write_weights_csv(std::ostream& os, const WeightStore& weights) {
  os << "# schema=weights-v1\n";
  os << "center,op,indices,weights\n";
  os.precision(17);
  for (size_t i = 0; i < weights.stencils.size(); ++i) {
    const auto ci = static_cast<Index>(i);
    if (weights.laplacian[i].size() > 0)
      write_weight_row(os, ci, "laplacian", weights.stencils[i], weights.laplacian[i]);
    if (weights.gradient[i].size() > 0)
      for (Index a = 0; a < weights.gradient[i].rows(); ++a)
        write_weight_row(os, ci, "d" + std::to_string(a), weights.stencils[i],
                         weights.gradient[i].row(a).transpose());
  }
}

}  // namespace rbffd
