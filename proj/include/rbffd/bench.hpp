#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rbffd/discretize.hpp"
#include "rbffd/geometry.hpp"
#include "rbffd/linsolve.hpp"
#include "rbffd/nodegen.hpp"
#include "rbffd/problems.hpp"
#include "rbffd/types.hpp"

namespace rbffd {

enum class SolverChoice { Direct, BiCgStab };

const char* to_string(SolverChoice choice);

/// Wall-clock seconds per pipeline stage. Node positioning covers boundary
/// discretization, interior fill, ghost placement, and stencil search; the
/// stages sum to at most the total, which also covers untimed bookkeeping.
struct StageTimes {
  double nodes = 0;
  double weights = 0;
  double assembly = 0;
  double solve = 0;
  double total = 0;
};

struct RunRecord {
  int dim = 0;
  int order = 0;
  int phs_k = 3;
  Index stencil = 0;
  double h = 0;
  Index n_total = 0;
  Index n_interior = 0;
  Index n_dirichlet = 0;
  Index n_neumann = 0;
  Index n_ghost = 0;
  double e1 = 0;
  double e2 = 0;
  double e_inf = 0;
  StageTimes times;
  std::string solver;
  SolveStatus status = SolveStatus::Converged;
  int iterations = 0;
  double residual = 0;
  std::uint64_t seed = 0;
  int threads = 1;
};

/// One benchmark case: the manufactured Poisson problem on a CSG domain at
/// spacing h with augmentation degree `order` (-1, 0, or positive even).
/// stencil_override = 0 picks the size paired with the order.
struct CaseConfig {
  CaseConfig(CsgDomain dom, BoundaryRule boundary_rule, int augmentation_order, double spacing)
      : domain(std::move(dom)),
        rule(std::move(boundary_rule)),
        order(augmentation_order),
        h(spacing) {}

  CsgDomain domain;
  BoundaryRule rule;
  int order = 2;
  double h = 0.05;
  int phs_k = 3;
  SolverChoice solver = SolverChoice::BiCgStab;
  std::uint64_t seed = 1;
  int repeats = 1;
  int threads = 1;
  Index stencil_override = 0;
  FillOptions fill;
  std::optional<IterativeSettings> iterative;  // defaults to the per-dimension settings
};

/// Everything a single pipeline pass produces; useful for dumps and spectra.
struct CaseArtifacts {
  NodeSet nodes;
  WeightStore weights;
  SparseSystem system;
  SolveReport solve;
  RunRecord record;
};

/// Runs the pipeline once (ignoring CaseConfig::repeats).
CaseArtifacts run_case_artifacts(const CaseConfig& config);

/// Runs the pipeline `repeats` times with identical inputs and reports the
/// record of the last pass with per-stage median times.
RunRecord run_case(const CaseConfig& config);

/// Least-squares slope of log(error) against log(h). Pairs are sorted by
/// decreasing h and trailing entries after the error minimum are dropped
/// (stagnation at the accuracy floor would otherwise bias the fit). Throws
/// when fewer than three usable pairs remain.
double fit_order(std::vector<std::pair<double, double>> h_and_error);

/// Cheapest order per accuracy band: band b holds the runs with
/// e_inf <= 10^-b, and the winner is the run with the smallest total time.
/// Empty bands are omitted.
struct TradeoffRow {
  int accuracy_exponent = 0;
  int order = 0;
  double seconds = 0;
  double e_inf = 0;
};

std::vector<TradeoffRow> tradeoff_table(const std::vector<RunRecord>& records);

/// Eigenvalues of the interior-node block of the Laplacian differentiation
/// matrix (dense solve; refuses more than max_n interior nodes).
Eigen::VectorXcd spectrum(const NodeSet& nodes, const WeightStore& weights, Index max_n = 3000);

/// Built-in benchmark geometry in any dimension: two overlapping balls with
/// two spherical holes; boundary is Dirichlet where x_0 < 1/2, Neumann
/// elsewhere.
CsgDomain benchmark_domain(int dim);

/// Larger 4D case: a ball with three holes, one of which (the smallest,
/// global ball index 3) is kept fully Dirichlet.
CsgDomain benchmark_domain_4d();
BoundaryRule benchmark_rule_4d();

/// Convenience wrapper for the 4D case; order 0 means "use the recommended
/// degree for accuracy class 2".
RunRecord scenario_4d(double h, int order = 0, SolverChoice solver = SolverChoice::Direct,
                      std::uint64_t seed = 1, int repeats = 1, int threads = 1);

/// A sweep over orders and spacings on one domain.
struct StudyConfig {
  std::optional<CsgDomain> domain;  // nullopt -> benchmark_domain(dim)
  BoundaryRule rule;
  int dim = 2;
  std::vector<int> orders = {2};
  std::vector<double> h_schedule;
  SolverChoice solver = SolverChoice::BiCgStab;
  int phs_k = 3;
  std::uint64_t seed = 1;
  int repeats = 1;
  int threads = 1;

  /// Orders must be -1, 0, or positive even; the schedule strictly decreasing.
  void validate() const;
};

std::vector<RunRecord> run_study(const StudyConfig& config);

/// Domain (and optional boundary-rule fields) from a JSON config:
/// {"balls": [{"center": [...], "radius": r, "sign": "+"|"-"}, ...],
///  "dirichlet_below": 0.5, "dirichlet_balls": [3]}
CsgDomain load_domain_json(const std::string& path, BoundaryRule* rule = nullptr);

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records);
void write_spectrum_csv(std::ostream& os, const Eigen::Ref<const Eigen::VectorXcd>& eigenvalues);

struct FitResult {
  int dim = 0;
  int order = 0;
  double slope = 0;
  int points = 0;
};

void write_fits_csv(std::ostream& os, const std::vector<FitResult>& fits);
void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffRow>& rows);

}  // namespace rbffd
