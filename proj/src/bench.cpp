#include "rbffd/bench.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "rbffd/monomials.hpp"
#include "rbffd/weights.hpp"

namespace rbffd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void check_order(int order) {
  if (order != -1 && order != 0 && (order < 2 || order % 2 != 0))
    throw std::invalid_argument("order must be -1, 0, or a positive even integer, got " +
                                std::to_string(order));
}

Eigen::VectorXd constant_vec(int dim, double v) { return Eigen::VectorXd::Constant(dim, v); }

}  // namespace

const char* to_string(SolverChoice choice) {
  switch (choice) {
    case SolverChoice::Direct: return "direct";
    case SolverChoice::BiCgStab: return "bicgstab";
  }
  throw std::invalid_argument("to_string: unknown solver choice");
}

CaseArtifacts run_case_artifacts(const CaseConfig& cfg) {
  check_order(cfg.order);
  if (!(cfg.h > 0)) throw std::invalid_argument("run_case: h must be positive");
  const int d = cfg.domain.dim();
  const MonomialBasis mono(d, cfg.order);
  const PhsBasis phs(cfg.phs_k);
  const Index n_stencil =
      cfg.stencil_override > 0 ? cfg.stencil_override : stencil_size(cfg.order, d);
  const ManufacturedPoisson mp(d);

  CaseArtifacts art;
  RunRecord& rec = art.record;
  rec.dim = d;
  rec.order = cfg.order;
  rec.phs_k = cfg.phs_k;
  rec.stencil = n_stencil;
  rec.h = cfg.h;
  rec.solver = to_string(cfg.solver);
  rec.seed = cfg.seed;
  rec.threads = cfg.threads;

  const auto t_start = Clock::now();

  // node positioning: boundary, interior fill, ghosts, stencil search
  std::vector<std::vector<Index>> stencils;
  try {
    FillOptions fill_opt = cfg.fill;
    fill_opt.seed = cfg.seed;
    art.nodes = build_node_set(
        cfg.domain, cfg.h,
        [&](const BoundaryPoint& bp) { return classify_boundary(bp, cfg.rule); }, fill_opt);
    art.nodes = add_ghosts(art.nodes, cfg.h, &cfg.domain);
    stencils = select_stencils(art.nodes, n_stencil);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("run_case: node positioning failed: ") + e.what());
  }
  rec.times.nodes = seconds_since(t_start);
  rec.n_total = art.nodes.total();
  rec.n_interior = art.nodes.count(NodeRole::Interior);
  rec.n_dirichlet = art.nodes.count(NodeRole::Dirichlet);
  rec.n_neumann = art.nodes.count(NodeRole::Neumann);
  rec.n_ghost = art.nodes.count(NodeRole::Ghost);

  const auto t_weights = Clock::now();
  art.weights = compute_all_weights(art.nodes, std::move(stencils), phs, mono, cfg.threads);
  rec.times.weights = seconds_since(t_weights);

  const auto t_assembly = Clock::now();
  PoissonProblem problem;
  problem.rhs = [&mp](const Eigen::VectorXd& x) { return mp.laplacian(x); };
  problem.dirichlet = [&mp](const Eigen::VectorXd& x) { return mp.value(x); };
  problem.neumann = [&mp](const Eigen::VectorXd& x, const Eigen::VectorXd& n) {
    return n.dot(mp.gradient(x));
  };
  try {
    art.system = assemble(art.nodes, art.weights, problem);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("run_case: assembly failed: ") + e.what());
  }
  rec.times.assembly = seconds_since(t_assembly);

  const auto t_solve = Clock::now();
  try {
    if (cfg.solver == SolverChoice::Direct) {
      art.solve = solve_direct(art.system);
    } else {
      const IterativeSettings settings =
          cfg.iterative ? *cfg.iterative : IterativeSettings::for_dimension(d);
      art.solve = solve_iterative(art.system, settings);
    }
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("run_case: solve failed: ") + e.what());
  }
  rec.times.solve = seconds_since(t_solve);
  rec.status = art.solve.status;
  rec.iterations = art.solve.iterations;
  rec.residual = art.solve.residual;

  const Index n_real = art.nodes.n_real();
  Eigen::VectorXd exact(n_real);
  for (Index i = 0; i < n_real; ++i) exact[i] = mp.value(art.nodes.positions.col(i));
  const ErrorReport err = error_norms(art.solve.solution.head(n_real), exact);
  rec.e1 = err.e1;
  rec.e2 = err.e2;
  rec.e_inf = err.e_inf;

  rec.times.total = seconds_since(t_start);
  return art;
}

RunRecord run_case(const CaseConfig& cfg) {
  if (cfg.repeats < 1) throw std::invalid_argument("run_case: repeats must be >= 1");
  std::vector<double> nodes, weights, assembly, solve, total;
  RunRecord rec;
  for (int rep = 0; rep < cfg.repeats; ++rep) {
    CaseArtifacts art = run_case_artifacts(cfg);
    nodes.push_back(art.record.times.nodes);
    weights.push_back(art.record.times.weights);
    assembly.push_back(art.record.times.assembly);
    solve.push_back(art.record.times.solve);
    total.push_back(art.record.times.total);
    rec = std::move(art.record);
  }
  rec.times.nodes = median(nodes);
  rec.times.weights = median(weights);
  rec.times.assembly = median(assembly);
  rec.times.solve = median(solve);
  rec.times.total = median(total);
  return rec;
}

double fit_order(std::vector<std::pair<double, double>> pts) {
  for (const auto& [h, e] : pts)
    if (!(h > 0) || !(e > 0) || !std::isfinite(e))
      throw std::invalid_argument("fit_order: spacings and errors must be positive and finite");
  std::sort(pts.begin(), pts.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  // cut after the first error minimum: refinements beyond it only probe the
  // stagnation floor
  size_t cut = 0;
  for (size_t i = 1; i < pts.size(); ++i)
    if (pts[i].second < pts[cut].second) cut = i;
  pts.resize(cut + 1);
  if (pts.size() < 3)
    throw std::invalid_argument("fit_order: need at least three usable (h, error) pairs");

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [h, e] : pts) {
    const double x = std::log(h), y = std::log(e);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const auto n = static_cast<double>(pts.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw std::invalid_argument("fit_order: degenerate spacing schedule");
  return (n * sxy - sx * sy) / denom;
}

std::vector<TradeoffRow> tradeoff_table(const std::vector<RunRecord>& records) {
  if (records.empty()) return {};
  int max_band = 0;
  for (const RunRecord& r : records)
    if (r.e_inf > 0 && std::isfinite(r.e_inf))
      max_band = std::max(max_band, static_cast<int>(std::floor(-std::log10(r.e_inf))));

  std::vector<TradeoffRow> rows;
  for (int b = 0; b <= max_band; ++b) {
    const double cap = std::pow(10.0, -b);
    const RunRecord* best = nullptr;
    for (const RunRecord& r : records) {
      if (!(r.e_inf <= cap) || !std::isfinite(r.e_inf)) continue;
      if (!best || r.times.total < best->times.total) best = &r;
    }
    if (best) rows.push_back({b, best->order, best->times.total, best->e_inf});
  }
  return rows;
}

Eigen::VectorXcd spectrum(const NodeSet& nodes, const WeightStore& weights, Index max_n) {
  std::vector<Index> interior;
  for (Index i = 0; i < nodes.total(); ++i)
    if (nodes.roles[static_cast<size_t>(i)] == NodeRole::Interior) interior.push_back(i);
  const auto ni = static_cast<Index>(interior.size());
  if (ni == 0) throw std::invalid_argument("spectrum: no interior nodes");
  if (ni > max_n)
    throw std::invalid_argument("spectrum: " + std::to_string(ni) +
                                " interior nodes exceed the dense-eigensolve cap of " +
                                std::to_string(max_n));

  std::vector<Index> col_of(static_cast<size_t>(nodes.total()), -1);
  for (Index j = 0; j < ni; ++j) col_of[static_cast<size_t>(interior[static_cast<size_t>(j)])] = j;

  Eigen::MatrixXd dmat = Eigen::MatrixXd::Zero(ni, ni);
  for (Index r = 0; r < ni; ++r) {
    const auto node = static_cast<size_t>(interior[static_cast<size_t>(r)]);
    const Eigen::VectorXd& w = weights.laplacian[node];
    const std::vector<Index>& st = weights.stencils[node];
    if (w.size() == 0 || static_cast<size_t>(w.size()) != st.size())
      throw std::invalid_argument("spectrum: missing Laplacian weights for node " +
                                  std::to_string(interior[static_cast<size_t>(r)]));
    for (size_t j = 0; j < st.size(); ++j) {
      const Index c = col_of[static_cast<size_t>(st[j])];
      if (c >= 0) dmat(r, c) += w[static_cast<Index>(j)];
    }
  }
  const Eigen::EigenSolver<Eigen::MatrixXd> es(dmat, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw std::runtime_error("spectrum: eigensolver failed");
  return es.eigenvalues();
}

CsgDomain benchmark_domain(int dim) {
  if (dim < 1) throw std::invalid_argument("benchmark_domain: dimension must be >= 1");
  std::vector<Ball> pos;
  pos.emplace_back(constant_vec(dim, 0.5), 0.5);
  pos.emplace_back(constant_vec(dim, 0.2), 0.25);
  std::vector<Ball> neg;
  neg.emplace_back(constant_vec(dim, 0.5), 0.1);
  neg.emplace_back(constant_vec(dim, 1.0), 0.5);
  return CsgDomain(std::move(pos), std::move(neg));
}

CsgDomain benchmark_domain_4d() {
  std::vector<Ball> pos;
  pos.emplace_back(constant_vec(4, 0.5), 0.5);
  std::vector<Ball> neg;
  Eigen::VectorXd c1(4), c3(4);
  c1 << 0.5, 1.0, 0.5, 0.5;
  c3 << 0.5, 0.5, 0.75, 0.5;
  neg.emplace_back(c1, 0.25);
  neg.emplace_back(constant_vec(4, 0.0), 13.0 / 16.0);
  neg.emplace_back(c3, 0.125);
  return CsgDomain(std::move(pos), std::move(neg));
}

BoundaryRule benchmark_rule_4d() {
  BoundaryRule rule;
  rule.dirichlet_below = 0.5;
  rule.dirichlet_owners = {3};  // the smallest hole keeps Dirichlet data all around
  return rule;
}

RunRecord scenario_4d(double h, int order, SolverChoice solver, std::uint64_t seed, int repeats,
                      int threads) {
  if (order == 0) order = recommend_order(2.0, 4);
  CaseConfig cfg{benchmark_domain_4d(), benchmark_rule_4d(), order, h};
  cfg.solver = solver;
  cfg.seed = seed;
  cfg.repeats = repeats;
  cfg.threads = threads;
  return run_case(cfg);
}

void StudyConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("StudyConfig: dimension must be >= 1");
  if (domain && domain->dim() != dim)
    throw std::invalid_argument("StudyConfig: domain dimension does not match dim");
  if (orders.empty()) throw std::invalid_argument("StudyConfig: no orders given");
  for (int m : orders) check_order(m);
  if (h_schedule.empty()) throw std::invalid_argument("StudyConfig: no spacings given");
  for (size_t i = 0; i < h_schedule.size(); ++i) {
    if (!(h_schedule[i] > 0)) throw std::invalid_argument("StudyConfig: spacings must be positive");
    if (i > 0 && !(h_schedule[i] < h_schedule[i - 1]))
      throw std::invalid_argument("StudyConfig: spacing schedule must be strictly decreasing");
  }
  if (repeats < 1 || threads < 1)
    throw std::invalid_argument("StudyConfig: repeats and threads must be >= 1");
}

std::vector<RunRecord> run_study(const StudyConfig& study) {
  study.validate();
  const CsgDomain domain = study.domain ? *study.domain : benchmark_domain(study.dim);
  std::vector<RunRecord> out;
  for (int order : study.orders) {
    for (double h : study.h_schedule) {
      CaseConfig cfg{domain, study.rule, order, h};
      cfg.phs_k = study.phs_k;
      cfg.solver = study.solver;
      cfg.seed = study.seed;
      cfg.repeats = study.repeats;
      cfg.threads = study.threads;
      out.push_back(run_case(cfg));
    }
  }
  return out;
}

CsgDomain load_domain_json(const std::string& path, BoundaryRule* rule) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_domain_json: cannot open " + path);
  nlohmann::json j;
  in >> j;

  if (!j.contains("balls") || !j["balls"].is_array() || j["balls"].empty())
    throw std::runtime_error("load_domain_json: config needs a non-empty 'balls' array");
  std::vector<Ball> pos, neg;
  for (const auto& jb : j["balls"]) {
    const auto coords = jb.at("center").get<std::vector<double>>();
    Eigen::VectorXd center(static_cast<Index>(coords.size()));
    for (size_t i = 0; i < coords.size(); ++i) center[static_cast<Index>(i)] = coords[i];
    const auto radius = jb.at("radius").get<double>();
    const auto sign = jb.value("sign", std::string("+"));
    if (sign == "+") pos.emplace_back(center, radius);
    else if (sign == "-") neg.emplace_back(center, radius);
    else throw std::runtime_error("load_domain_json: ball sign must be '+' or '-'");
  }
  if (rule) {
    rule->dirichlet_below = j.value("dirichlet_below", 0.5);
    rule->dirichlet_owners.clear();
    if (j.contains("dirichlet_balls"))
      for (const auto& idx : j["dirichlet_balls"]) rule->dirichlet_owners.push_back(idx.get<Index>());
  }
  return CsgDomain(std::move(pos), std::move(neg));
}

void write_runs_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  os << "# schema=runs-v1\n";
  os << "dim,order,phs_k,stencil,h,n_total,n_interior,n_dirichlet,n_neumann,n_ghost,"
        "e1,e2,e_inf,t_nodes,t_weights,t_assembly,t_solve,t_total,"
        "solver,status,iterations,residual,seed,threads\n";
  os.precision(17);
  for (const RunRecord& r : records) {
    os << r.dim << "," << r.order << "," << r.phs_k << "," << r.stencil << "," << r.h << ","
       << r.n_total << "," << r.n_interior << "," << r.n_dirichlet << "," << r.n_neumann << ","
       << r.n_ghost << "," << r.e1 << "," << r.e2 << "," << r.e_inf << "," << r.times.nodes << ","
       << r.times.weights << "," << r.times.assembly << "," << r.times.solve << ","
       << r.times.total << "," << r.solver << "," << to_string(r.status) << "," << r.iterations
       << "," << r.residual << "," << r.seed << "," << r.threads << "\n";
  }
}

void write_spectrum_csv(std::ostream& os, const Eigen::Ref<const Eigen::VectorXcd>& ev) {
  os << "# schema=spectrum-v1\n";
  os << "real,imag\n";
  os.precision(17);
  for (Index i = 0; i < ev.size(); ++i) os << ev[i].real() << "," << ev[i].imag() << "\n";
}

void write_fits_csv(std::ostream& os, const std::vector<FitResult>& fits) {
  os << "# schema=fits-v1\n";
  os << "dim,order,slope,points\n";
  os.precision(17);
  for (const FitResult& f : fits)
    os << f.dim << "," << f.order << "," << f.slope << "," << f.points << "\n";
}

void write_tradeoff_csv(std::ostream& os, const std::vector<TradeoffRow>& rows) {
  os << "# schema=tradeoff-v1\n";
  os << "accuracy_exponent,order,seconds,e_inf\n";
  os.precision(17);
  for (const TradeoffRow& r : rows)
    os << r.accuracy_exponent << "," << r.order << "," << r.seconds << "," << r.e_inf << "\n";
}

}  // namespace rbffd
