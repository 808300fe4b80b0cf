// Command-line benchmark harness around the rbffd library: node generation,
// single solves, convergence and trade-off studies, operator spectra, and the
// larger 4D scenario. Every subcommand writes CSV files with a schema header
// into the --out directory.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "rbffd/bench.hpp"
#include "rbffd/monomials.hpp"
#include "rbffd/problems.hpp"

namespace {

struct CommonArgs {
  int dim = 2;
  int phs_k = 3;
  std::uint64_t seed = 1;
  int repeats = 3;
  int threads = 1;
  std::string solver = "bicgstab";
  std::string out_dir = ".";
  std::string config;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_dim = true) {
  cmd->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
  if (with_dim) cmd->add_option("--dim", args.dim, "spatial dimension")->check(CLI::Range(1, 10));
  cmd->add_option("--phs-k", args.phs_k, "polyharmonic spline exponent")->check(CLI::Range(1, 9));
  cmd->add_option("--seed", args.seed, "RNG seed");
  cmd->add_option("--repeats", args.repeats, "timing repeats (median is reported)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", args.threads, "worker threads for weight computation")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--solver", args.solver, "linear solver")
      ->check(CLI::IsMember({"direct", "bicgstab"}));
  cmd->add_option("--out", args.out_dir, "output directory for CSV files");
  cmd->add_option("--config", args.config, "JSON domain config file")->check(CLI::ExistingFile);
}

rbffd::SolverChoice parse_solver(const std::string& s) {
  return s == "direct" ? rbffd::SolverChoice::Direct : rbffd::SolverChoice::BiCgStab;
}

// domain + boundary rule: from the JSON config when given, else the built-in
// benchmark geometry for the requested dimension
std::pair<rbffd::CsgDomain, rbffd::BoundaryRule> make_domain(const CommonArgs& args) {
  rbffd::BoundaryRule rule;
  if (!args.config.empty()) {
    rbffd::CsgDomain dom = rbffd::load_domain_json(args.config, &rule);
    if (dom.dim() != args.dim)
      throw CLI::ValidationError("--config", "domain dimension " + std::to_string(dom.dim()) +
                                                 " does not match --dim " +
                                                 std::to_string(args.dim));
    return {std::move(dom), rule};
  }
  return {rbffd::benchmark_domain(args.dim), rule};
}

std::ofstream open_out(const CommonArgs& args, const std::string& name) {
  std::filesystem::create_directories(args.out_dir);
  const auto path = std::filesystem::path(args.out_dir) / name;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  return os;
}

std::vector<double> parse_schedule(const std::string& spec) {
  std::vector<double> out;
  std::string token;
  std::stringstream ss(spec);
  while (std::getline(ss, token, ',')) out.push_back(std::stod(token));
  return out;
}

void print_record(const rbffd::RunRecord& r) {
  std::cout << "dim=" << r.dim << " order=" << r.order << " h=" << r.h << " N=" << r.n_total
            << " (interior " << r.n_interior << ", dirichlet " << r.n_dirichlet << ", neumann "
            << r.n_neumann << ", ghost " << r.n_ghost << ")\n"
            << "errors: e1=" << r.e1 << " e2=" << r.e2 << " e_inf=" << r.e_inf << "\n"
            << "times [s]: nodes=" << r.times.nodes << " weights=" << r.times.weights
            << " assembly=" << r.times.assembly << " solve=" << r.times.solve
            << " total=" << r.times.total << "\n"
            << "solver: " << r.solver << " (" << rbffd::to_string(r.status) << ", "
            << r.iterations << " iterations, residual " << r.residual << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RBF-FD Poisson benchmark harness"};
  app.set_help_flag("--help", "print this help message and exit");
  app.require_subcommand(1);

  // --- nodes ---------------------------------------------------------------
  CommonArgs nodes_args;
  double nodes_h = 0.05;
  auto* cmd_nodes = app.add_subcommand("nodes", "generate a node set and write nodes.csv");
  add_common(cmd_nodes, nodes_args);
  cmd_nodes->add_option("--h", nodes_h, "target spacing")->check(CLI::PositiveNumber);

  // --- solve ---------------------------------------------------------------
  CommonArgs solve_args;
  double solve_h = 0.05;
  int solve_order = 2;
  rbffd::Index solve_stencil = 0;
  bool dump_weights = false, dump_matrix = false;
  auto* cmd_solve = app.add_subcommand("solve", "run one case and write runs.csv");
  add_common(cmd_solve, solve_args);
  cmd_solve->add_option("--h", solve_h, "target spacing")->check(CLI::PositiveNumber);
  cmd_solve->add_option("--order", solve_order, "augmentation degree (-1, 0, or positive even)");
  cmd_solve->add_option("--stencil", solve_stencil, "override the stencil size");
  cmd_solve->add_flag("--dump-weights", dump_weights, "also write weights.csv");
  cmd_solve->add_flag("--dump-matrix", dump_matrix, "also write matrix.txt (triplets)");

  // --- converge ------------------------------------------------------------
  CommonArgs conv_args;
  std::vector<int> conv_orders{2};
  std::string conv_schedule;
  auto* cmd_conv = app.add_subcommand("converge", "h-refinement study; writes runs.csv and fits.csv");
  add_common(cmd_conv, conv_args);
  cmd_conv->add_option("--order", conv_orders, "augmentation degrees to sweep");
  cmd_conv->add_option("--h-schedule", conv_schedule, "comma-separated decreasing spacings")
      ->required();

  // --- tradeoff ------------------------------------------------------------
  CommonArgs trade_args;
  std::vector<int> trade_orders{2, 4, 6};
  std::string trade_schedule;
  auto* cmd_trade =
      app.add_subcommand("tradeoff", "accuracy-vs-time study; writes runs.csv and tradeoff.csv");
  add_common(cmd_trade, trade_args);
  cmd_trade->add_option("--order", trade_orders, "augmentation degrees to sweep");
  cmd_trade->add_option("--h-schedule", trade_schedule, "comma-separated decreasing spacings")
      ->required();

  // --- spectrum ------------------------------------------------------------
  CommonArgs spec_args;
  double spec_h = 0.05;
  int spec_order = 2;
  rbffd::Index spec_max_n = 3000;
  auto* cmd_spec = app.add_subcommand("spectrum", "eigenvalues of the interior operator block");
  add_common(cmd_spec, spec_args);
  cmd_spec->add_option("--h", spec_h, "target spacing")->check(CLI::PositiveNumber);
  cmd_spec->add_option("--order", spec_order, "augmentation degree");
  cmd_spec->add_option("--max-n", spec_max_n, "dense eigensolve cap");

  // --- recommend -----------------------------------------------------------
  double rec_accuracy = 2;
  int rec_dim = 2;
  auto* cmd_rec = app.add_subcommand("recommend", "suggest an augmentation degree");
  cmd_rec->set_help_flag("--help", "print this help message and exit");
  cmd_rec->add_option("--accuracy", rec_accuracy, "target accuracy class k (e_inf ~ 10^-k)")
      ->check(CLI::PositiveNumber);
  cmd_rec->add_option("--dim", rec_dim, "spatial dimension")->check(CLI::Range(1, 10));

  // --- scenario4d ----------------------------------------------------------
  CommonArgs s4_args;
  s4_args.solver = "direct";
  double s4_h = 0.1;
  int s4_order = 0;
  auto* cmd_s4 = app.add_subcommand("scenario4d", "the larger built-in 4D case");
  add_common(cmd_s4, s4_args, /*with_dim=*/false);
  cmd_s4->add_option("--h", s4_h, "target spacing")->check(CLI::PositiveNumber);
  cmd_s4->add_option("--order", s4_order, "augmentation degree; 0 = recommended");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_nodes) {
      auto [domain, rule] = make_domain(nodes_args);
      rbffd::FillOptions fill;
      fill.seed = nodes_args.seed;
      rbffd::NodeSet ns = rbffd::build_node_set(
          domain, nodes_h,
          [&](const rbffd::BoundaryPoint& bp) { return rbffd::classify_boundary(bp, rule); },
          fill);
      auto os = open_out(nodes_args, "nodes.csv");
      rbffd::write_nodes_csv(os, ns);
      std::cout << "wrote " << ns.total() << " nodes (interior "
                << ns.count(rbffd::NodeRole::Interior) << ", dirichlet "
                << ns.count(rbffd::NodeRole::Dirichlet) << ", neumann "
                << ns.count(rbffd::NodeRole::Neumann) << ")\n";
    }

    if (*cmd_solve) {
      auto [domain, rule] = make_domain(solve_args);
      rbffd::CaseConfig cfg{std::move(domain), rule, solve_order, solve_h};
      cfg.phs_k = solve_args.phs_k;
      cfg.solver = parse_solver(solve_args.solver);
      cfg.seed = solve_args.seed;
      cfg.threads = solve_args.threads;
      cfg.stencil_override = solve_stencil;

      rbffd::RunRecord rec;
      if (dump_weights || dump_matrix) {
        rbffd::CaseArtifacts art = rbffd::run_case_artifacts(cfg);
        if (dump_weights) {
          auto os = open_out(solve_args, "weights.csv");
          rbffd::write_weights_csv(os, art.weights);
        }
        if (dump_matrix) {
          auto os = open_out(solve_args, "matrix.txt");
          rbffd::write_triplets(os, art.system);
        }
        rec = art.record;
      } else {
        cfg.repeats = solve_args.repeats;
        rec = rbffd::run_case(cfg);
      }
      auto os = open_out(solve_args, "runs.csv");
      rbffd::write_runs_csv(os, {rec});
      print_record(rec);
    }

    if (*cmd_conv || *cmd_trade) {
      const bool conv = bool(*cmd_conv);
      CommonArgs& args = conv ? conv_args : trade_args;
      rbffd::StudyConfig study;
      auto [domain, rule] = make_domain(args);
      study.domain = std::move(domain);
      study.rule = rule;
      study.dim = args.dim;
      study.orders = conv ? conv_orders : trade_orders;
      study.h_schedule = parse_schedule(conv ? conv_schedule : trade_schedule);
      study.solver = parse_solver(args.solver);
      study.phs_k = args.phs_k;
      study.seed = args.seed;
      study.repeats = args.repeats;
      study.threads = args.threads;

      const std::vector<rbffd::RunRecord> records = rbffd::run_study(study);
      {
        auto os = open_out(args, "runs.csv");
        rbffd::write_runs_csv(os, records);
      }
      if (conv) {
        std::vector<rbffd::FitResult> fits;
        for (int order : study.orders) {
          std::vector<std::pair<double, double>> pts;
          for (const auto& r : records)
            if (r.order == order) pts.emplace_back(r.h, r.e_inf);
          try {
            const double slope = rbffd::fit_order(pts);
            fits.push_back({args.dim, order, slope, static_cast<int>(pts.size())});
            std::cout << "order " << order << ": observed rate " << slope << "\n";
          } catch (const std::exception& e) {
            std::cout << "order " << order << ": fit skipped (" << e.what() << ")\n";
          }
        }
        auto os = open_out(args, "fits.csv");
        rbffd::write_fits_csv(os, fits);
      } else {
        const std::vector<rbffd::TradeoffRow> rows = rbffd::tradeoff_table(records);
        auto os = open_out(args, "tradeoff.csv");
        rbffd::write_tradeoff_csv(os, rows);
        for (const auto& row : rows)
          std::cout << "e_inf <= 1e-" << row.accuracy_exponent << ": order " << row.order
                    << " in " << row.seconds << " s (e_inf " << row.e_inf << ")\n";
      }
    }

    if (*cmd_spec) {
      auto [domain, rule] = make_domain(spec_args);
      rbffd::CaseConfig cfg{std::move(domain), rule, spec_order, spec_h};
      cfg.phs_k = spec_args.phs_k;
      cfg.solver = parse_solver(spec_args.solver);
      cfg.seed = spec_args.seed;
      cfg.threads = spec_args.threads;
      const rbffd::CaseArtifacts art = rbffd::run_case_artifacts(cfg);
      const Eigen::VectorXcd ev = rbffd::spectrum(art.nodes, art.weights, spec_max_n);
      auto os = open_out(spec_args, "spectrum.csv");
      rbffd::write_spectrum_csv(os, ev);
      double max_re = -std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < ev.size(); ++i) max_re = std::max(max_re, ev[i].real());
      std::cout << ev.size() << " eigenvalues, max real part " << max_re << "\n";
    }

    if (*cmd_rec) {
      std::cout << "recommended order: " << rbffd::recommend_order(rec_accuracy, rec_dim) << "\n";
    }

    if (*cmd_s4) {
      const rbffd::RunRecord rec =
          rbffd::scenario_4d(s4_h, s4_order, parse_solver(s4_args.solver), s4_args.seed,
                             s4_args.repeats, s4_args.threads);
      auto os = open_out(s4_args, "runs.csv");
      rbffd::write_runs_csv(os, {rec});
      print_record(rec);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
