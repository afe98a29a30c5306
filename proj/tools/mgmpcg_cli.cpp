// Command-line driver for the anisotropic-diffusion and fracture-network
// experiments.
//
//   mgmpcg solve --problem anisotropic --solver addmg-mpcg --nx 160 --levels 4 --kxx 1e-6 --out run/
//   mgmpcg sweep --problem fracture --param kf --values 1e-4 1 1e4 --out sweep/
//
// Exit codes: 0 converged, 2 not converged, 1 configuration error.

#include <CLI11.hpp>
#include <iomanip>
#include <iostream>

#include "mgmpcg/artifacts.hpp"
#include "mgmpcg/experiments.hpp"

namespace {

using namespace mgmpcg;

struct Flags {
  std::string config_file;
  std::string problem;
  std::string solver;
  std::string hierarchy;
  Index nx = 0;
  Index ny = 0;
  Index levels = 0;
  double kxx = 0.0, kyy = 0.0, kf = 0.0, km = 0.0, delta = 0.0, source = 0.0;
  double omega = 0.0, tol = 0.0, gram_drop_tol = 0.0, strength_tol = 0.0;
  std::string network;
  int nu = 0;
  std::size_t m = 0, max_iters = 0;
  bool parallel_levels = false;
  std::string out;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_file, "JSON config file (same keys as the flags)");
  app->add_option("--problem", f.problem, "anisotropic | fracture");
  app->add_option("--solver", f.solver, "addmg-mpcg | addmg-pcg | multmg-pcg | cg");
  app->add_option("--hierarchy", f.hierarchy, "geometric | aggregation");
  app->add_option("--nx", f.nx, "elements per side");
  app->add_option("--ny", f.ny, "elements in y (defaults to nx)");
  app->add_option("--levels", f.levels, "number of levels L+1");
  app->add_option("--kxx", f.kxx, "diffusion coefficient in x");
  app->add_option("--kyy", f.kyy, "diffusion coefficient in y");
  app->add_option("--source", f.source, "constant source term (anisotropic problem)");
  app->add_option("--kf", f.kf, "fracture permeability");
  app->add_option("--km", f.km, "matrix permeability");
  app->add_option("--delta", f.delta, "fracture thickness");
  app->add_option("--network", f.network, "fracture network JSON file");
  app->add_option("--nu", f.nu, "smoothing steps per level (V-cycle: nu/2 pre + nu/2 post)");
  app->add_option("--omega", f.omega, "SSOR relaxation factor");
  app->add_option("--m", f.m, "MPCG history length");
  app->add_option("--tol", f.tol, "relative residual tolerance");
  app->add_option("--max-iters", f.max_iters, "iteration cap");
  app->add_option("--gram-drop-tol", f.gram_drop_tol, "relative eigenvalue drop tolerance");
  app->add_option("--strength-tol", f.strength_tol, "aggregation strength threshold");
  app->add_flag("--parallel-levels", f.parallel_levels, "apply additive levels concurrently");
  app->add_option("--out", f.out, "output directory");
}

ExperimentConfig make_config(const CLI::App* app, const Flags& f) {
  ExperimentConfig c = f.config_file.empty() ? ExperimentConfig{} : load_config(f.config_file);
  auto given = [app](const char* name) { return app->count(name) > 0; };
  if (given("--problem")) c.problem = parse_problem(f.problem);
  if (c.problem == ProblemKind::fracture && f.config_file.empty() && !given("--nx")) c.nx = 200;
  if (given("--solver")) c.solver = parse_solver(f.solver);
  if (given("--hierarchy")) c.hierarchy = parse_hierarchy(f.hierarchy);
  if (given("--nx")) c.nx = f.nx;
  if (given("--ny")) c.ny = f.ny;
  if (given("--levels")) c.levels = f.levels;
  if (given("--kxx")) c.kxx = f.kxx;
  if (given("--kyy")) c.kyy = f.kyy;
  if (given("--source")) c.source = f.source;
  if (given("--kf")) c.k_f = f.kf;
  if (given("--km")) c.k_m = f.km;
  if (given("--delta")) c.delta = f.delta;
  if (given("--network")) c.network_file = f.network;
  if (given("--nu")) c.nu = f.nu;
  if (given("--omega")) c.omega = f.omega;
  if (given("--m")) c.m = f.m;
  if (given("--tol")) c.tol_rel = f.tol;
  if (given("--max-iters")) c.max_iters = f.max_iters;
  if (given("--gram-drop-tol")) c.gram_drop_tol = f.gram_drop_tol;
  if (given("--strength-tol")) c.strength_tol = f.strength_tol;
  if (given("--parallel-levels")) c.parallel_levels = f.parallel_levels;
  if (given("--out")) c.output_dir = f.out;
  c.validate();
  return c;
}

int run_solve(const CLI::App* app, const Flags& f) {
  const ExperimentConfig cfg = make_config(app, f);
  const RunArtifact art = run(cfg);
  const auto& rep = art.report;
  std::cout << "problem=" << to_string(cfg.problem) << " solver=" << to_string(cfg.solver)
            << " n=" << art.solution.size() << " iterations=" << rep.iterations
            << " converged=" << (rep.converged ? "yes" : "no") << std::setprecision(3)
            << " rel_res=" << art.diagnostics.at("final_rel_res") << " time=" << rep.wall_time << "s\n";
  if (rep.rank_deficiency_events > 0) {
    std::cout << "rank-deficient Gram matrices: " << rep.rank_deficiency_events << "\n";
  }
  for (const auto& [name, path] : art.files) std::cout << name << ": " << path.string() << "\n";
  return rep.converged ? 0 : 2;
}

int run_sweep(const CLI::App* app, const Flags& f, const std::string& param_name,
              const std::vector<double>& values, const std::vector<std::string>& solver_names) {
  const SweepParam param = parse_sweep_param(param_name);
  ExperimentConfig base = make_config(app, f);
  if (param == SweepParam::kf && app->count("--problem") == 0 && f.config_file.empty()) {
    base.problem = ProblemKind::fracture;
    if (app->count("--nx") == 0) base.nx = 200;
    base.validate();
  }
  std::vector<SolverKind> solvers;
  for (const auto& s : solver_names) solvers.push_back(parse_solver(s));
  const auto rows = sweep(base, param, values, solvers);
  write_sweep_csv(std::cout, rows);
  for (const auto& r : rows) {
    if (!r.converged) return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Additive multigrid with multipreconditioned CG: experiment driver"};
  app.require_subcommand(1);

  Flags solve_flags;
  CLI::App* solve_cmd = app.add_subcommand("solve", "run one configuration");
  add_common(solve_cmd, solve_flags);

  Flags sweep_flags;
  std::string param;
  std::vector<double> values;
  std::vector<std::string> solver_names{"multmg-pcg", "addmg-mpcg", "addmg-pcg"};
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep over several solvers");
  add_common(sweep_cmd, sweep_flags);
  sweep_cmd->add_option("--param", param, "kxx | kf")->required();
  sweep_cmd->add_option("--values", values, "parameter values")->required()->delimiter(',');
  sweep_cmd->add_option("--solvers", solver_names, "solvers to compare")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*solve_cmd) return run_solve(solve_cmd, solve_flags);
    return run_sweep(sweep_cmd, sweep_flags, param, values, solver_names);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::config || e.code() == ErrorCode::io ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
