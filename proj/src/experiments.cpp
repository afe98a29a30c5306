#include "mgmpcg/experiments.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mgmpcg/artifacts.hpp"
#include "mgmpcg/preconditioners.hpp"

namespace mgmpcg {

namespace {

// Keep in sync with data/fracture_network.json.
constexpr const char* kDefaultNetwork = R"({
  "k_m": 1.0, "k_f": 10000.0, "delta": 0.01,
  "segments": [
    [0.05, 0.20, 0.60, 0.35], [0.30, 0.05, 0.45, 0.70], [0.10, 0.80, 0.70, 0.55],
    [0.55, 0.15, 0.95, 0.45], [0.60, 0.90, 0.90, 0.30], [0.20, 0.50, 0.50, 0.60],
    [0.70, 0.75, 0.95, 0.85], [0.15, 0.35, 0.25, 0.95], [0.40, 0.85, 0.55, 0.95],
    [0.80, 0.05, 0.85, 0.25]
  ]
})";

template <typename Enum>
Enum parse_enum(const std::string& s, std::initializer_list<std::pair<const char*, Enum>> table,
                const char* what) {
  std::string options;
  for (const auto& [name, value] : table) {
    if (s == name) return value;
    options += options.empty() ? name : std::string("|") + name;
  }
  throw Error(ErrorCode::config, std::string("unknown ") + what + " '" + s + "' (expected " + options + ")");
}

}  // namespace

std::string to_string(ProblemKind p) { return p == ProblemKind::anisotropic ? "anisotropic" : "fracture"; }

std::string to_string(SolverKind s) {
  switch (s) {
    case SolverKind::addmg_mpcg: return "addmg-mpcg";
    case SolverKind::addmg_pcg: return "addmg-pcg";
    case SolverKind::multmg_pcg: return "multmg-pcg";
    case SolverKind::cg: return "cg";
  }
  return "?";
}

std::string to_string(HierarchyKind h) { return h == HierarchyKind::geometric ? "geometric" : "aggregation"; }

std::string to_string(SweepParam p) { return p == SweepParam::kxx ? "kxx" : "kf"; }

ProblemKind parse_problem(const std::string& s) {
  return parse_enum<ProblemKind>(s, {{"anisotropic", ProblemKind::anisotropic}, {"fracture", ProblemKind::fracture}},
                                 "problem");
}

SolverKind parse_solver(const std::string& s) {
  return parse_enum<SolverKind>(s,
                                {{"addmg-mpcg", SolverKind::addmg_mpcg},
                                 {"addmg-pcg", SolverKind::addmg_pcg},
                                 {"multmg-pcg", SolverKind::multmg_pcg},
                                 {"cg", SolverKind::cg}},
                                "solver");
}

HierarchyKind parse_hierarchy(const std::string& s) {
  return parse_enum<HierarchyKind>(
      s, {{"geometric", HierarchyKind::geometric}, {"aggregation", HierarchyKind::aggregation}}, "hierarchy");
}

SweepParam parse_sweep_param(const std::string& s) {
  return parse_enum<SweepParam>(s, {{"kxx", SweepParam::kxx}, {"kf", SweepParam::kf}}, "sweep parameter");
}

HierarchyKind ExperimentConfig::resolved_hierarchy() const {
  if (hierarchy) return *hierarchy;
  return problem == ProblemKind::anisotropic ? HierarchyKind::geometric : HierarchyKind::aggregation;
}

SolverConfig ExperimentConfig::solver_config() const {
  return SolverConfig{tol_rel, max_iters, m, gram_drop_tol};
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::config, msg); };
  if (nx < 1 || resolved_ny() < 1) fail("--nx (and ny) must be >= 1");
  if (levels < 1) fail("--levels must be >= 1");
  if (levels > 24) fail("--levels is unreasonably large");
  if (resolved_hierarchy() == HierarchyKind::geometric) {
    const Index factor = Index{1} << (levels - 1);
    if (nx % factor != 0 || resolved_ny() % factor != 0) {
      fail("geometric hierarchy with " + std::to_string(levels) + " levels needs nx and ny divisible by " +
           std::to_string(factor) + " (got nx=" + std::to_string(nx) + ", ny=" + std::to_string(resolved_ny()) + ")");
    }
  }
  if (!(strength_tol > 0.0 && strength_tol < 1.0)) fail("strength_tol must lie in (0,1)");
  if (!(kxx > 0.0) || !(kyy > 0.0)) fail("--kxx and kyy must be > 0");
  if (k_f && !(*k_f > 0.0)) fail("--kf must be > 0");
  if (k_m && !(*k_m > 0.0)) fail("--km must be > 0");
  if (delta && !(*delta > 0.0)) fail("--delta must be > 0");
  if (nu < 1) fail("--nu must be >= 1");
  if (solver == SolverKind::multmg_pcg && nu % 2 != 0) {
    fail("--nu must be even for multmg-pcg (nu/2 pre- and nu/2 post-smoothing steps)");
  }
  if (!(omega > 0.0 && omega < 2.0)) fail("--omega must lie in (0,2)");
  if (m < 1) fail("--m must be >= 1");
  if (!(tol_rel > 0.0)) fail("--tol must be > 0");
  if (max_iters < 1) fail("--max-iters must be >= 1");
  if (!(gram_drop_tol >= 0.0)) fail("gram_drop_tol must be >= 0");
  if (problem == ProblemKind::fracture && !network_file.empty() && !std::filesystem::exists(network_file)) {
    fail("network file '" + network_file + "' does not exist");
  }
}

std::string to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["problem"] = to_string(c.problem);
  j["solver"] = to_string(c.solver);
  j["nx"] = c.nx;
  j["ny"] = c.resolved_ny();
  j["levels"] = c.levels;
  j["hierarchy"] = to_string(c.resolved_hierarchy());
  j["strength-tol"] = c.strength_tol;
  j["kxx"] = c.kxx;
  j["kyy"] = c.kyy;
  j["source"] = c.source;
  j["network"] = c.network_file;
  if (c.k_f) j["kf"] = *c.k_f;
  if (c.k_m) j["km"] = *c.k_m;
  if (c.delta) j["delta"] = *c.delta;
  j["nu"] = c.nu;
  j["omega"] = c.omega;
  j["m"] = c.m;
  j["tol"] = c.tol_rel;
  j["max-iters"] = c.max_iters;
  j["gram-drop-tol"] = c.gram_drop_tol;
  j["parallel-levels"] = c.parallel_levels;
  j["out"] = c.output_dir;
  return j.dump(2);
}

ExperimentConfig config_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("config: invalid JSON: ") + e.what());
  }
  require(j.is_object(), ErrorCode::config, "config: top level must be an object");
  ExperimentConfig c;
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "problem") c.problem = parse_problem(v.get<std::string>());
      else if (key == "solver") c.solver = parse_solver(v.get<std::string>());
      else if (key == "nx") c.nx = v.get<Index>();
      else if (key == "ny") c.ny = v.get<Index>();
      else if (key == "levels") c.levels = v.get<Index>();
      else if (key == "hierarchy") c.hierarchy = parse_hierarchy(v.get<std::string>());
      else if (key == "strength-tol") c.strength_tol = v.get<double>();
      else if (key == "kxx") c.kxx = v.get<double>();
      else if (key == "kyy") c.kyy = v.get<double>();
      else if (key == "source") c.source = v.get<double>();
      else if (key == "network") c.network_file = v.get<std::string>();
      else if (key == "kf") c.k_f = v.get<double>();
      else if (key == "km") c.k_m = v.get<double>();
      else if (key == "delta") c.delta = v.get<double>();
      else if (key == "nu") c.nu = v.get<int>();
      else if (key == "omega") c.omega = v.get<double>();
      else if (key == "m") c.m = v.get<std::size_t>();
      else if (key == "tol") c.tol_rel = v.get<double>();
      else if (key == "max-iters") c.max_iters = v.get<std::size_t>();
      else if (key == "gram-drop-tol") c.gram_drop_tol = v.get<double>();
      else if (key == "parallel-levels") c.parallel_levels = v.get<bool>();
      else if (key == "out") c.output_dir = v.get<std::string>();
      else throw Error(ErrorCode::config, "config: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::config, std::string("config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::config, "cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

FractureNetwork default_fracture_network() { return parse_fracture_network(kDefaultNetwork); }

FractureNetwork resolve_network(const ExperimentConfig& cfg) {
  FractureNetwork net = cfg.network_file.empty() ? default_fracture_network()
                                                 : load_fracture_network(cfg.network_file);
  if (cfg.k_f) net.k_f = *cfg.k_f;
  if (cfg.k_m) net.k_m = *cfg.k_m;
  if (cfg.delta) net.thickness = *cfg.delta;
  net.validate();
  return net;
}

Problem build_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  Problem p;
  p.grid = StructuredGrid(cfg.nx, cfg.resolved_ny());
  if (cfg.problem == ProblemKind::anisotropic) {
    p.field = DiffusionField::uniform(p.grid, cfg.kxx, cfg.kyy);
    p.system = assemble(p.grid, p.field, BoundarySpec::all_dirichlet(0.0), cfg.source);
  } else {
    p.field = rasterize_fractures(p.grid, resolve_network(cfg));
    BoundarySpec bc;
    bc[Side::left] = BoundaryCondition::neumann(1.0);
    bc[Side::right] = BoundaryCondition::dirichlet(1.0);
    bc[Side::bottom] = BoundaryCondition::neumann(0.0);
    bc[Side::top] = BoundaryCondition::neumann(0.0);
    p.system = assemble(p.grid, p.field, bc, 0.0);
  }
  return p;
}

std::shared_ptr<const LevelHierarchy> build_hierarchy(const ExperimentConfig& cfg, const Problem& problem) {
  if (cfg.resolved_hierarchy() == HierarchyKind::geometric) {
    return std::make_shared<const LevelHierarchy>(
        build_geometric_hierarchy(problem.grid, problem.system.matrix, cfg.levels));
  }
  return std::make_shared<const LevelHierarchy>(
      build_aggregation_hierarchy(problem.system.matrix, cfg.levels, cfg.strength_tol));
}

SolveResult solve(const ExperimentConfig& cfg, const Problem& problem,
                  std::shared_ptr<const LevelHierarchy> hierarchy) {
  const CsrMatrix& a = problem.system.matrix;
  const Vector& b = problem.system.rhs;
  const Vector x0(a.nrows(), 0.0);
  const SolverConfig sc = cfg.solver_config();
  switch (cfg.solver) {
    case SolverKind::addmg_mpcg: {
      const AdditiveMg addmg(std::move(hierarchy), cfg.nu, cfg.omega, cfg.parallel_levels);
      return mpcg(a, b, addmg, sc, x0);
    }
    case SolverKind::addmg_pcg: {
      const AdditiveMg addmg(std::move(hierarchy), cfg.nu, cfg.omega, cfg.parallel_levels);
      return pcg(a, b, [&](std::span<const double> r) { return addmg.apply(r); }, sc, x0);
    }
    case SolverKind::multmg_pcg: {
      const VCycle v(std::move(hierarchy), cfg.nu / 2, cfg.nu / 2, cfg.omega);
      return pcg(a, b, [&](std::span<const double> r) { return v.apply(r); }, sc, x0);
    }
    case SolverKind::cg:
      return pcg(a, b, [](std::span<const double> r) { return Vector(r.begin(), r.end()); }, sc, x0);
  }
  throw Error(ErrorCode::config, "unknown solver");
}

namespace {

RunArtifact run_problem(const ExperimentConfig& cfg) {
  const Problem problem = build_problem(cfg);
  RunArtifact art;
  art.config = cfg;
  std::shared_ptr<const LevelHierarchy> hierarchy;
  if (cfg.solver != SolverKind::cg) {
    hierarchy = build_hierarchy(cfg, problem);
    art.hierarchy_summary = hierarchy_summary(*hierarchy);
  }
  SolveResult result = solve(cfg, problem, hierarchy);
  art.report = std::move(result.report);
  art.solution = std::move(result.x);

  const double bnorm = norm2(problem.system.rhs);
  art.diagnostics["final_rel_res"] = art.report.residual_history.back() / (bnorm > 0.0 ? bnorm : 1.0);
  if (cfg.problem == ProblemKind::fracture) {
    art.diagnostics["right_flux"] = boundary_flux(problem.system, problem.grid, art.solution, Side::right);
    art.diagnostics["left_mean_pressure"] = side_mean(problem.grid, art.solution, Side::left);
  }

  if (!cfg.output_dir.empty()) {
    const std::filesystem::path dir = cfg.output_dir;
    std::filesystem::create_directories(dir);
    const std::string stem = to_string(cfg.problem) + "_" + to_string(cfg.solver);
    art.files["config"] = dir / (stem + "_config.json");
    write_text_file(art.files["config"], to_json(cfg));
    art.files["convergence"] = dir / (stem + "_convergence.csv");
    {
      std::ofstream out(art.files["convergence"]);
      require(static_cast<bool>(out), ErrorCode::io, "cannot write " + art.files["convergence"].string());
      write_convergence_csv(out, art.report);
    }
    if (cfg.solver == SolverKind::addmg_mpcg) {
      art.files["alpha"] = dir / (stem + "_alpha.csv");
      std::ofstream out(art.files["alpha"]);
      require(static_cast<bool>(out), ErrorCode::io, "cannot write " + art.files["alpha"].string());
      write_alpha_csv(out, art.report);
    }
    if (hierarchy) {
      art.files["hierarchy"] = dir / (stem + "_hierarchy.json");
      write_text_file(art.files["hierarchy"], art.hierarchy_summary);
    }
  }
  return art;
}

}  // namespace

RunArtifact run_example1(const ExperimentConfig& cfg) {
  require(cfg.problem == ProblemKind::anisotropic, ErrorCode::config,
          "run_example1 needs --problem anisotropic");
  return run_problem(cfg);
}

RunArtifact run_example2(const ExperimentConfig& cfg) {
  require(cfg.problem == ProblemKind::fracture, ErrorCode::config, "run_example2 needs --problem fracture");
  return run_problem(cfg);
}

RunArtifact run(const ExperimentConfig& cfg) {
  return cfg.problem == ProblemKind::anisotropic ? run_example1(cfg) : run_example2(cfg);
}

std::vector<SweepRow> sweep(const ExperimentConfig& base, SweepParam param, const std::vector<double>& values,
                            const std::vector<SolverKind>& solvers) {
  require(!values.empty(), ErrorCode::config, "sweep: empty value list");
  require(!solvers.empty(), ErrorCode::config, "sweep: empty solver list");
  require(param != SweepParam::kxx || base.problem == ProblemKind::anisotropic, ErrorCode::config,
          "sweep: kxx applies to --problem anisotropic");
  require(param != SweepParam::kf || base.problem == ProblemKind::fracture, ErrorCode::config,
          "sweep: kf applies to --problem fracture");
  std::vector<SweepRow> rows;
  for (double v : values) {
    for (SolverKind s : solvers) {
      ExperimentConfig cfg = base;
      cfg.solver = s;
      if (param == SweepParam::kxx) cfg.kxx = v;
      else cfg.k_f = v;
      if (!base.output_dir.empty()) {
        std::ostringstream name;
        name << to_string(param) << '_' << v;
        cfg.output_dir = (std::filesystem::path(base.output_dir) / name.str()).string();
      }
      const RunArtifact art = run(cfg);
      rows.push_back({v, s, art.report.iterations, art.diagnostics.at("final_rel_res"), art.report.converged});
    }
  }
  if (!base.output_dir.empty()) {
    std::filesystem::create_directories(base.output_dir);
    std::ofstream out(std::filesystem::path(base.output_dir) / "sweep.csv");
    require(static_cast<bool>(out), ErrorCode::io, "cannot write sweep.csv");
    write_sweep_csv(out, rows);
  }
  return rows;
}

}  // namespace mgmpcg
