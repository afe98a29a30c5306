#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mgmpcg/fem.hpp"
#include "mgmpcg/fractures.hpp"
#include "mgmpcg/hierarchy.hpp"
#include "mgmpcg/krylov.hpp"

namespace mgmpcg {

enum class ProblemKind { anisotropic, fracture };
enum class SolverKind { addmg_mpcg, addmg_pcg, multmg_pcg, cg };

std::string to_string(ProblemKind p);
std::string to_string(SolverKind s);
std::string to_string(HierarchyKind h);
ProblemKind parse_problem(const std::string& s);
SolverKind parse_solver(const std::string& s);
HierarchyKind parse_hierarchy(const std::string& s);

/// Everything needed to reproduce one run. Optional fields fall back to
/// problem-specific defaults (see resolved()).
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::anisotropic;
  SolverKind solver = SolverKind::addmg_mpcg;
  Index nx = 160;
  std::optional<Index> ny;  // defaults to nx
  Index levels = 4;         // L + 1
  std::optional<HierarchyKind> hierarchy;  // geometric (anisotropic) / aggregation (fracture)
  double strength_tol = 0.25;

  // anisotropic diffusion
  double kxx = 1.0;
  double kyy = 1.0;
  double source = 1.0;

  // fracture network; k_f, k_m and delta override the network file
  std::string network_file;
  std::optional<double> k_f;
  std::optional<double> k_m;
  std::optional<double> delta;

  int nu = 6;  // additive: nu steps per level; V-cycle: nu/2 pre and nu/2 post
  double omega = 1.0;
  std::size_t m = 5;
  double tol_rel = 1e-8;
  std::size_t max_iters = 2000;
  double gram_drop_tol = 1e-12;
  bool parallel_levels = false;

  std::string output_dir;  // empty: no files written

  /// Throws Error(config) with an actionable message.
  void validate() const;
  Index resolved_ny() const { return ny.value_or(nx); }
  HierarchyKind resolved_hierarchy() const;
  SolverConfig solver_config() const;
};

std::string to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// The network shipped with the project (data/fracture_network.json).
FractureNetwork default_fracture_network();
/// Network file (or the default) with the config's overrides applied.
FractureNetwork resolve_network(const ExperimentConfig& cfg);

struct Problem {
  StructuredGrid grid;
  DiffusionField field;
  LinearSystem system;
};

Problem build_problem(const ExperimentConfig& cfg);
std::shared_ptr<const LevelHierarchy> build_hierarchy(const ExperimentConfig& cfg, const Problem& problem);

/// Solves with the configured method, x0 = 0.
SolveResult solve(const ExperimentConfig& cfg, const Problem& problem,
                  std::shared_ptr<const LevelHierarchy> hierarchy);

struct RunArtifact {
  ExperimentConfig config;
  SolveReport report;
  Vector solution;
  std::string hierarchy_summary;
  std::map<std::string, double> diagnostics;
  std::map<std::string, std::filesystem::path> files;
};

RunArtifact run_example1(const ExperimentConfig& cfg);
RunArtifact run_example2(const ExperimentConfig& cfg);
/// Dispatches on cfg.problem.
RunArtifact run(const ExperimentConfig& cfg);

enum class SweepParam { kxx, kf };
SweepParam parse_sweep_param(const std::string& s);
std::string to_string(SweepParam p);

struct SweepRow {
  double param = 0.0;
  SolverKind solver = SolverKind::addmg_mpcg;
  std::size_t iters = 0;
  double final_rel_res = 0.0;
  bool converged = false;
};

/// One run per (value, solver). Files of the individual runs are written
/// below output_dir when it is set; the summary table goes to sweep.csv.
std::vector<SweepRow> sweep(const ExperimentConfig& base, SweepParam param,
                            const std::vector<double>& values, const std::vector<SolverKind>& solvers);

}  // namespace mgmpcg
