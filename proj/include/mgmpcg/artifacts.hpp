#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mgmpcg/experiments.hpp"

namespace mgmpcg {

// CSV schemas:
//   convergence: iter,res_2norm
//   alpha:       iter,level,alpha_value   (level 0 = coarsest)
//   sweep:       param,solver,iters,final_rel_res
// Reals are written with 17 significant digits so re-parsing is exact.

void write_convergence_csv(std::ostream& out, const SolveReport& report);
std::vector<double> read_convergence_csv(std::istream& in);

void write_alpha_csv(std::ostream& out, const SolveReport& report);
std::vector<std::vector<double>> read_alpha_csv(std::istream& in);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mgmpcg
