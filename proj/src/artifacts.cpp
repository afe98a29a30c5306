#include "mgmpcg/artifacts.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace mgmpcg {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

void expect_header(std::istream& in, const std::string& header) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == header, ErrorCode::io,
          "CSV: expected header '" + header + "'");
}

double to_double(const std::string& s) {
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw Error(ErrorCode::io, "CSV: not a number: '" + s + "'");
  }
}

std::size_t to_count(const std::string& s) {
  try {
    return static_cast<std::size_t>(std::stoull(s));
  } catch (const std::exception&) {
    throw Error(ErrorCode::io, "CSV: not a count: '" + s + "'");
  }
}

}  // namespace

void write_convergence_csv(std::ostream& out, const SolveReport& report) {
  out << "iter,res_2norm\n" << std::setprecision(17);
  for (std::size_t k = 0; k < report.residual_history.size(); ++k) {
    out << k << ',' << report.residual_history[k] << '\n';
  }
}

std::vector<double> read_convergence_csv(std::istream& in) {
  expect_header(in, "iter,res_2norm");
  std::vector<double> res;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    require(f.size() == 2 && to_count(f[0]) == res.size(), ErrorCode::io,
            "convergence CSV: malformed row '" + line + "'");
    res.push_back(to_double(f[1]));
  }
  return res;
}

void write_alpha_csv(std::ostream& out, const SolveReport& report) {
  out << "iter,level,alpha_value\n" << std::setprecision(17);
  for (std::size_t k = 0; k < report.alpha_history.size(); ++k) {
    for (std::size_t l = 0; l < report.alpha_history[k].size(); ++l) {
      out << k << ',' << l << ',' << report.alpha_history[k][l] << '\n';
    }
  }
}

std::vector<std::vector<double>> read_alpha_csv(std::istream& in) {
  expect_header(in, "iter,level,alpha_value");
  std::vector<std::vector<double>> alpha;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    require(f.size() == 3, ErrorCode::io, "alpha CSV: malformed row '" + line + "'");
    const std::size_t k = to_count(f[0]);
    const std::size_t l = to_count(f[1]);
    if (k == alpha.size()) alpha.emplace_back();
    require(k + 1 == alpha.size() && l == alpha.back().size(), ErrorCode::io,
            "alpha CSV: rows out of order at '" + line + "'");
    alpha.back().push_back(to_double(f[2]));
  }
  return alpha;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "param,solver,iters,final_rel_res\n" << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.param << ',' << to_string(r.solver) << ',' << r.iters << ',' << r.final_rel_res << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  expect_header(in, "param,solver,iters,final_rel_res");
  std::vector<SweepRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    require(f.size() == 4, ErrorCode::io, "sweep CSV: malformed row '" + line + "'");
    SweepRow r;
    r.param = to_double(f[0]);
    r.solver = parse_solver(f[1]);
    r.iters = to_count(f[2]);
    r.final_rel_res = to_double(f[3]);
    rows.push_back(r);
  }
  return rows;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io, "cannot write " + path.string());
  out << text;
}

}  // namespace mgmpcg
