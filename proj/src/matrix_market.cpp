#include "mgmpcg/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

namespace mgmpcg {

void write_matrix_market(std::ostream& out, const CsrMatrix& a) {
  const bool sym = a.symmetric();
  out << "%%MatrixMarket matrix coordinate real " << (sym ? "symmetric" : "general") << '\n';
  Index count = 0;
  for (Index i = 0; i < a.nrows(); ++i) {
    for (Index c : a.row_cols(i)) {
      if (!sym || c <= i) ++count;
    }
  }
  out << a.nrows() << ' ' << a.ncols() << ' ' << count << '\n';
  out << std::setprecision(17);
  for (Index i = 0; i < a.nrows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (sym && cols[k] > i) continue;
      out << i + 1 << ' ' << cols[k] + 1 << ' ' << vals[k] << '\n';
    }
  }
}

void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& a) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io, "cannot open " + path.string() + " for writing");
  write_matrix_market(out, a);
}

CsrMatrix read_matrix_market(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorCode::io, "MatrixMarket: empty input");
  std::string lower = line;
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  require(lower.rfind("%%matrixmarket matrix coordinate real", 0) == 0, ErrorCode::io,
          "MatrixMarket: unsupported header '" + line + "'");
  const bool sym = lower.find("symmetric") != std::string::npos;
  require(sym || lower.find("general") != std::string::npos, ErrorCode::io,
          "MatrixMarket: expected 'general' or 'symmetric'");
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream size_line(line);
  Index nrows = 0, ncols = 0, count = 0;
  require(static_cast<bool>(size_line >> nrows >> ncols >> count), ErrorCode::io,
          "MatrixMarket: bad size line");
  std::vector<Triplet> entries;
  entries.reserve(sym ? 2 * count : count);
  for (Index k = 0; k < count; ++k) {
    Index i = 0, j = 0;
    double v = 0.0;
    require(static_cast<bool>(in >> i >> j >> v), ErrorCode::io, "MatrixMarket: truncated entries");
    require(i >= 1 && j >= 1 && i <= nrows && j <= ncols, ErrorCode::io,
            "MatrixMarket: index out of range");
    entries.push_back({i - 1, j - 1, v});
    if (sym && i != j) entries.push_back({j - 1, i - 1, v});
  }
  return CsrMatrix::from_triplets(nrows, ncols, std::move(entries), sym);
}

CsrMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io, "cannot open " + path.string());
  return read_matrix_market(in);
}

}  // namespace mgmpcg
