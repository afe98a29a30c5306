#pragma once

#include <filesystem>
#include <iosfwd>

#include "mgmpcg/csr_matrix.hpp"

namespace mgmpcg {

/// MatrixMarket coordinate real (general or symmetric), 1-indexed. Symmetric
/// matrices are written as their lower triangle.
void write_matrix_market(std::ostream& out, const CsrMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const CsrMatrix& a);

CsrMatrix read_matrix_market(std::istream& in);
CsrMatrix read_matrix_market(const std::filesystem::path& path);

}  // namespace mgmpcg
