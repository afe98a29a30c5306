#include "mgmpcg/csr_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mgmpcg {

CsrMatrix::CsrMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
                     std::vector<Index> col_indices, std::vector<double> values, bool symmetric)
    : nrows_(nrows),
      ncols_(ncols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)),
      symmetric_(symmetric) {
  require(row_offsets_.size() == nrows_ + 1, ErrorCode::invalid_argument,
          "CsrMatrix: row_offsets must have nrows+1 entries");
  require(row_offsets_.front() == 0, ErrorCode::invalid_argument, "CsrMatrix: row_offsets[0] != 0");
  require(row_offsets_.back() == values_.size() && col_indices_.size() == values_.size(),
          ErrorCode::invalid_argument, "CsrMatrix: row_offsets[nrows] must equal nnz");
  require(!symmetric_ || nrows_ == ncols_, ErrorCode::invalid_argument,
          "CsrMatrix: symmetric flag on a rectangular matrix");
  for (Index i = 0; i < nrows_; ++i) {
    require(row_offsets_[i] <= row_offsets_[i + 1], ErrorCode::invalid_argument,
            "CsrMatrix: row_offsets not monotone at row " + std::to_string(i));
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      require(col_indices_[k] < ncols_, ErrorCode::invalid_argument,
              "CsrMatrix: column index out of range in row " + std::to_string(i));
      require(k == row_offsets_[i] || col_indices_[k - 1] < col_indices_[k],
              ErrorCode::invalid_argument,
              "CsrMatrix: column indices not strictly increasing in row " + std::to_string(i));
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(Index nrows, Index ncols, std::vector<Triplet> entries,
                                   bool symmetric) {
  for (const auto& t : entries) {
    require(t.row < nrows && t.col < ncols, ErrorCode::invalid_argument,
            "from_triplets: entry out of range");
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Index> offsets(nrows + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& t = entries[k];
    if (k > 0 && entries[k - 1].row == t.row && entries[k - 1].col == t.col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
  }
  for (Index i = 0; i < nrows; ++i) offsets[i + 1] += offsets[i];
  return CsrMatrix(nrows, ncols, std::move(offsets), std::move(cols), std::move(vals), symmetric);
}

CsrMatrix CsrMatrix::identity(Index n) {
  std::vector<Index> offsets(n + 1);
  std::vector<Index> cols(n);
  for (Index i = 0; i <= n; ++i) offsets[i] = i;
  for (Index i = 0; i < n; ++i) cols[i] = i;
  return CsrMatrix(n, n, std::move(offsets), std::move(cols), std::vector<double>(n, 1.0), true);
}

double CsrMatrix::at(Index i, Index j) const {
  require(i < nrows_ && j < ncols_, ErrorCode::dimension_mismatch, "CsrMatrix::at out of range");
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_offsets_[i] + static_cast<Index>(it - cols.begin())];
}

Vector CsrMatrix::diagonal() const {
  Vector d(std::min(nrows_, ncols_));
  for (Index i = 0; i < d.size(); ++i) d[i] = at(i, i);
  return d;
}

double CsrMatrix::max_abs() const { return mgmpcg::max_abs(values_); }

bool CsrMatrix::is_symmetric(double tol) const {
  if (nrows_ != ncols_) return false;
  const CsrMatrix t = transpose(*this);
  for (Index i = 0; i < nrows_; ++i) {
    for (Index k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const double aij = values_[k];
      const double aji = t.at(i, col_indices_[k]);
      if (std::abs(aij - aji) > tol * std::max(1.0, std::abs(aij))) return false;
    }
    // entries stored only in the transpose pattern
    auto tc = t.row_cols(i);
    auto tv = t.row_values(i);
    for (std::size_t k = 0; k < tc.size(); ++k) {
      const double aij = at(i, tc[k]);
      if (std::abs(aij - tv[k]) > tol * std::max(1.0, std::abs(tv[k]))) return false;
    }
  }
  return true;
}

CsrMatrix CsrMatrix::with_symmetric_flag(bool flag) const {
  return CsrMatrix(nrows_, ncols_, row_offsets_, col_indices_, values_, flag);
}

void spmv(const CsrMatrix& a, std::span<const double> x, std::span<double> y) {
  require(x.size() == a.ncols(), ErrorCode::dimension_mismatch,
          "spmv: x has length " + std::to_string(x.size()) + ", expected " +
              std::to_string(a.ncols()));
  require(y.size() == a.nrows(), ErrorCode::dimension_mismatch, "spmv: output length mismatch");
  const auto offsets = a.row_offsets();
  const auto cols = a.col_indices();
  const auto vals = a.values();
  for (Index i = 0; i < a.nrows(); ++i) {
    double s = 0.0;
    for (Index k = offsets[i]; k < offsets[i + 1]; ++k) s += vals[k] * x[cols[k]];
    y[i] = s;
  }
}

Vector spmv(const CsrMatrix& a, std::span<const double> x) {
  Vector y(a.nrows());
  spmv(a, x, y);
  return y;
}

CsrMatrix transpose(const CsrMatrix& a) {
  std::vector<Index> offsets(a.ncols() + 1, 0);
  for (Index c : a.col_indices()) ++offsets[c + 1];
  for (Index j = 0; j < a.ncols(); ++j) offsets[j + 1] += offsets[j];
  std::vector<Index> cols(a.nnz());
  std::vector<double> vals(a.nnz());
  std::vector<Index> next(offsets.begin(), offsets.end() - 1);
  // Rows are visited in increasing order, so each output row is sorted.
  for (Index i = 0; i < a.nrows(); ++i) {
    auto rc = a.row_cols(i);
    auto rv = a.row_values(i);
    for (std::size_t k = 0; k < rc.size(); ++k) {
      const Index dst = next[rc[k]]++;
      cols[dst] = i;
      vals[dst] = rv[k];
    }
  }
  return CsrMatrix(a.ncols(), a.nrows(), std::move(offsets), std::move(cols), std::move(vals),
                   a.symmetric());
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  require(a.ncols() == b.nrows(), ErrorCode::dimension_mismatch,
          "multiply: inner dimensions differ (" + std::to_string(a.ncols()) + " vs " +
              std::to_string(b.nrows()) + ")");
  constexpr Index kUnset = static_cast<Index>(-1);
  std::vector<Index> marker(b.ncols(), kUnset);
  std::vector<double> accum(b.ncols(), 0.0);
  std::vector<Index> offsets(a.nrows() + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<Index> row_pattern;
  for (Index i = 0; i < a.nrows(); ++i) {
    row_pattern.clear();
    auto ac = a.row_cols(i);
    auto av = a.row_values(i);
    for (std::size_t ka = 0; ka < ac.size(); ++ka) {
      auto bc = b.row_cols(ac[ka]);
      auto bv = b.row_values(ac[ka]);
      for (std::size_t kb = 0; kb < bc.size(); ++kb) {
        const Index j = bc[kb];
        if (marker[j] != i) {
          marker[j] = i;
          accum[j] = 0.0;
          row_pattern.push_back(j);
        }
        accum[j] += av[ka] * bv[kb];
      }
    }
    std::sort(row_pattern.begin(), row_pattern.end());
    for (Index j : row_pattern) {
      cols.push_back(j);
      vals.push_back(accum[j]);
    }
    offsets[i + 1] = cols.size();
  }
  return CsrMatrix(a.nrows(), b.ncols(), std::move(offsets), std::move(cols), std::move(vals));
}

CsrMatrix add(const CsrMatrix& a, const CsrMatrix& b, double alpha, double beta) {
  require(a.nrows() == b.nrows() && a.ncols() == b.ncols(), ErrorCode::dimension_mismatch,
          "add: shape mismatch");
  std::vector<Index> offsets(a.nrows() + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index i = 0; i < a.nrows(); ++i) {
    auto ac = a.row_cols(i);
    auto av = a.row_values(i);
    auto bc = b.row_cols(i);
    auto bv = b.row_values(i);
    std::size_t ka = 0, kb = 0;
    while (ka < ac.size() || kb < bc.size()) {
      if (kb == bc.size() || (ka < ac.size() && ac[ka] < bc[kb])) {
        cols.push_back(ac[ka]);
        vals.push_back(alpha * av[ka++]);
      } else if (ka == ac.size() || bc[kb] < ac[ka]) {
        cols.push_back(bc[kb]);
        vals.push_back(beta * bv[kb++]);
      } else {
        cols.push_back(ac[ka]);
        vals.push_back(alpha * av[ka++] + beta * bv[kb++]);
      }
    }
    offsets[i + 1] = cols.size();
  }
  return CsrMatrix(a.nrows(), a.ncols(), std::move(offsets), std::move(cols), std::move(vals),
                   a.symmetric() && b.symmetric());
}

double max_abs_difference(const CsrMatrix& a, const CsrMatrix& b) {
  return add(a.with_symmetric_flag(false), b.with_symmetric_flag(false), 1.0, -1.0).max_abs();
}

CsrMatrix galerkin_triple_product(const CsrMatrix& r, const CsrMatrix& a, const CsrMatrix& p) {
  require(r.ncols() == a.nrows(), ErrorCode::dimension_mismatch,
          "galerkin_triple_product: R.ncols != A.nrows");
  require(a.ncols() == p.nrows(), ErrorCode::dimension_mismatch,
          "galerkin_triple_product: A.ncols != P.nrows");
  require(r.nrows() == p.ncols(), ErrorCode::dimension_mismatch,
          "galerkin_triple_product: R.nrows != P.ncols");
  const double scale = std::max(1.0, p.max_abs());
  require(max_abs_difference(r, transpose(p)) <= 1e-12 * scale, ErrorCode::invalid_argument,
          "galerkin_triple_product: R is not the transpose of P");
  const CsrMatrix rap = multiply(r, multiply(a, p));
  return add(rap, transpose(rap), 0.5, 0.5).with_symmetric_flag(true);
}

}  // namespace mgmpcg
