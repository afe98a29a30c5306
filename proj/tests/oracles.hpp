#pragma once

// Dense reference computations used as independent oracles by the tests.
// Nothing here calls into the solver code paths being checked; CsrMatrix is
// only read entrywise.

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "mgmpcg/csr_matrix.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;
using Vec = std::vector<double>;

inline Dense zeros(std::size_t r, std::size_t c) { return Dense(r, Vec(c, 0.0)); }

inline Dense identity(std::size_t n) {
  Dense d = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1.0;
  return d;
}

inline Dense to_dense(const mgmpcg::CsrMatrix& a) {
  Dense d = zeros(a.nrows(), a.ncols());
  for (std::size_t i = 0; i < a.nrows(); ++i) {
    auto c = a.row_cols(i);
    auto v = a.row_values(i);
    for (std::size_t k = 0; k < c.size(); ++k) d[i][c[k]] = v[k];
  }
  return d;
}

inline Dense transpose(const Dense& a) {
  Dense t = zeros(a.empty() ? 0 : a[0].size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

inline Dense matmul(const Dense& a, const Dense& b) {
  const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
  Dense c = zeros(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][p] * b[p][j];
  return c;
}

inline Vec matvec(const Dense& a, const Vec& x) {
  Vec y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline double dotv(const Vec& x, const Vec& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double max_abs_diff(const Dense& a, const Dense& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
  return m;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Gaussian elimination with partial pivoting.
inline Vec lu_solve(Dense a, Vec b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) throw std::runtime_error("lu_solve: singular");
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

/// Eigenvalues of a symmetric matrix, ascending, by cyclic Jacobi rotations.
inline Vec jacobi_eigenvalues(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-26) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
    }
  }
  Vec ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// argmin ||x* - x||_A over x0 + span(cols): solve (V^T A V) c = V^T A (x* - x0)
/// after removing numerically dependent columns by modified Gram-Schmidt in
/// the A inner product.
inline Vec energy_minimizer(const Dense& a, const Vec& xstar, const Vec& x0, const std::vector<Vec>& cols) {
  std::vector<Vec> basis;
  for (const Vec& c : cols) {
    Vec v = c;
    const double n0 = std::sqrt(std::max(0.0, dotv(v, matvec(a, v))));
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& q : basis) {
        const double h = dotv(q, matvec(a, v));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= h * q[i];
      }
    }
    const double nv = std::sqrt(std::max(0.0, dotv(v, matvec(a, v))));
    if (n0 == 0.0 || nv <= 1e-10 * n0) continue;
    for (double& e : v) e /= nv;
    basis.push_back(v);
  }
  Vec e(xstar.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = xstar[i] - x0[i];
  Vec x = x0;
  const Vec ae = matvec(a, e);
  for (const Vec& q : basis) {
    const double c = dotv(q, ae);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] += c * q[i];
  }
  return x;
}

inline double energy_norm(const Dense& a, const Vec& v) { return std::sqrt(dotv(v, matvec(a, v))); }

/// Random sparse matrix with exactly `nnz` distinct nonzero entries.
inline mgmpcg::CsrMatrix random_sparse(std::size_t nrows, std::size_t ncols, std::size_t nnz, std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> ri(0, nrows - 1), ci(0, ncols - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::vector<std::vector<bool>> used(nrows, std::vector<bool>(ncols, false));
  std::vector<mgmpcg::Triplet> t;
  while (t.size() < nnz) {
    const std::size_t i = ri(rng), j = ci(rng);
    if (used[i][j]) continue;
    used[i][j] = true;
    double v = val(rng);
    if (v == 0.0) v = 0.5;
    t.push_back({i, j, v});
  }
  return mgmpcg::CsrMatrix::from_triplets(nrows, ncols, t);
}

/// Random SPD matrix B^T B + n I as dense.
inline Dense random_spd(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  Dense b = zeros(n, n);
  for (auto& row : b)
    for (double& v : row) v = val(rng);
  Dense a = matmul(transpose(b), b);
  for (std::size_t i = 0; i < n; ++i) a[i][i] += static_cast<double>(n) * 0.1 + 0.1;
  return a;
}

inline mgmpcg::CsrMatrix from_dense(const Dense& a, bool symmetric = false) {
  std::vector<mgmpcg::Triplet> t;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != 0.0) t.push_back({i, j, a[i][j]});
  return mgmpcg::CsrMatrix::from_triplets(a.size(), a.empty() ? 0 : a[0].size(), t, symmetric);
}

inline Vec random_vec(std::size_t n, std::mt19937& rng) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  Vec v(n);
  for (double& x : v) x = val(rng);
  return v;
}

/// 5-point (2D) or 3-point (1D) graph Laplacians as dense matrices.
inline Dense path_laplacian(std::size_t n) {
  Dense a = zeros(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) { a[i][i - 1] = -1.0; a[i][i] += 1.0; }
    if (i + 1 < n) { a[i][i + 1] = -1.0; a[i][i] += 1.0; }
  }
  return a;
}

/// Textbook preconditioned CG on a dense matrix; returns x_0, x_1, ..., x_iters.
template <class Precond>
std::vector<Vec> pcg_iterates(const Dense& a, const Vec& b, Precond&& precond, std::size_t iters) {
  Vec x(b.size(), 0.0), r = b;
  Vec z = precond(r), p = z;
  double rz = dotv(r, z);
  std::vector<Vec> out{x};
  for (std::size_t k = 0; k < iters; ++k) {
    const Vec ap = matvec(a, p);
    const double alpha = rz / dotv(p, ap);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * ap[i];
    }
    out.push_back(x);
    z = precond(r);
    const double rz_new = dotv(r, z);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + (rz_new / rz) * p[i];
    rz = rz_new;
  }
  return out;
}

}  // namespace oracle
