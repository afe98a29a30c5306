#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mgmpcg/error.hpp"

namespace mgmpcg {

using Vector = std::vector<double>;

inline double dot(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorCode::dimension_mismatch, "dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

/// y += a * x
inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  require(x.size() == y.size(), ErrorCode::dimension_mismatch, "axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace mgmpcg
