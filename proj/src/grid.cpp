// SPDX-License-Identifier: Apache-2.0
#include "expchar/grid.hpp"

#include <cmath>

#include "expchar/errors.hpp"

namespace expchar {

EvalGrid::EvalGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw ParameterDomainError("EvalGrid: no points");
  double prev = 0.0;
  for (double s : points_) {
    if (!std::isfinite(s) || s <= prev)
      throw ParameterDomainError("EvalGrid: points must be finite, positive, strictly increasing");
    prev = s;
  }
}

EvalGrid EvalGrid::logspace(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw ParameterDomainError("EvalGrid::logspace: need 0 < lo < hi and n >= 2");
  std::vector<double> pts(static_cast<std::size_t>(n));
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < n; ++i)
    pts[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(n - 1));
  pts.front() = lo;
  pts.back() = hi;
  return EvalGrid(std::move(pts));
}

}  // namespace expchar
