// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace expchar {

/// A strictly increasing grid of positive evaluation points.
class EvalGrid {
 public:
  explicit EvalGrid(std::vector<double> points);

  /// n log-spaced points on [lo, hi]; endpoints hit exactly.
  static EvalGrid logspace(double lo, double hi, int n);

  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t i) const noexcept { return points_[i]; }
  double front() const noexcept { return points_.front(); }
  double back() const noexcept { return points_.back(); }
  const std::vector<double>& points() const noexcept { return points_; }

  bool operator==(const EvalGrid& other) const noexcept { return points_ == other.points_; }

 private:
  std::vector<double> points_;
};

}  // namespace expchar
