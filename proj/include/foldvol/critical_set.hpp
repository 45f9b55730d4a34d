#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "foldvol/field.hpp"

namespace foldvol {

// Union of coordinate circles {x = c_i} on the unit torus, with optional
// coorientations (sign of the normal derivative of a folded coefficient)
// and a common collar half-width.
class CriticalSet {
 public:
  CriticalSet() = default;
  // collar_width <= 0 selects a quarter of the smallest gap.
  explicit CriticalSet(std::vector<double> circles, std::vector<int> coorientations = {},
                       double collar_width = 0.0);

  size_t size() const { return circles_.size(); }
  const std::vector<double>& circles() const { return circles_; }
  const std::vector<int>& coorientations() const { return coorientations_; }
  bool has_coorientations() const { return !coorientations_.empty(); }
  double collar_width() const { return collar_width_; }
  double min_gap() const;

  // Region j is [c_j, c_{j+1}), the last one wrapping to c_0 + 1.
  size_t regions() const { return circles_.size(); }
  std::pair<double, double> region_bounds(size_t j) const;
  // Region containing x, and x lifted into that region's [lo, hi).
  size_t region_of(double x, double* lifted = nullptr) const;
  // Nearest circle index and the wrapped offset x - c.
  size_t nearest(double x, double* offset) const;
  Blend blend() const;

  CriticalSet with_coorientations(std::vector<int> signs) const;
  CriticalSet with_collar_width(double width) const;
  // Adds circles (e.g. fold circles of a smooth part); coorientations dropped.
  CriticalSet merged(const std::vector<double>& extra) const;
  bool same_circles(const CriticalSet& other, double tol = 1e-12) const;

 private:
  std::vector<double> circles_;
  std::vector<int> coorientations_;
  double collar_width_ = 0.0;
};

// Tubular neighbourhood of one circle: t(x) = wrapped x - c, |t| <= width,
// with projection (x, y) -> (c, y).
struct CollarSpec {
  size_t circle = 0;
  double center = 0.0;
  double width = 0.0;

  double t(double x) const;
  Eigen::Vector2d project(const Eigen::Vector2d& p) const { return {center, p.y()}; }
  static CollarSpec of(const CriticalSet& z, size_t i);
};

}  // namespace foldvol
