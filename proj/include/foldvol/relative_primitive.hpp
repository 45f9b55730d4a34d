#pragma once

// Primitives of top-degree differences relative to the critical set: given
// Delta with vanishing regional integrals, a one-form beta with d beta = Delta
// that vanishes to second order on every circle.

#include <memory>
#include <vector>

#include "foldvol/critical_set.hpp"
#include "foldvol/exterior.hpp"
#include "foldvol/field.hpp"

namespace foldvol {

inline constexpr double kDefectTolerance = 1e-10;

// Smallest nonzero distance from a profile knot of f to the nearest circle;
// infinity when f has no knots off Z.
double knot_clearance(const Field& f, const CriticalSet& z);

// Region integrals of Delta, region j = [c_j, c_{j+1}).
std::vector<double> obstruction(const Field& delta, const CriticalSet& z);

// chi(x) = degree-11 smoothstep of (x - lo) / (hi - lo) on one interval; chi'
// vanishes to fifth order at both ends.
struct CutoffProfile {
  double lo = 0.0;
  double hi = 1.0;

  double value(double x) const;
  double derivative(double x) const;
};

struct PrimitiveReport {
  double residual = 0.0;          // sup |d beta - Delta| on the check grid
  std::vector<double> orders;     // fitted vanishing order per circle
  double max_jump = 0.0;          // sup |beta(c+) - beta(c-)| over circles
  int residual_points = 0;
};

class PrimitiveOneForm {
 public:
  Eigen::Vector2d operator()(double x, double y) const;
  PointwiseOneForm pointwise() const;
  const CriticalSet& critical() const;
  // Width of the layers next to the circles where beta changes construction.
  double layer_width() const;
  const PrimitiveReport& report() const { return report_; }

  // Band-limited projection from an n x n grid; `error` receives the sup
  // deviation at the staggered grid.
  OneForm project(int bandwidth, int n, double* error = nullptr) const;

  struct Impl;

 private:
  friend PrimitiveOneForm build_primitive(const Field&, const CriticalSet&, double);
  std::shared_ptr<const Impl> impl_;
  PrimitiveReport report_;
};

// Throws ObstructionError when a region defect exceeds tol, kSingularPoint for
// singular Delta, kInternalConsistency if a y-antiderivative fails to close.
PrimitiveOneForm build_primitive(const Field& delta, const CriticalSet& z,
                                 double tol = kDefectTolerance);

// Residual by sixth-order differences of beta at an n x n grid (points
// within three steps of a circle are skipped), vanishing-order fits, and
// jumps across circles.
PrimitiveReport verify_primitive(const PointwiseOneForm& beta, const Field& delta,
                                 const CriticalSet& z, int n = 48);

}  // namespace foldvol
