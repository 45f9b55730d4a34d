#pragma once

// Small numerical kernels shared across modules: Gauss-Legendre rules,
// ramp functions, one-sided Taylor division, and exponent fits.

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

namespace foldvol {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// x^n for integer n by repeated squaring; std::pow is several times slower
// and sits on the hot path of every profile evaluation.
inline double ipow(double x, int n) {
  if (n < 0) return 1.0 / ipow(x, -n);
  double r = 1.0;
  while (n) {
    if (n & 1) r *= x;
    x *= x;
    n >>= 1;
  }
  return r;
}

// Cached n-point Gauss-Legendre rule.
const GaussRule& gauss_legendre(int n);

// Integral of f over [a, b] split into `pieces` equal panels of an n-point rule.
double integrate_gl(const std::function<double(double)>& f, double a, double b,
                    int pieces = 1, int n = 16);

// Integral over [a, b] with panels aligned to the given interior knots.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> knots, int pieces_per_span = 8, int n = 16);

// Degree-7 smoothstep on [0, 1]: 0 -> 1 with first three derivatives zero at both ends.
double smoothstep7(double u);
double smoothstep7_derivative(double u);

// Degree-(2n+1) smoothstep on [0, 1]: 0 -> 1 with the first n derivatives
// zero at both ends.
double smoothstep(int n, double u);
double smoothstep_derivative(int n, double u);

// C-infinity ramp: 1 on u <= 0, 0 on u >= 1, flat to all orders at both ends.
double smooth_ramp(double u);
double smooth_ramp_derivative(double u);

// Given g with g(0) = 0, returns g(t) / t for 0 <= |t| <= delta from a degree-6
// polynomial through 7 one-sided samples at sign(t) * j * delta / 6, j = 0..6.
// Samples on one side only, so g may be piecewise across t = 0.
double taylor_quotient(const std::function<double(double)>& g, double t, double delta);

// Same, for several functions sharing the node set (one call per node).
// `sample(tau, out)` must fill out[0..count) with the functions at tau.
void taylor_quotients(const std::function<void(double, std::span<double>)>& sample, double t,
                      double delta, std::span<double> quotients);

// Least-squares slope of log(values) against log(ts).
double fit_loglog_slope(std::span<const double> ts, std::span<const double> values);

// Wrap into [0, 1).
double wrap01(double x);
// Signed distance x - c wrapped into [-1/2, 1/2).
double wrapped_offset(double x, double c);

}  // namespace foldvol
