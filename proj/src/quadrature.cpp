#include "foldvol/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace foldvol {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return cache.emplace(n, std::move(rule)).first->second;
}

double integrate_gl(const std::function<double(double)>& f, double a, double b, int pieces,
                    int n) {
  const GaussRule& rule = gauss_legendre(n);
  const double h = (b - a) / pieces;
  double total = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    double panel = 0.0;
    for (int i = 0; i < n; ++i) panel += rule.weights[i] * f(mid + 0.5 * h * rule.nodes[i]);
    total += 0.5 * h * panel;
  }
  return total;
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> knots, int pieces_per_span, int n) {
  std::vector<double> cuts{a};
  for (double k : knots) {
    if (k > a && k < b) cuts.push_back(k);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double total = 0.0;
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] > cuts[i]) total += integrate_gl(f, cuts[i], cuts[i + 1], pieces_per_span, n);
  }
  return total;
}

double smoothstep7(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double u4 = u * u * u * u;
  return u4 * (35.0 + u * (-84.0 + u * (70.0 - 20.0 * u)));
}

double smoothstep7_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double v = u * (1.0 - u);
  return 140.0 * v * v * v;
}

namespace {

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return c;
}

}  // namespace

double smoothstep(int n, double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double acc = 0.0;
  for (int k = n; k >= 0; --k) {
    const double c = binomial(n + k, k) * binomial(2 * n + 1, n - k) * (k % 2 ? -1.0 : 1.0);
    acc = acc * u + c;
  }
  return acc * ipow(u, n + 1);
}

double smoothstep_derivative(int n, double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  // (2n+1)! / (n!)^2 = (n + 1) binomial(2n + 1, n)
  return (n + 1) * binomial(2 * n + 1, n) * ipow(u * (1.0 - u), n);
}

namespace {

double flat(double z) { return z > 0.0 ? std::exp(-1.0 / z) : 0.0; }
double flat_derivative(double z) { return z > 0.0 ? std::exp(-1.0 / z) / (z * z) : 0.0; }

}  // namespace

double smooth_ramp(double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  const double a = flat(1.0 - u);
  const double b = flat(u);
  return a / (a + b);
}

double smooth_ramp_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = flat(1.0 - u);
  const double b = flat(u);
  const double da = -flat_derivative(1.0 - u);
  const double db = flat_derivative(u);
  const double s = a + b;
  return (da * b - a * db) / (s * s);
}

namespace {

// Inverse Vandermonde for nodes u_j = j / 6, j = 0..6.
const Eigen::Matrix<double, 7, 7>& one_sided_inverse() {
  static const Eigen::Matrix<double, 7, 7> inverse = [] {
    Eigen::Matrix<double, 7, 7> v;
    for (int j = 0; j < 7; ++j) {
      const double u = j / 6.0;
      double p = 1.0;
      for (int k = 0; k < 7; ++k) {
        v(j, k) = p;
        p *= u;
      }
    }
    return Eigen::Matrix<double, 7, 7>(v.inverse());
  }();
  return inverse;
}

}  // namespace

void taylor_quotients(const std::function<void(double, std::span<double>)>& sample, double t,
                      double delta, std::span<double> quotients) {
  const size_t count = quotients.size();
  const double side = t < 0.0 ? -1.0 : 1.0;
  const double h = side * delta;
  Eigen::Matrix<double, 7, Eigen::Dynamic> values(7, count);
  std::vector<double> buffer(count);
  for (int j = 0; j < 7; ++j) {
    sample(h * j / 6.0, buffer);
    for (size_t c = 0; c < count; ++c) values(j, c) = buffer[c];
  }
  const Eigen::Matrix<double, 7, Eigen::Dynamic> poly = one_sided_inverse() * values;
  const double u = t / h;  // in [0, 1]
  for (size_t c = 0; c < count; ++c) {
    // (p(u) - p(0)) / (u h), Horner on coefficients 1..6
    double q = 0.0;
    for (int k = 6; k >= 1; --k) q = q * u + poly(k, c);
    quotients[c] = q / h;
  }
}

double taylor_quotient(const std::function<double(double)>& g, double t, double delta) {
  double out = 0.0;
  taylor_quotients([&](double tau, std::span<double> v) { v[0] = g(tau); }, t, delta,
                   std::span<double>(&out, 1));
  return out;
}

double fit_loglog_slope(std::span<const double> ts, std::span<const double> values) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < ts.size(); ++i) {
    if (!(values[i] > 0.0) || !(ts[i] > 0.0)) continue;
    const double lx = std::log(ts[i]);
    const double ly = std::log(values[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::infinity();
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double wrap01(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

double wrapped_offset(double x, double c) {
  double d = x - c;
  d -= std::floor(d + 0.5);
  return d;
}

}  // namespace foldvol
