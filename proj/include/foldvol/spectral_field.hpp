#pragma once

// Real periodic fields on S^1 and T^2 stored as truncated Fourier tables.
//
// A field of bandwidth K holds the coefficients c(k) for |k| <= K (per axis)
// and represents f(p) = sum_k c(k) exp(2 pi i k.p). Reality is enforced
// through Hermitian symmetry c(-k) = conj(c(k)).

#include <Eigen/Dense>
#include <complex>
#include <numbers>
#include <vector>

namespace foldvol {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr int kDefaultBandwidth = 64;
inline constexpr double kSymmetryTolerance = 1e-12;

using Complex = std::complex<double>;

enum class Axis { kX, kY };

class SpectralField1D {
 public:
  SpectralField1D() : SpectralField1D(0) {}
  explicit SpectralField1D(int bandwidth, double period = 1.0);
  // Throws kMalformedField if the table is not Hermitian within 1e-12.
  explicit SpectralField1D(Eigen::VectorXcd coeffs, double period = 1.0);

  static SpectralField1D constant(double value, int bandwidth = 0);
  static SpectralField1D cosine(int k, double amplitude, int bandwidth = 0);
  static SpectralField1D sine(int k, double amplitude, int bandwidth = 0);

  int bandwidth() const { return bandwidth_; }
  double period() const { return period_; }
  const Eigen::VectorXcd& coeffs() const { return coeffs_; }
  Complex coeff(int k) const;

  double operator()(double y) const;
  double mean() const { return coeffs_(bandwidth_).real(); }
  SpectralField1D derivative() const;
  // Antiderivative of the mean-free part, anchored at F(0) = 0.
  SpectralField1D antiderivative() const;
  double symmetry_defect() const;
  bool is_zero() const;

  SpectralField1D with_bandwidth(int bandwidth) const;

  friend SpectralField1D operator+(const SpectralField1D& a, const SpectralField1D& b);
  friend SpectralField1D operator-(const SpectralField1D& a, const SpectralField1D& b);
  friend SpectralField1D operator*(double s, const SpectralField1D& a);

 private:
  int bandwidth_;
  double period_;
  Eigen::VectorXcd coeffs_;
};

struct Mode {
  int kx;
  int ky;
  Complex c;
};

class SpectralField2D {
 public:
  SpectralField2D() : SpectralField2D(0) {}
  explicit SpectralField2D(int bandwidth);
  // Table indexed (kx + K, ky + K). Throws kMalformedField on asymmetry.
  explicit SpectralField2D(Eigen::ArrayXXcd coeffs);

  // Builders. Each adds the Hermitian partner automatically.
  static SpectralField2D constant(double value, int bandwidth = kDefaultBandwidth);
  // amplitude * cos(2 pi (kx x + ky y))
  static SpectralField2D cosine(int kx, int ky, double amplitude,
                                int bandwidth = kDefaultBandwidth);
  // amplitude * sin(2 pi (kx x + ky y))
  static SpectralField2D sine(int kx, int ky, double amplitude,
                              int bandwidth = kDefaultBandwidth);
  // Embeds a y-only field.
  static SpectralField2D from_y(const SpectralField1D& g, int bandwidth = kDefaultBandwidth);
  // Loader path: symmetrizes the table and returns the correction norm.
  static SpectralField2D symmetrized(Eigen::ArrayXXcd coeffs, double* correction_norm);

  int bandwidth() const { return bandwidth_; }
  const Eigen::ArrayXXcd& coeffs() const { return coeffs_; }
  Complex coeff(int kx, int ky) const;
  // Nonzero coefficients in the half plane (kx > 0, or kx == 0 and ky > 0).
  const std::vector<Mode>& half_modes() const { return half_modes_; }
  int max_kx() const { return max_kx_; }

  double operator()(double x, double y) const;
  // Pointwise partial derivative without building the derivative field.
  double partial(Axis axis, double x, double y) const;
  double mean() const { return coeffs_(bandwidth_, bandwidth_).real(); }
  double symmetry_defect() const;
  bool is_zero() const { return half_modes_.empty() && mean() == 0.0; }
  double max_abs_coeff() const;

  // Exact samples on the uniform N x N grid; entry (i, j) is at (i/N, j/N).
  Eigen::ArrayXXd sample(int n) const;
  // Projection of grid samples onto bandwidth K (discrete Fourier analysis).
  static SpectralField2D from_samples(const Eigen::ArrayXXd& grid, int bandwidth);

  // y -> integral of f(s, y) over s in [lo, hi], as an exact 1D field.
  SpectralField1D x_integral(double lo, double hi) const;

  SpectralField2D with_bandwidth(int bandwidth) const;
  // Zeroes coefficients at or below relative * max |c|.
  SpectralField2D pruned(double relative) const;

  friend SpectralField2D operator+(const SpectralField2D& a, const SpectralField2D& b);
  friend SpectralField2D operator-(const SpectralField2D& a, const SpectralField2D& b);
  friend SpectralField2D operator*(double s, const SpectralField2D& a);
  friend SpectralField2D operator-(const SpectralField2D& a);

 private:
  void index_modes();

  int bandwidth_;
  Eigen::ArrayXXcd coeffs_;
  std::vector<Mode> half_modes_;
  int max_kx_ = 0;
  int max_ky_ = 0;
};

double eval_point(const SpectralField2D& f, const Eigen::Vector2d& p);
SpectralField2D differentiate(const SpectralField2D& f, Axis axis);
double integrate_total(const SpectralField2D& f);
// Integral over [x_lo, x_hi] x [0, 1], exact per mode.
double integrate_strip(const SpectralField2D& f, double x_lo, double x_hi);
// Anti-aliased product truncated back to the larger bandwidth.
SpectralField2D multiply(const SpectralField2D& f, const SpectralField2D& g);

// exp(i angle), remembered for the last few angles per thread.
Complex cis_cached(double angle);

// Integral of exp(2 pi i k s) over [a, b], stable as b -> a.
Complex exp_integral(int k, double a, double b);

namespace fft {
// Uniform-grid synthesis / analysis on N x N periodic grids.
Eigen::ArrayXXd synthesize(const Eigen::ArrayXXcd& coeffs, int bandwidth, int n);
Eigen::ArrayXXcd analyze(const Eigen::ArrayXXd& grid, int bandwidth);
}  // namespace fft

}  // namespace foldvol
