#include "foldvol/spectral_field.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "foldvol/error.hpp"

namespace foldvol {

// Most callers evaluate several fields at one point (beta pieces, both forms,
// Taylor nodes sharing y), so the unit exponentials are cached by angle.
Complex cis_cached(double angle) {
  struct Slot {
    double angle = std::numeric_limits<double>::quiet_NaN();
    Complex value;
  };
  thread_local std::array<Slot, 4> slots;
  thread_local unsigned next = 0;
  for (const Slot& s : slots) {
    if (s.angle == angle) return s.value;
  }
  Slot& s = slots[next++ & 3u];
  s.angle = angle;
  s.value = std::polar(1.0, angle);
  return s.value;
}

namespace {

constexpr Complex kI{0.0, 1.0};

int wrap_index(int k, int n) {
  int r = k % n;
  return r < 0 ? r + n : r;
}

}  // namespace

Complex exp_integral(int k, double a, double b) {
  if (k == 0) return {b - a, 0.0};
  const double phase = kTwoPi * k * (b - a);
  // exp(i th a) (exp(i phase) - 1) / (2 pi i k), rewritten with sin(phase/2)
  // so that short intervals do not cancel.
  return std::polar(1.0, kTwoPi * k * a + 0.5 * phase) *
         (std::sin(0.5 * phase) / (std::numbers::pi * k));
}

// ---------------------------------------------------------------- 1D

SpectralField1D::SpectralField1D(int bandwidth, double period)
    : bandwidth_(bandwidth), period_(period),
      coeffs_(Eigen::VectorXcd::Zero(2 * bandwidth + 1)) {
  if (bandwidth < 0 || !(period > 0.0)) {
    throw Error(ErrorKind::kMalformedField, "bandwidth must be >= 0 and period > 0");
  }
}

SpectralField1D::SpectralField1D(Eigen::VectorXcd coeffs, double period)
    : bandwidth_(static_cast<int>(coeffs.size() - 1) / 2), period_(period),
      coeffs_(std::move(coeffs)) {
  if (coeffs_.size() % 2 != 1) {
    throw Error(ErrorKind::kMalformedField, "1D coefficient table must have odd length");
  }
  if (symmetry_defect() > kSymmetryTolerance) {
    throw Error(ErrorKind::kMalformedField, "1D coefficient table is not Hermitian");
  }
}

SpectralField1D SpectralField1D::constant(double value, int bandwidth) {
  SpectralField1D f(bandwidth);
  f.coeffs_(bandwidth) = value;
  return f;
}

SpectralField1D SpectralField1D::cosine(int k, double amplitude, int bandwidth) {
  SpectralField1D f(std::max(bandwidth, std::abs(k)));
  const int kk = f.bandwidth_;
  f.coeffs_(kk + k) += 0.5 * amplitude;
  f.coeffs_(kk - k) += 0.5 * amplitude;
  return f;
}

SpectralField1D SpectralField1D::sine(int k, double amplitude, int bandwidth) {
  SpectralField1D f(std::max(bandwidth, std::abs(k)));
  const int kk = f.bandwidth_;
  // sin = (e^{i} - e^{-i}) / 2i
  f.coeffs_(kk + k) += -0.5 * kI * amplitude;
  f.coeffs_(kk - k) += 0.5 * kI * amplitude;
  return f;
}

Complex SpectralField1D::coeff(int k) const {
  if (std::abs(k) > bandwidth_) return {};
  return coeffs_(k + bandwidth_);
}

double SpectralField1D::operator()(double y) const {
  double value = coeffs_(bandwidth_).real();
  if (bandwidth_ == 0) return value;
  const Complex e = cis_cached(kTwoPi / period_ * y);
  Complex p = 1.0;
  for (int k = 1; k <= bandwidth_; ++k) {
    p *= e;
    const Complex c = coeffs_(bandwidth_ + k);
    if (c == Complex{}) continue;
    value += 2.0 * (c * p).real();
  }
  return value;
}

SpectralField1D SpectralField1D::derivative() const {
  SpectralField1D d(bandwidth_, period_);
  const double w = kTwoPi / period_;
  for (int k = -bandwidth_; k <= bandwidth_; ++k) {
    d.coeffs_(k + bandwidth_) = kI * (w * k) * coeffs_(k + bandwidth_);
  }
  return d;
}

SpectralField1D SpectralField1D::antiderivative() const {
  SpectralField1D a(bandwidth_, period_);
  const double w = kTwoPi / period_;
  Complex anchor{};
  for (int k = -bandwidth_; k <= bandwidth_; ++k) {
    if (k == 0) continue;
    const Complex c = coeffs_(k + bandwidth_) / (kI * (w * k));
    a.coeffs_(k + bandwidth_) = c;
    anchor += c;
  }
  a.coeffs_(bandwidth_) = -anchor.real();
  return a;
}

double SpectralField1D::symmetry_defect() const {
  double defect = std::abs(coeffs_(bandwidth_).imag());
  for (int k = 1; k <= bandwidth_; ++k) {
    defect = std::max(defect,
                      std::abs(coeffs_(bandwidth_ + k) - std::conj(coeffs_(bandwidth_ - k))));
  }
  return defect;
}

bool SpectralField1D::is_zero() const { return coeffs_.isZero(0.0); }

SpectralField1D SpectralField1D::with_bandwidth(int bandwidth) const {
  SpectralField1D out(bandwidth, period_);
  const int k_max = std::min(bandwidth, bandwidth_);
  for (int k = -k_max; k <= k_max; ++k) out.coeffs_(k + bandwidth) = coeffs_(k + bandwidth_);
  return out;
}

SpectralField1D operator+(const SpectralField1D& a, const SpectralField1D& b) {
  const int k = std::max(a.bandwidth_, b.bandwidth_);
  SpectralField1D out = a.with_bandwidth(k);
  out.coeffs_ += b.with_bandwidth(k).coeffs_;
  return out;
}

SpectralField1D operator-(const SpectralField1D& a, const SpectralField1D& b) {
  return a + (-1.0) * b;
}

SpectralField1D operator*(double s, const SpectralField1D& a) {
  SpectralField1D out = a;
  out.coeffs_ *= s;
  return out;
}

// ---------------------------------------------------------------- 2D

SpectralField2D::SpectralField2D(int bandwidth)
    : bandwidth_(bandwidth),
      coeffs_(Eigen::ArrayXXcd::Zero(2 * bandwidth + 1, 2 * bandwidth + 1)) {
  if (bandwidth < 0) throw Error(ErrorKind::kMalformedField, "negative bandwidth");
}

SpectralField2D::SpectralField2D(Eigen::ArrayXXcd coeffs)
    : bandwidth_(static_cast<int>(coeffs.rows() - 1) / 2), coeffs_(std::move(coeffs)) {
  if (coeffs_.rows() != coeffs_.cols() || coeffs_.rows() % 2 != 1) {
    throw Error(ErrorKind::kMalformedField, "2D coefficient table must be square with odd size");
  }
  if (symmetry_defect() > kSymmetryTolerance) {
    throw Error(ErrorKind::kMalformedField, "2D coefficient table is not Hermitian");
  }
  index_modes();
}

SpectralField2D SpectralField2D::constant(double value, int bandwidth) {
  SpectralField2D f(bandwidth);
  f.coeffs_(bandwidth, bandwidth) = value;
  f.index_modes();
  return f;
}

SpectralField2D SpectralField2D::cosine(int kx, int ky, double amplitude, int bandwidth) {
  SpectralField2D f(std::max({bandwidth, std::abs(kx), std::abs(ky)}));
  const int k = f.bandwidth_;
  f.coeffs_(k + kx, k + ky) += 0.5 * amplitude;
  f.coeffs_(k - kx, k - ky) += 0.5 * amplitude;
  f.index_modes();
  return f;
}

SpectralField2D SpectralField2D::sine(int kx, int ky, double amplitude, int bandwidth) {
  SpectralField2D f(std::max({bandwidth, std::abs(kx), std::abs(ky)}));
  const int k = f.bandwidth_;
  f.coeffs_(k + kx, k + ky) += -0.5 * kI * amplitude;
  f.coeffs_(k - kx, k - ky) += 0.5 * kI * amplitude;
  f.index_modes();
  return f;
}

SpectralField2D SpectralField2D::from_y(const SpectralField1D& g, int bandwidth) {
  SpectralField2D f(std::max(bandwidth, g.bandwidth()));
  const int k = f.bandwidth_;
  for (int ky = -g.bandwidth(); ky <= g.bandwidth(); ++ky) f.coeffs_(k, k + ky) = g.coeff(ky);
  f.index_modes();
  return f;
}

SpectralField2D SpectralField2D::symmetrized(Eigen::ArrayXXcd coeffs, double* correction_norm) {
  const auto n = coeffs.rows();
  if (coeffs.cols() != n || n % 2 != 1) {
    throw Error(ErrorKind::kMalformedField, "2D coefficient table must be square with odd size");
  }
  Eigen::ArrayXXcd sym(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      sym(i, j) = 0.5 * (coeffs(i, j) + std::conj(coeffs(n - 1 - i, n - 1 - j)));
    }
  }
  if (correction_norm) *correction_norm = std::sqrt((sym - coeffs).abs2().sum());
  return SpectralField2D(std::move(sym));
}

void SpectralField2D::index_modes() {
  half_modes_.clear();
  max_kx_ = 0;
  max_ky_ = 0;
  const int k = bandwidth_;
  for (int kx = 0; kx <= k; ++kx) {
    for (int ky = (kx == 0 ? 1 : -k); ky <= k; ++ky) {
      const Complex c = coeffs_(k + kx, k + ky);
      if (c == Complex{}) continue;
      half_modes_.push_back({kx, ky, c});
      max_kx_ = std::max(max_kx_, kx);
      max_ky_ = std::max(max_ky_, std::abs(ky));
    }
  }
}

Complex SpectralField2D::coeff(int kx, int ky) const {
  if (std::abs(kx) > bandwidth_ || std::abs(ky) > bandwidth_) return {};
  return coeffs_(kx + bandwidth_, ky + bandwidth_);
}

double SpectralField2D::operator()(double x, double y) const {
  const double value = mean();
  if (half_modes_.empty()) return value;
  // Power tables by recurrence; the error grows like k * eps, far below
  // anything the callers resolve.
  thread_local std::vector<Complex> px, py;
  px.resize(max_kx_ + 1);
  py.resize(2 * max_ky_ + 1);
  const Complex ex = cis_cached(kTwoPi * x), ey = cis_cached(kTwoPi * y);
  px[0] = 1.0;
  for (int k = 1; k <= max_kx_; ++k) px[k] = px[k - 1] * ex;
  py[max_ky_] = 1.0;
  for (int k = 1; k <= max_ky_; ++k) {
    py[max_ky_ + k] = py[max_ky_ + k - 1] * ey;
    py[max_ky_ - k] = std::conj(py[max_ky_ + k]);
  }
  double acc = 0.0;
  for (const Mode& m : half_modes_) acc += (m.c * px[m.kx] * py[max_ky_ + m.ky]).real();
  return value + 2.0 * acc;
}

double SpectralField2D::partial(Axis axis, double x, double y) const {
  double value = 0.0;
  for (const Mode& m : half_modes_) {
    const double k = axis == Axis::kX ? m.kx : m.ky;
    if (k == 0) continue;
    value += 2.0 * (m.c * kI * (kTwoPi * k) *
                    std::polar(1.0, kTwoPi * (m.kx * x + m.ky * y))).real();
  }
  return value;
}

double SpectralField2D::symmetry_defect() const {
  const auto n = coeffs_.rows();
  double defect = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      defect = std::max(defect, std::abs(coeffs_(i, j) - std::conj(coeffs_(n - 1 - i, n - 1 - j))));
    }
  }
  return defect;
}

double SpectralField2D::max_abs_coeff() const { return coeffs_.abs().maxCoeff(); }

Eigen::ArrayXXd SpectralField2D::sample(int n) const {
  return fft::synthesize(coeffs_, bandwidth_, n);
}

SpectralField2D SpectralField2D::from_samples(const Eigen::ArrayXXd& grid, int bandwidth) {
  Eigen::ArrayXXcd c = fft::analyze(grid, bandwidth);
  // Exact Hermitian symmetry of the analysis is only up to roundoff.
  double ignored = 0.0;
  return symmetrized(std::move(c), &ignored);
}

SpectralField1D SpectralField2D::x_integral(double lo, double hi) const {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2 * bandwidth_ + 1);
  const int k = bandwidth_;
  for (int kx = -k; kx <= k; ++kx) {
    const Complex weight = exp_integral(kx, lo, hi);
    for (int ky = -k; ky <= k; ++ky) {
      const Complex ckk = coeffs_(k + kx, k + ky);
      if (ckk == Complex{}) continue;
      c(k + ky) += ckk * weight;
    }
  }
  // Symmetrize to remove roundoff asymmetry before validating.
  for (int ky = 0; ky <= k; ++ky) {
    const Complex avg = 0.5 * (c(k + ky) + std::conj(c(k - ky)));
    c(k + ky) = avg;
    c(k - ky) = std::conj(avg);
  }
  return SpectralField1D(std::move(c));
}

SpectralField2D SpectralField2D::pruned(double relative) const {
  SpectralField2D out = *this;
  const double floor = relative * std::max(max_abs_coeff(), std::abs(mean()));
  out.coeffs_ = (coeffs_.abs() <= floor).select(Complex{}, coeffs_);
  out.index_modes();
  return out;
}

SpectralField2D SpectralField2D::with_bandwidth(int bandwidth) const {
  SpectralField2D out(bandwidth);
  const int k_max = std::min(bandwidth, bandwidth_);
  out.coeffs_.block(bandwidth - k_max, bandwidth - k_max, 2 * k_max + 1, 2 * k_max + 1) =
      coeffs_.block(bandwidth_ - k_max, bandwidth_ - k_max, 2 * k_max + 1, 2 * k_max + 1);
  out.index_modes();
  return out;
}

SpectralField2D operator+(const SpectralField2D& a, const SpectralField2D& b) {
  const int k = std::max(a.bandwidth_, b.bandwidth_);
  SpectralField2D out = a.with_bandwidth(k);
  out.coeffs_ += b.with_bandwidth(k).coeffs_;
  out.index_modes();
  return out;
}

SpectralField2D operator-(const SpectralField2D& a, const SpectralField2D& b) {
  return a + (-b);
}

SpectralField2D operator*(double s, const SpectralField2D& a) {
  SpectralField2D out = a;
  out.coeffs_ *= s;
  out.index_modes();
  return out;
}

SpectralField2D operator-(const SpectralField2D& a) { return (-1.0) * a; }

// ---------------------------------------------------------------- free functions

double eval_point(const SpectralField2D& f, const Eigen::Vector2d& p) { return f(p.x(), p.y()); }

SpectralField2D differentiate(const SpectralField2D& f, Axis axis) {
  const int k = f.bandwidth();
  Eigen::ArrayXXcd c = f.coeffs();
  for (int kx = -k; kx <= k; ++kx) {
    for (int ky = -k; ky <= k; ++ky) {
      const double w = kTwoPi * (axis == Axis::kX ? kx : ky);
      c(k + kx, k + ky) *= kI * w;
    }
  }
  return SpectralField2D(std::move(c));
}

double integrate_total(const SpectralField2D& f) { return f.mean(); }

double integrate_strip(const SpectralField2D& f, double x_lo, double x_hi) {
  double total = f.mean() * (x_hi - x_lo);
  for (int kx = 1; kx <= f.bandwidth(); ++kx) {
    const Complex c = f.coeff(kx, 0);
    if (c == Complex{}) continue;
    total += 2.0 * (c * exp_integral(kx, x_lo, x_hi)).real();
  }
  return total;
}

SpectralField2D multiply(const SpectralField2D& f, const SpectralField2D& g) {
  const int k = std::max(f.bandwidth(), g.bandwidth());
  // Padded grid of at least 3K + 1 points removes aliasing into |k| <= K.
  const int n = std::max(4 * k, 8);
  Eigen::ArrayXXd prod = f.sample(n) * g.sample(n);
  // Transform roundoff would otherwise fill the whole table with ~1e-17
  // entries and make every pointwise evaluation dense.
  return SpectralField2D::from_samples(prod, k).pruned(1e-15);
}

// ---------------------------------------------------------------- fft

namespace fft {

Eigen::ArrayXXd synthesize(const Eigen::ArrayXXcd& coeffs, int bandwidth, int n) {
  Eigen::ArrayXXcd table = Eigen::ArrayXXcd::Zero(n, n);
  for (int kx = -bandwidth; kx <= bandwidth; ++kx) {
    for (int ky = -bandwidth; ky <= bandwidth; ++ky) {
      table(wrap_index(kx, n), wrap_index(ky, n)) += coeffs(kx + bandwidth, ky + bandwidth);
    }
  }
  Eigen::FFT<double> engine;
  engine.SetFlag(Eigen::FFT<double>::Unscaled);
  std::vector<Complex> in(n), out(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) in[i] = table(i, j);
    engine.inv(out, in);
    for (int i = 0; i < n; ++i) table(i, j) = out[i];
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) in[j] = table(i, j);
    engine.inv(out, in);
    for (int j = 0; j < n; ++j) table(i, j) = out[j];
  }
  return table.real();
}

Eigen::ArrayXXcd analyze(const Eigen::ArrayXXd& grid, int bandwidth) {
  const int n = static_cast<int>(grid.rows());
  Eigen::ArrayXXcd table = grid.cast<Complex>();
  Eigen::FFT<double> engine;
  std::vector<Complex> in(n), out(n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) in[i] = table(i, j);
    engine.fwd(out, in);
    for (int i = 0; i < n; ++i) table(i, j) = out[i];
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) in[j] = table(i, j);
    engine.fwd(out, in);
    for (int j = 0; j < n; ++j) table(i, j) = out[j];
  }
  const double scale = 1.0 / (static_cast<double>(n) * n);
  Eigen::ArrayXXcd c = Eigen::ArrayXXcd::Zero(2 * bandwidth + 1, 2 * bandwidth + 1);
  const int k_max = std::min(bandwidth, (n - 1) / 2);
  for (int kx = -k_max; kx <= k_max; ++kx) {
    for (int ky = -k_max; ky <= k_max; ++ky) {
      c(kx + bandwidth, ky + bandwidth) = scale * table(wrap_index(kx, n), wrap_index(ky, n));
    }
  }
  return c;
}

}  // namespace fft

}  // namespace foldvol
