#include "foldvol/desingularization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "foldvol/error.hpp"
#include "foldvol/quadrature.hpp"

namespace foldvol {

namespace {

using LMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// d^n/dx^n x^p = falling(p, n) x^(p - n)
double falling(double p, int n) {
  double c = 1.0;
  for (int i = 0; i < n; ++i) c *= p - i;
  return c;
}

// Coefficients a minimizing a^T G a subject to C a = d.
LVector constrained_fit(const LMatrix& c, const LVector& d, const LMatrix& g) {
  const auto n = c.cols(), m = c.rows();
  if (n == m) return c.fullPivLu().solve(d);
  LMatrix kkt = LMatrix::Zero(n + m, n + m);
  kkt.topLeftCorner(n, n) = g;
  kkt.topRightCorner(n, m) = c.transpose();
  kkt.bottomLeftCorner(m, n) = c;
  LVector rhs = LVector::Zero(n + m);
  rhs.tail(m) = d;
  return kkt.fullPivLu().solve(rhs).head(n);
}

}  // namespace

int DesingProfile::degree() const {
  const int n = static_cast<int>(coeffs_.size());
  return parity_ == Parity::kEven ? 2 * n - 1 : n - 1;
}

double DesingProfile::far(double x, int n) const {
  const double sign = x < 0.0 ? -1.0 : 1.0;
  if (parity_ == Parity::kEven) {
    // -x^{1-2k} / (2k - 1) +- 2 / eps^{2k-1}
    const double p = 1.0 - 2.0 * k_;
    const double base = -falling(p, n) / (2.0 * k_ - 1.0) * ipow(x, static_cast<int>(p) - n);
    return n == 0 ? base + sign * 2.0 / ipow(eps_, 2 * k_ - 1) : base;
  }
  if (k_ == 0) {
    // log|x / eps|
    if (n == 0) return std::log(std::abs(x) / eps_);
    return falling(-1.0, n - 1) * ipow(x, -n);
  }
  // -eps^2 / ((2k + 2) x^{2k+2})
  const double p = -(2.0 * k_ + 2.0);
  return -eps_ * eps_ / (2.0 * k_ + 2.0) * falling(p, n) * ipow(x, static_cast<int>(p) - n);
}

double DesingProfile::interior(double x, int n) const {
  const double u = x / eps_;
  if (parity_ == Parity::kEven) {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < coeffs_.size(); ++j) {
      const int p = 2 * static_cast<int>(j) + 1;
      if (p < n) continue;
      acc += coeffs_(j) * falling(p, n) * ipow(u, p - n);
    }
    return acc * ipow(eps_, -(2 * k_ - 1) - n);
  }
  const double sign = u < 0.0 ? -1.0 : 1.0;
  const double v = std::abs(u) - 1.0;
  double acc = 0.0;
  for (int p = static_cast<int>(coeffs_.size()) - 1; p >= n; --p) {
    acc = acc * v + coeffs_(p) * falling(p, n);
  }
  return (n % 2 ? sign : 1.0) * acc * ipow(eps_, -2 * k_ - n);
}

double DesingProfile::core(double x, int n) const {
  // eps^{-2k} ((x / eps)^2 - 2)
  const double s = ipow(eps_, -2 * k_);
  switch (n) {
    case 0: return s * (x * x / (eps_ * eps_) - 2.0);
    case 1: return s * 2.0 * x / (eps_ * eps_);
    case 2: return s * 2.0 / (eps_ * eps_);
    default: return 0.0;
  }
}

double DesingProfile::derivative(double x, int n) const {
  const double a = std::abs(x);
  if (parity_ == Parity::kEven) return a <= eps_ ? interior(x, n) : far(x, n);
  if (a <= eps_) return core(x, n);
  return a < 2.0 * eps_ ? interior(x, n) : far(x, n);
}

std::vector<double> DesingProfile::knots() const {
  if (parity_ == Parity::kEven) return {-eps_, eps_};
  return {-2.0 * eps_, -eps_, eps_, 2.0 * eps_};
}

double DesingProfile::contact_mismatch() const {
  // Both pieces evaluated at each gluing point; parity covers the mirror side.
  double worst = 0.0;
  for (int n = 0; n <= r_; ++n) {
    if (parity_ == Parity::kEven) {
      worst = std::max(worst, std::abs(interior(eps_, n) - far(eps_, n)));
    } else {
      worst = std::max(worst, std::abs(core(eps_, n) - interior(eps_, n)));
      worst = std::max(worst, std::abs(interior(2.0 * eps_, n) - far(2.0 * eps_, n)));
    }
  }
  return worst;
}

namespace {

void check_args(int k, int min_k, double eps, int r) {
  if (k < min_k) throw Error(ErrorKind::kMalformedInput, "k out of range");
  if (!(eps > 0.0)) throw Error(ErrorKind::kMalformedInput, "epsilon must be > 0");
  if (r < 1 || r > 8) throw Error(ErrorKind::kMalformedInput, "contact order must be in 1..8");
}

constexpr int kMonotoneSamples = 10000;
constexpr int kMaxExtraTerms = 9;

}  // namespace

DesingProfile build_even_profile(int k, double eps, int r) {
  check_args(k, 1, eps, r);
  DesingProfile prof;
  prof.parity_ = Parity::kEven;
  prof.k_ = k;
  prof.eps_ = eps;
  prof.r_ = r;
  // Far branch in u: F(u) = -u^{1-2k} / (2k - 1) + 2.
  const double p = 1.0 - 2.0 * k;
  LVector d(r + 1);
  for (int n = 0; n <= r; ++n) {
    d(n) = -falling(p, n) / (2.0 * k - 1.0) + (n == 0 ? 2.0 : 0.0);
  }
  for (int extra = 0; extra <= kMaxExtraTerms; ++extra) {
    const int terms = r + 1 + extra;
    LMatrix c(r + 1, terms), g = LMatrix::Zero(terms, terms);
    for (int n = 0; n <= r; ++n) {
      for (int j = 0; j < terms; ++j) c(n, j) = falling(2 * j + 1, n);
    }
    for (int i = 1; i < terms; ++i) {
      for (int j = 1; j < terms; ++j) {
        const long double a = 2 * i + 1, b = 2 * j + 1;
        g(i, j) = a * (a - 1) * b * (b - 1) / (a + b - 3);
      }
    }
    const LVector coef = constrained_fit(c, d, g);
    prof.coeffs_ = coef.cast<double>();
    double lo = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= kMonotoneSamples; ++s) {
      lo = std::min(lo, prof.interior(eps * s / kMonotoneSamples, 1));
    }
    prof.min_slope_ = lo;
    if (lo > 0.0) return prof;
  }
  throw Error(ErrorKind::kMonotonicity, "no monotone odd interpolant up to degree " +
                                            std::to_string(2 * (r + 1 + kMaxExtraTerms) - 1));
}

DesingProfile build_odd_profile(int k, double eps, int r) {
  check_args(k, 0, eps, r);
  DesingProfile prof;
  prof.parity_ = Parity::kOdd;
  prof.k_ = k;
  prof.eps_ = eps;
  prof.r_ = r;
  // Conditions in u at 1 (core u^2 - 2) and 2 (far branch).
  LVector d(2 * (r + 1));
  for (int n = 0; n <= r; ++n) {
    d(n) = n == 0 ? -1.0 : (n <= 2 ? 2.0 : 0.0);
    double far_n;
    if (k == 0) {
      far_n = n == 0 ? std::log(2.0) : falling(-1.0, n - 1) * std::pow(2.0, -n);
    } else {
      const double p = -(2.0 * k + 2.0);
      far_n = -falling(p, n) / (2.0 * k + 2.0) * std::pow(2.0, p - n);
    }
    d(r + 1 + n) = far_n;
  }
  for (int extra = 0; extra <= kMaxExtraTerms; ++extra) {
    const int terms = 2 * (r + 1) + extra;
    LMatrix c = LMatrix::Zero(2 * (r + 1), terms), g = LMatrix::Zero(terms, terms);
    for (int n = 0; n <= r; ++n) {
      c(n, n) = falling(n, n);  // v = 0
      for (int j = 0; j < terms; ++j) c(r + 1 + n, j) = falling(j, n);  // v = 1
    }
    for (int i = 2; i < terms; ++i) {
      for (int j = 2; j < terms; ++j) {
        const long double a = i, b = j;
        g(i, j) = a * (a - 1) * b * (b - 1) / (a + b - 3);
      }
    }
    const LVector coef = constrained_fit(c, d, g);
    prof.coeffs_ = coef.cast<double>();
    double lo = std::numeric_limits<double>::infinity();
    for (int s = 0; s <= kMonotoneSamples; ++s) {
      lo = std::min(lo, prof.interior(eps * (1.0 + double(s) / kMonotoneSamples), 1));
    }
    prof.min_slope_ = lo;
    if (lo > 0.0) return prof;
  }
  throw Error(ErrorKind::kMonotonicity, "no monotone bridge up to degree " +
                                            std::to_string(2 * (r + 1) + kMaxExtraTerms - 1));
}

DesingularizedForm desingularize(const BmNambuForm& theta, const DesingProfile& profile) {
  if (theta.m() != profile.m()) {
    throw Error(ErrorKind::kParityMismatch, "profile built for m = " +
                                                std::to_string(profile.m()) + ", form has m = " +
                                                std::to_string(theta.m()));
  }
  if (profile.support() > theta.critical().collar_width()) {
    throw Error(ErrorKind::kProfileTooWide,
                "profile support " + std::to_string(profile.support()) +
                    " exceeds collar width " + std::to_string(theta.critical().collar_width()));
  }
  auto density = std::make_shared<const DesingProfile>(profile);
  DesingularizedForm out{TwoForm{theta.assemble(density)},
                         profile.parity(),
                         theta.m(),
                         density,
                         theta.folds().empty() ? theta.critical()
                                               : theta.critical().merged(theta.folds()),
                         std::nullopt,
                         theta};
  if (out.parity == Parity::kOdd && theta.has_singular_part()) {
    out.folded = certify_folded(out.omega, out.critical);
  }
  return out;
}

DesingReport verify_desing(const DesingularizedForm& d) {
  DesingReport report;
  const BmNambuForm& theta = d.source;
  const Field& coef = d.omega.coef;
  if (!theta.has_singular_part()) {
    report.identical_to_source = true;
    report.certified = d.parity == Parity::kOdd;
    return report;
  }
  const int ny = 4 * std::max(coef.bandwidth(), 16);
  if (d.parity == Parity::kEven) {
    report.min_abs_coef = std::numeric_limits<double>::infinity();
    const int nx = 2048;
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < ny; ++j) {
        report.min_abs_coef =
            std::min(report.min_abs_coef, std::abs(coef(double(i) / nx, double(j) / ny)));
      }
    }
    // Dense sampling right at the circles and across the profile interior.
    for (double c : theta.critical().circles()) {
      for (int i = -200; i <= 200; ++i) {
        for (int j = 0; j < ny; ++j) {
          const double x = c + d.profile->epsilon() * i / 100.0;
          report.min_abs_coef = std::min(report.min_abs_coef, std::abs(coef(x, double(j) / ny)));
        }
      }
    }
  } else {
    try {
      certify_folded(d.omega, d.critical);
      report.certified = true;
    } catch (const Error& e) {
      report.certification_error = e.what();
    }
    // Central-difference slope at each circle against 2 / eps^{2k+2} alpha_0(y).
    const double expected = 2.0 / std::pow(d.profile->epsilon(), 2 * d.profile->k() + 2);
    const double h = 1e-6 * d.profile->epsilon();
    for (size_t c = 0; c < theta.critical().size(); ++c) {
      const double x = theta.critical().circles()[c];
      const SpectralField1D& a0 = theta.laurent()[c].alpha[0];
      double worst = 0.0;
      for (int j = 0; j < ny; ++j) {
        const double y = double(j) / ny;
        const double measured = (coef(x + h, y) - coef(x - h, y)) / (2.0 * h);
        worst = std::max(worst, std::abs(measured / (expected * a0(y)) - 1.0));
      }
      report.slope_ratio_error.push_back(worst);
    }
  }

  report.outside_applicable = !(d.parity == Parity::kOdd && d.profile->k() > 0);
  if (report.outside_applicable) {
    const LaurentSampler source(theta);
    const double support = d.profile->support();
    const int nx = 1024;
    for (int i = 0; i < nx; ++i) {
      const double x = (i + 0.5) / nx;
      double t = 0.0;
      theta.critical().nearest(x, &t);
      if (std::abs(t) <= support) continue;
      for (int j = 0; j < ny; j += 4) {
        const double y = double(j) / ny;
        report.outside_difference =
            std::max(report.outside_difference, std::abs(coef(x, y) - source(x, y)));
      }
    }
  }
  return report;
}

}  // namespace foldvol
