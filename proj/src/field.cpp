#include "foldvol/field.hpp"

#include <algorithm>
#include <cmath>

#include "foldvol/error.hpp"
#include "foldvol/quadrature.hpp"

namespace foldvol {

double Blend::weight(double t) const {
  if (width <= 0.0) return std::abs(t) <= inner ? 1.0 : 0.0;
  return smooth_ramp((std::abs(t) - inner) / width);
}

double Blend::weight_derivative(double t) const {
  if (width <= 0.0) return 0.0;
  const double sign = t < 0.0 ? -1.0 : 1.0;
  return sign * smooth_ramp_derivative((std::abs(t) - inner) / width) / width;
}

CollarProfile::CollarProfile(double center, Blend blend, int power,
                             std::shared_ptr<const CollarDensity> density, bool blended)
    : center_(center), blend_(blend), power_(power), density_(std::move(density)),
      blended_(blended) {}

double CollarProfile::value(double x) const {
  const double t = wrapped_offset(x, center_);
  const double w = blended_ ? blend_.weight(t) : 1.0;
  if (w == 0.0) return 0.0;
  const double rho = density_ ? density_->density(t) : 1.0;
  return w * rho * ipow(t, power_);
}

double CollarProfile::derivative(double x) const {
  const double t = wrapped_offset(x, center_);
  const double w = blended_ ? blend_.weight(t) : 1.0;
  const double dw = blended_ ? blend_.weight_derivative(t) : 0.0;
  if (w == 0.0 && dw == 0.0) return 0.0;
  const double rho = density_ ? density_->density(t) : 1.0;
  const double drho = density_ ? density_->density_derivative(t) : 0.0;
  const double tp = ipow(t, power_);
  const double dtp = power_ == 0 ? 0.0 : power_ * ipow(t, power_ - 1);
  return dw * rho * tp + w * drho * tp + w * rho * dtp;
}

std::vector<double> CollarProfile::knots() const {
  std::vector<double> offsets{0.0};
  if (blended_) {
    offsets.insert(offsets.end(), {blend_.inner, -blend_.inner, blend_.inner + blend_.width,
                                   -(blend_.inner + blend_.width)});
  }
  if (density_) {
    for (double k : density_->knots()) offsets.push_back(k);
  }
  std::vector<double> out;
  for (double o : offsets) out.push_back(wrap01(center_ + o));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](double a, double b) { return std::abs(a - b) < 1e-15; }),
            out.end());
  return out;
}

double Field::operator()(double x, double y) const {
  double value = smooth_(x, y);
  for (const FieldTerm& term : terms_) {
    const double g = term.profile->value(x);
    if (g != 0.0) value += g * term.factor(x, y);
  }
  return value;
}

double Field::dx(double x, double y) const {
  double value = smooth_.partial(Axis::kX, x, y);
  for (const FieldTerm& term : terms_) {
    const double g = term.profile->value(x);
    const double dg = term.profile->derivative(x);
    if (dg != 0.0) value += dg * term.factor(x, y);
    if (g != 0.0) value += g * term.factor.partial(Axis::kX, x, y);
  }
  return value;
}

double Field::integrate_strip(double x_lo, double x_hi) const {
  double total = foldvol::integrate_strip(smooth_, x_lo, x_hi);
  for (const FieldTerm& term : terms_) {
    if (term.profile->singular()) {
      throw Error(ErrorKind::kSingularPoint, "strip integral of a singular field");
    }
    const SpectralField2D& f = term.factor;
    // The y-integral leaves the ky = 0 column of the factor.
    auto integrand = [&](double x) {
      double mean = f.mean();
      for (int kx = 1; kx <= f.max_kx(); ++kx) {
        const Complex c = f.coeff(kx, 0);
        if (c != Complex{}) mean += 2.0 * (c * std::polar(1.0, kTwoPi * kx * x)).real();
      }
      return term.profile->value(x) * mean;
    };
    std::vector<double> knots = term.profile->knots();
    // Knots are in [0, 1); shift copies so strips crossing 1 are split too.
    const size_t n = knots.size();
    for (size_t i = 0; i < n; ++i) {
      knots.push_back(knots[i] + 1.0);
      knots.push_back(knots[i] - 1.0);
    }
    total += integrate_piecewise(integrand, x_lo, x_hi, knots, 8, 16);
  }
  return total;
}

bool Field::singular() const {
  return std::any_of(terms_.begin(), terms_.end(),
                     [](const FieldTerm& t) { return t.profile->singular(); });
}

int Field::bandwidth() const {
  int k = smooth_.bandwidth();
  for (const FieldTerm& term : terms_) k = std::max(k, term.factor.bandwidth());
  return k;
}

std::vector<double> Field::knots() const {
  std::vector<double> out;
  for (const FieldTerm& term : terms_) {
    const auto k = term.profile->knots();
    out.insert(out.end(), k.begin(), k.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Field Field::scaled(double s) const {
  Field out = *this;
  out.smooth_ = s * smooth_;
  for (FieldTerm& term : out.terms_) term.factor = s * term.factor;
  return out;
}

Field operator+(const Field& a, const Field& b) {
  Field out = a;
  out.smooth_ = a.smooth_ + b.smooth_;
  out.terms_.insert(out.terms_.end(), b.terms_.begin(), b.terms_.end());
  return out;
}

}  // namespace foldvol
