#pragma once

// Coefficient fields of top-degree forms that are not band-limited.
//
// A Field is a band-limited part plus a sum of terms g(x) * F(x, y), where g
// is a piecewise-smooth periodic profile in x with known knots and F is
// band-limited. Singular Laurent forms and their desingularizations both live
// in this class; everything downstream consumes it through pointwise
// evaluators and strip integrals.

#include <memory>
#include <vector>

#include "foldvol/spectral_field.hpp"

namespace foldvol {

// Periodic function of x on [0, 1).
class Profile1D {
 public:
  virtual ~Profile1D() = default;
  virtual double value(double x) const = 0;
  virtual double derivative(double x) const = 0;
  // Points in [0, 1) where smoothness may drop; quadrature splits there.
  virtual std::vector<double> knots() const = 0;
  // True if the profile is unbounded at some knot.
  virtual bool singular() const { return false; }
};

// Radial density in the defining function t, used to replace t^{-m}.
class CollarDensity {
 public:
  virtual ~CollarDensity() = default;
  virtual double density(double t) const = 0;
  virtual double density_derivative(double t) const = 0;
  virtual std::vector<double> knots() const = 0;  // in t
};

// Partition-of-unity weight around a circle: 1 on |t| <= inner, smoothly
// down to 0 at |t| = inner + width.
struct Blend {
  double inner = 0.0;
  double width = 0.0;

  double weight(double t) const;
  double weight_derivative(double t) const;
};

// g(x) = w(t) * rho(t) * t^power with t the wrapped offset from `center`;
// w is the blend (or 1 when `blended` is false) and rho the optional density.
class CollarProfile final : public Profile1D {
 public:
  CollarProfile(double center, Blend blend, int power,
                std::shared_ptr<const CollarDensity> density = nullptr, bool blended = true);

  double value(double x) const override;
  double derivative(double x) const override;
  std::vector<double> knots() const override;
  bool singular() const override { return power_ < 0 && density_ == nullptr; }

  double center() const { return center_; }
  int power() const { return power_; }
  const Blend& blend() const { return blend_; }

 private:
  double center_;
  Blend blend_;
  int power_;
  std::shared_ptr<const CollarDensity> density_;
  bool blended_;
};

struct FieldTerm {
  std::shared_ptr<const Profile1D> profile;
  SpectralField2D factor;
};

class Field {
 public:
  Field() = default;
  Field(SpectralField2D smooth) : smooth_(std::move(smooth)) {}  // NOLINT implicit
  Field(SpectralField2D smooth, std::vector<FieldTerm> terms)
      : smooth_(std::move(smooth)), terms_(std::move(terms)) {}

  double operator()(double x, double y) const;
  double dx(double x, double y) const;
  double integrate_strip(double x_lo, double x_hi) const;
  double integrate_total() const { return integrate_strip(0.0, 1.0); }

  bool band_limited() const { return terms_.empty(); }
  bool singular() const;
  const SpectralField2D& spectral_part() const { return smooth_; }
  const std::vector<FieldTerm>& terms() const { return terms_; }
  int bandwidth() const;
  std::vector<double> knots() const;

  Field scaled(double s) const;
  friend Field operator+(const Field& a, const Field& b);
  friend Field operator-(const Field& a, const Field& b) { return a + b.scaled(-1.0); }
  friend Field operator*(double s, const Field& a) { return a.scaled(s); }

 private:
  SpectralField2D smooth_;
  std::vector<FieldTerm> terms_;
};

}  // namespace foldvol
