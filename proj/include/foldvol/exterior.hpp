#pragma once

// Differential forms of degree 0..2 on the unit torus, the interior product,
// and pullback by discrete maps.

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <span>

#include "foldvol/critical_set.hpp"
#include "foldvol/field.hpp"
#include "foldvol/spectral_field.hpp"

namespace foldvol {

// a dx + b dy
struct OneForm {
  SpectralField2D a;
  SpectralField2D b;

  Eigen::Vector2d operator()(double x, double y) const { return {a(x, y), b(x, y)}; }
};

// coef dx^dy
struct TwoForm {
  Field coef;

  double operator()(double x, double y) const { return coef(x, y); }
  double integral() const { return coef.integrate_total(); }
};

struct VectorField {
  SpectralField2D vx;
  SpectralField2D vy;

  Eigen::Vector2d operator()(double x, double y) const { return {vx(x, y), vy(x, y)}; }
};

// Pointwise views, used where results are not band-limited.
using PointwiseOneForm = std::function<Eigen::Vector2d(double, double)>;
using PointwiseVectorField = std::function<Eigen::Vector2d(double, double)>;

OneForm d0(const SpectralField2D& f);
TwoForm d1(const OneForm& w);

// Interior product i_v Omega = (-Omega vy) dx + (Omega vx) dy. Requires a
// band-limited Omega; products are anti-aliased.
OneForm contract(const TwoForm& omega, const VectorField& v);
Eigen::Vector2d contract_at(const TwoForm& omega, const Eigen::Vector2d& v, double x, double y);

// Evaluates g(x, y) / t for several scalar functions at once, where t is the
// offset to the nearest circle: direct division when |t| >= delta, one-sided
// Taylor division on the row y otherwise.
void divide_by_defining(const CriticalSet& z, double delta, double x, double y,
                        const std::function<void(double, double, std::span<double>)>& sample,
                        std::span<double> quotients);

// Solution of i_v Omega = beta for a folded Omega with critical set z, evaluated
// through the factored quotient near the circles.
class ContractionField {
 public:
  ContractionField(Field omega, CriticalSet z, PointwiseOneForm beta, double delta);

  Eigen::Vector2d operator()(double x, double y) const;
  double delta() const { return delta_; }

 private:
  Field omega_;
  CriticalSet z_;
  PointwiseOneForm beta_;
  double delta_;
};

// Estimated vanishing order of a pointwise one-form at circle c: log-log slope
// of max_y |beta| against |t| for t in [t_min, t_max] on both sides; returns
// the smaller side. Infinity for identically zero samples.
double vanishing_order(const PointwiseOneForm& beta, double c, double t_min = 1e-4,
                       double t_max = 1e-2, int samples = 12, int y_samples = 32);

// Checks the contraction preconditions and returns the solution.
// Throws kIllPosedContraction when beta vanishes below second order on a circle,
// kNotFolded when Omega / t vanishes in a collar.
ContractionField solve_contraction(const TwoForm& omega, const CriticalSet& z,
                                   const PointwiseOneForm& beta, double delta = 1e-2);

// Orientation-preserving map of the torus sampled on an N x N grid. Stores the
// continuous displacement d with phi(p) = p + d(p); off-grid values use
// periodic bicubic (Catmull-Rom) interpolation of d.
class DiscreteMap {
 public:
  explicit DiscreteMap(int n = 0);
  DiscreteMap(Eigen::ArrayXXd dx, Eigen::ArrayXXd dy);
  static DiscreteMap translation(int n, double tx, double ty);

  int resolution() const { return n_; }
  const Eigen::ArrayXXd& displacement_x() const { return dx_; }
  const Eigen::ArrayXXd& displacement_y() const { return dy_; }
  Eigen::Vector2d grid_point(int i, int j) const { return {double(i) / n_, double(j) / n_}; }
  Eigen::Vector2d image(int i, int j) const {
    return grid_point(i, j) + Eigen::Vector2d(dx_(i, j), dy_(i, j));
  }
  Eigen::Vector2d operator()(const Eigen::Vector2d& p) const;

  // Jacobian entries (d phi_x/dx, d phi_x/dy, d phi_y/dx, d phi_y/dy) by
  // sixth-order centered differences of the displacement.
  std::array<Eigen::ArrayXXd, 4> jacobian() const;
  Eigen::ArrayXXd jacobian_determinant() const;

  // (*this) o inner, sampled on inner's grid.
  DiscreteMap compose(const DiscreteMap& inner) const;
  double max_displacement() const;

 private:
  int n_;
  Eigen::ArrayXXd dx_;
  Eigen::ArrayXXd dy_;
};

// Samples (phi^* Omega)(p) = Omega(phi(p)) det D phi(p) on phi's grid.
// Throws kOrientation on a nonpositive Jacobian determinant.
Eigen::ArrayXXd pullback_samples(const TwoForm& omega, const DiscreteMap& phi);
// Pullback projected to bandwidth K.
TwoForm pullback(const TwoForm& omega, const DiscreteMap& phi, int bandwidth = kDefaultBandwidth);

// Samples of a pointwise field on the N x N grid.
Eigen::ArrayXXd sample_grid(const std::function<double(double, double)>& f, int n);

}  // namespace foldvol
