#pragma once

// f_eps profiles replacing dt / t^m near the critical set, and the resulting
// desingularized forms (smooth volume forms for even m, folded for odd m).

#include <optional>
#include <string>
#include <vector>

#include "foldvol/bm_structures.hpp"
#include "foldvol/field.hpp"

namespace foldvol {

enum class Parity { kEven, kOdd };

// Profile f_eps(x) = eps^{-s} f(x / eps), s = 2k - 1 (even m = 2k) or 2k
// (odd m = 2k + 1). The interior piece (even: |u| <= 1, odd: 1 <= |u| <= 2) is
// a polynomial with C^r contact found by Hermite interpolation; extra degrees
// of freedom, added only when monotonicity fails, minimize the integral of
// the squared second derivative.
class DesingProfile final : public CollarDensity {
 public:
  Parity parity() const { return parity_; }
  int k() const { return k_; }
  int m() const { return parity_ == Parity::kEven ? 2 * k_ : 2 * k_ + 1; }
  double epsilon() const { return eps_; }
  int contact_order() const { return r_; }
  int degree() const;  // degree of the interior polynomial
  const Eigen::VectorXd& coefficients() const { return coeffs_; }

  // |x| beyond which f_eps is the printed far branch.
  double support() const { return parity_ == Parity::kEven ? eps_ : 2.0 * eps_; }

  double value(double x) const { return derivative(x, 0); }
  // n-th derivative of f_eps, 0 <= n <= r + 2.
  double derivative(double x, int n) const;

  double density(double t) const override { return derivative(t, 1); }
  double density_derivative(double t) const override { return derivative(t, 2); }
  std::vector<double> knots() const override;

  // min f_eps' on the interior piece (sampled at 10^4 points; even: [-eps,
  // eps], odd: eps <= |x| <= 2 eps).
  double min_interior_slope() const { return min_slope_; }
  // Max over orders 0..r and gluing points of the one-sided derivative jump.
  double contact_mismatch() const;

 private:
  friend DesingProfile build_even_profile(int, double, int);
  friend DesingProfile build_odd_profile(int, double, int);

  double far(double x, int n) const;
  double interior(double x, int n) const;
  double core(double x, int n) const;

  Parity parity_ = Parity::kOdd;
  int k_ = 0;
  double eps_ = 0.0;
  int r_ = 3;
  Eigen::VectorXd coeffs_;  // even: a_j u^{2j+1}; odd: a_j (|u| - 1)^j
  double min_slope_ = 0.0;
};

// Throws kMalformedInput for k < 1 or eps <= 0, kMonotonicity if no degree up
// to r + 9 keeps the slope positive.
DesingProfile build_even_profile(int k, double eps, int r = 3);
DesingProfile build_odd_profile(int k, double eps, int r = 3);

struct DesingularizedForm {
  TwoForm omega;
  Parity parity = Parity::kOdd;
  int m = 1;
  std::shared_ptr<const DesingProfile> profile;
  CriticalSet critical;            // Z plus fold circles
  std::optional<FoldedVolumeForm> folded;  // odd m only
  BmNambuForm source;
};

// Throws kParityMismatch, kProfileTooWide (support beyond the collar).
DesingularizedForm desingularize(const BmNambuForm& theta, const DesingProfile& profile);

struct DesingReport {
  bool identical_to_source = false;   // no singular part
  double min_abs_coef = 0.0;          // even
  bool certified = false;             // odd
  std::string certification_error;
  std::vector<double> slope_ratio_error;  // per circle, max |measured/expected - 1|
  bool outside_applicable = true;     // false for odd k > 0
  double outside_difference = 0.0;    // sup |omega_eps - theta| beyond the support
};

DesingReport verify_desing(const DesingularizedForm& d);

}  // namespace foldvol
