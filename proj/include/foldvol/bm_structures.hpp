#pragma once

// Folded volume forms and b^m-Nambu top-degree forms whose critical set is a
// union of coordinate circles {x = c}.

#include <functional>
#include <vector>

#include "foldvol/critical_set.hpp"
#include "foldvol/exterior.hpp"
#include "foldvol/field.hpp"
#include "foldvol/spectral_field.hpp"

namespace foldvol {

inline constexpr double kDefaultTheta = 1e-3;
inline constexpr double kDefaultTolZero = 1e-10;

struct FoldCertificate {
  double max_abs_on_z = 0.0;           // sup |coef| over circle samples
  double min_normal_derivative = 0.0;  // min |d coef / dx| over circle samples
  std::vector<int> coorientations;     // measured sign of d coef / dx per circle
};

class FoldedVolumeForm {
 public:
  FoldedVolumeForm(TwoForm form, CriticalSet critical, FoldCertificate certificate)
      : form_(std::move(form)), critical_(std::move(critical)),
        certificate_(std::move(certificate)) {}

  const TwoForm& form() const { return form_; }
  const Field& coef() const { return form_.coef; }
  const CriticalSet& critical() const { return critical_; }
  const FoldCertificate& certificate() const { return certificate_; }
  double operator()(double x, double y) const { return form_(x, y); }

 private:
  TwoForm form_;
  CriticalSet critical_;  // carries the measured coorientations
  FoldCertificate certificate_;
};

// Samples coef and d coef/dx on each circle (>= 4K points) and scans every
// region for sign changes. Throws kNotFolded on a zero-set mismatch or a
// coorientation disagreeing with the declared one, kTransversality when the
// normal derivative drops below theta.
FoldedVolumeForm certify_folded(const TwoForm& omega, const CriticalSet& z,
                                double theta = kDefaultTheta, double tol_zero = kDefaultTolZero);

// mu = Omega / t on one collar, evaluated by direct division away from the
// circle and one-sided Taylor division near it.
class CollarQuotient {
 public:
  CollarQuotient(Field coef, CollarSpec collar, double delta);
  double operator()(double x, double y) const;
  const CollarSpec& collar() const { return collar_; }

 private:
  Field coef_;
  CollarSpec collar_;
  double delta_;
};

// Throws kCollarTooWide when mu changes sign (or vanishes) on the collar.
CollarQuotient factor_defining(const FoldedVolumeForm& omega, const CollarSpec& collar);

// (1 - s) Omega0 + s Omega1, certified at s in {0, 1/4, 1/2, 3/4, 1} and at s.
// Throws kIncomparable for different circles, kPathDegeneracy for opposite
// coorientations.
FoldedVolumeForm convex_path(const FoldedVolumeForm& omega0, const FoldedVolumeForm& omega1,
                             double s);

// Laurent coefficients of one circle: alpha[i] multiplies dt / t^{m - i} ^ dy.
struct LaurentData {
  std::vector<SpectralField1D> alpha;
};

// Top-degree b^m form
//   smooth + sum_c w_c(t) * (sum_i alpha_{c,i}(y) t^{i - m} + beta)
// with w_c the collar blend of circle c. `folds` lists extra circles where the
// smooth part vanishes transversally; they matter only after desingularizing
// odd m, where the result must be folded on a torus.
class BmNambuForm {
 public:
  BmNambuForm(int m, CriticalSet critical, std::vector<LaurentData> laurent,
              SpectralField2D smooth, SpectralField2D beta = SpectralField2D(0),
              std::vector<double> folds = {});

  int m() const { return m_; }
  const CriticalSet& critical() const { return critical_; }
  const std::vector<LaurentData>& laurent() const { return laurent_; }
  const SpectralField2D& smooth() const { return smooth_; }
  const SpectralField2D& beta() const { return beta_; }
  const std::vector<double>& folds() const { return folds_; }
  bool has_singular_part() const;

  // Laurent terms with t^{i-m} replaced by density(t) * t^i when a density is
  // given. With no density the field is singular on Z.
  Field assemble(std::shared_ptr<const CollarDensity> density = nullptr) const;

 private:
  int m_;
  CriticalSet critical_;
  std::vector<LaurentData> laurent_;
  SpectralField2D smooth_;
  SpectralField2D beta_;
  std::vector<double> folds_;
};

// Pointwise evaluator of a b^m form off Z. Throws kSingularPoint on Z when
// the form has a singular part.
class LaurentSampler {
 public:
  explicit LaurentSampler(const BmNambuForm& theta);
  double operator()(double x, double y) const;

 private:
  Field field_;
  CriticalSet critical_;
  bool singular_;
};

LaurentSampler laurent_assemble(const BmNambuForm& theta);

}  // namespace foldvol
