#include "foldvol/bm_structures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "foldvol/error.hpp"
#include "foldvol/quadrature.hpp"

namespace foldvol {

namespace {

int sample_count(const Field& f) { return 4 * std::max(f.bandwidth(), 16); }

std::string at(double c) { return "x = " + std::to_string(c); }

}  // namespace

FoldedVolumeForm certify_folded(const TwoForm& omega, const CriticalSet& z, double theta,
                                double tol_zero) {
  const Field& f = omega.coef;
  const int ny = sample_count(f);
  FoldCertificate cert;
  cert.min_normal_derivative = std::numeric_limits<double>::infinity();
  std::vector<int> signs(z.size(), 0);

  for (size_t i = 0; i < z.size(); ++i) {
    const double c = z.circles()[i];
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (int j = 0; j < ny; ++j) {
      const double y = double(j) / ny;
      cert.max_abs_on_z = std::max(cert.max_abs_on_z, std::abs(f(c, y)));
      const double d = f.dx(c, y);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    if (cert.max_abs_on_z > tol_zero) {
      throw Error(ErrorKind::kNotFolded, "coefficient " + std::to_string(cert.max_abs_on_z) +
                                             " on circle " + at(c));
    }
    const double m = lo > 0.0 ? lo : (hi < 0.0 ? -hi : 0.0);
    cert.min_normal_derivative = std::min(cert.min_normal_derivative, m);
    if (m < theta) {
      throw Error(ErrorKind::kTransversality,
                  "normal derivative " + std::to_string(m) + " below threshold on " + at(c));
    }
    signs[i] = lo > 0.0 ? 1 : -1;
    if (z.has_coorientations() && z.coorientations()[i] != signs[i]) {
      throw Error(ErrorKind::kNotFolded, "coorientation mismatch on " + at(c));
    }
  }

  // Between consecutive circles the coefficient must keep the sign dictated by
  // both neighbouring slopes.
  const int nx_total = std::max(8 * f.bandwidth(), 256);
  for (size_t j = 0; j < z.regions(); ++j) {
    const auto [lo, hi] = z.region_bounds(j);
    const int right_of_lo = signs[j];
    const int left_of_hi = -signs[(j + 1) % z.size()];
    if (right_of_lo != left_of_hi) {
      throw Error(ErrorKind::kNotFolded, "odd number of zeros expected between " + at(lo) +
                                             " and " + at(hi));
    }
    const int nx = std::max(16, static_cast<int>(std::ceil(nx_total * (hi - lo))));
    for (int a = 0; a < nx; ++a) {
      const double x = lo + (a + 0.5) / nx * (hi - lo);
      for (int b = 0; b < ny; ++b) {
        const double v = f(x, double(b) / ny);
        if (!(v * right_of_lo > 0.0)) {
          throw Error(ErrorKind::kNotFolded, "coefficient vanishes off the critical set near " +
                                                 at(wrap01(x)) + ", y = " +
                                                 std::to_string(double(b) / ny));
        }
      }
    }
  }
  cert.coorientations = signs;
  return FoldedVolumeForm(omega, z.with_coorientations(signs), std::move(cert));
}

CollarQuotient::CollarQuotient(Field coef, CollarSpec collar, double delta)
    : coef_(std::move(coef)), collar_(collar), delta_(delta) {}

double CollarQuotient::operator()(double x, double y) const {
  const double t = collar_.t(x);
  if (std::abs(t) >= delta_) return coef_(x, y) / t;
  const double c = collar_.center;
  return taylor_quotient([&](double tau) { return coef_(c + tau, y); }, t, delta_);
}

CollarQuotient factor_defining(const FoldedVolumeForm& omega, const CollarSpec& collar) {
  if (!(collar.width > 0.0)) throw Error(ErrorKind::kMalformedInput, "collar width must be > 0");
  // t is a wrapped offset, so a collar of width >= 1/2 overlaps itself
  if (collar.width >= 0.5) throw Error(ErrorKind::kCollarTooWide, "collar width must be < 1/2");
  CollarQuotient mu(omega.coef(), collar, std::min(1e-2, 0.5 * collar.width));
  const int nt = 65, ny = sample_count(omega.coef());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int a = 0; a < nt; ++a) {
    const double t = collar.width * (2.0 * a / (nt - 1) - 1.0);
    for (int b = 0; b < ny; ++b) {
      const double v = mu(collar.center + t, double(b) / ny);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(lo > 0.0 || hi < 0.0)) {
    throw Error(ErrorKind::kCollarTooWide, "Omega / t changes sign within the collar of " +
                                               at(collar.center));
  }
  return mu;
}

FoldedVolumeForm convex_path(const FoldedVolumeForm& omega0, const FoldedVolumeForm& omega1,
                             double s) {
  const CriticalSet& z = omega0.critical();
  if (!z.same_circles(omega1.critical())) {
    throw Error(ErrorKind::kIncomparable, "convex path needs a common critical set");
  }
  if (z.coorientations() != omega1.critical().coorientations()) {
    throw Error(ErrorKind::kPathDegeneracy,
                "coorientations differ, so the path vanishes identically somewhere on Z");
  }
  auto combine = [&](double u) {
    return TwoForm{omega0.coef().scaled(1.0 - u) + omega1.coef().scaled(u)};
  };
  for (double u : {0.0, 0.25, 0.5, 0.75, 1.0}) certify_folded(combine(u), z);
  if (s == 0.0) return omega0;
  if (s == 1.0) return omega1;
  return certify_folded(combine(s), z);
}

// ---------------------------------------------------------------- b^m forms

BmNambuForm::BmNambuForm(int m, CriticalSet critical, std::vector<LaurentData> laurent,
                         SpectralField2D smooth, SpectralField2D beta, std::vector<double> folds)
    : m_(m), critical_(std::move(critical)), laurent_(std::move(laurent)),
      smooth_(std::move(smooth)), beta_(std::move(beta)), folds_(std::move(folds)) {
  if (m_ < 1) throw Error(ErrorKind::kMalformedInput, "order m must be >= 1");
  if (laurent_.size() != critical_.size()) {
    throw Error(ErrorKind::kMalformedInput, "one Laurent block per circle required");
  }
  for (LaurentData& l : laurent_) {
    if (static_cast<int>(l.alpha.size()) > m_) {
      throw Error(ErrorKind::kMalformedInput, "more than m Laurent coefficients");
    }
    l.alpha.resize(m_);
  }
  for (double& f : folds_) {
    f = wrap01(f);
    double t = 0.0;
    critical_.nearest(f, &t);
    if (std::abs(t) <= critical_.collar_width()) {
      throw Error(ErrorKind::kMalformedInput, "fold circle inside a collar");
    }
  }
}

bool BmNambuForm::has_singular_part() const {
  for (const LaurentData& l : laurent_) {
    for (const SpectralField1D& a : l.alpha) {
      if (!a.is_zero()) return true;
    }
  }
  return false;
}

Field BmNambuForm::assemble(std::shared_ptr<const CollarDensity> density) const {
  const Blend blend = critical_.blend();
  std::vector<FieldTerm> terms;
  for (size_t c = 0; c < critical_.size(); ++c) {
    const double center = critical_.circles()[c];
    for (int i = 0; i < m_; ++i) {
      const SpectralField1D& a = laurent_[c].alpha[i];
      if (a.is_zero()) continue;
      const int power = density ? i : i - m_;
      terms.push_back({std::make_shared<CollarProfile>(center, blend, power, density),
                       SpectralField2D::from_y(a, a.bandwidth())});
    }
    if (!beta_.is_zero()) {
      terms.push_back({std::make_shared<CollarProfile>(center, blend, 0), beta_});
    }
  }
  return Field(smooth_, std::move(terms));
}

LaurentSampler::LaurentSampler(const BmNambuForm& theta)
    : field_(theta.assemble()), critical_(theta.critical()),
      singular_(theta.has_singular_part()) {}

double LaurentSampler::operator()(double x, double y) const {
  if (singular_) {
    double t = 0.0;
    critical_.nearest(x, &t);
    if (std::abs(t) < 1e-14) {
      throw Error(ErrorKind::kSingularPoint, "b^m form evaluated on its critical set");
    }
  }
  return field_(x, y);
}

LaurentSampler laurent_assemble(const BmNambuForm& theta) { return LaurentSampler(theta); }

}  // namespace foldvol
