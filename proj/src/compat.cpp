#include "foldvol/compat.hpp"

#include <chrono>
#include <cmath>
#include <random>

#include "foldvol/desingularization.hpp"
#include "foldvol/error.hpp"
#include "foldvol/relative_primitive.hpp"

namespace foldvol {

bool CompatReport::consistent() const {
  for (const CompatRow& row : rows) {
    if (!row.error.empty()) return false;
    if (row.folded_equivalent != bm_equivalent) return false;
    if (row.witness && !row.witness->success) return false;
  }
  return true;
}

CompatReport compat_experiment(const BmNambuForm& theta0, const BmNambuForm& theta1,
                               const ExperimentConfig& config) {
  if (theta0.m() % 2 == 0 || theta1.m() % 2 == 0) {
    throw Error(ErrorKind::kWrongParity, "compatibility holds for odd m = 2k + 1 only");
  }
  const BmVerdict bm = bm_equivalent(theta0, theta1, config.tol);
  CompatReport report;
  report.m = theta0.m();
  report.bm_equivalent = bm.equivalent;
  report.periods0 = modular_periods(theta0);
  report.periods1 = modular_periods(theta1);
  report.finite_part0 = liouville_volume_pv(theta0, {}).finite_part;
  report.finite_part1 = liouville_volume_pv(theta1, {}).finite_part;
  const int k = (theta0.m() - 1) / 2;

  for (double eps : config.eps) {
    CompatRow row;
    row.eps = eps;
    try {
      const DesingProfile profile = build_odd_profile(k, eps, config.contact_order);
      const DesingularizedForm d0 = desingularize(theta0, profile);
      const DesingularizedForm d1 = desingularize(theta1, profile);
      report.critical = d0.critical.circles();
      const FoldedVolumeForm f0 = d0.folded ? *d0.folded : certify_folded(d0.omega, d0.critical);
      const FoldedVolumeForm f1 = d1.folded ? *d1.folded : certify_folded(d1.omega, d1.critical);
      row.volumes0 = regional_volumes(f0).volumes;
      row.volumes1 = regional_volumes(f1).volumes;
      const FoldedVerdict verdict = folded_equivalent(f0, f1, config.tol);
      row.folded_equivalent = verdict.equivalent;
      row.max_defect = verdict.max_defect;
      for (double d : obstruction(d1.omega.coef - d0.omega.coef, d0.critical)) {
        row.mechanism_defect = std::max(row.mechanism_defect, std::abs(d));
      }
      if (config.witness && verdict.equivalent) {
        const auto start = std::chrono::steady_clock::now();
        const MoserResult moser = run_moser(f0, f1, config.moser);
        WitnessSummary w;
        w.success = moser.certificate.success();
        w.pullback_error = moser.certificate.pullback_error;
        w.z_fixing_error = moser.certificate.z_fixing_error;
        w.min_jacobian = moser.certificate.min_jacobian;
        w.primitive_residual = moser.primitive.residual;
        w.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        row.witness = w;
      }
    } catch (const Error& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

namespace {

SpectralField2D fold_profile() {
  // sin(2 pi x) - sin(4 pi x) / 2 = sin(2 pi x) (1 - cos(2 pi x)): zero of
  // order three at x = 0, simple zero at x = 1/2.
  return SpectralField2D::sine(1, 0, 1.0, 4) + SpectralField2D::sine(2, 0, -0.5, 4);
}

BmNambuForm make_form(const SpectralField1D& alpha0, const SpectralField2D& modulation) {
  const CriticalSet z({0.0}, {}, 0.4);
  const SpectralField2D smooth = multiply(fold_profile(), modulation);
  return BmNambuForm(1, z, {LaurentData{{alpha0}}}, smooth, SpectralField2D(0), {0.5});
}

}  // namespace

BmNambuForm single_circle_form(double amplitude, double delta, double smooth_mod) {
  const SpectralField1D alpha =
      SpectralField1D::constant(amplitude, 2) + SpectralField1D::cosine(1, amplitude * delta, 2);
  const SpectralField2D modulation =
      SpectralField2D::constant(1.0, 4) + SpectralField2D::cosine(0, 1, smooth_mod, 4);
  return make_form(alpha, modulation);
}

std::pair<BmNambuForm, BmNambuForm> random_equivalent_pair(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double amplitude = 1.0 + 0.5 * u(rng);
  auto one = [&] {
    // |perturbation| <= 0.45 amplitude keeps alpha_0 positive.
    const double a = 0.3 * u(rng), b = 0.15 * u(rng);
    const SpectralField1D alpha = SpectralField1D::constant(amplitude, 2) +
                                  SpectralField1D::cosine(1, amplitude * a, 2) +
                                  SpectralField1D::sine(2, amplitude * b, 2);
    // |modulation - 1| <= 0.5 keeps the fold at x = 1/2 transversal.
    const double c = 0.3 * u(rng), d = 0.2 * u(rng);
    const SpectralField2D modulation = SpectralField2D::constant(1.0, 4) +
                                       SpectralField2D::cosine(0, 1, c, 4) +
                                       SpectralField2D::sine(0, 1, d, 4);
    return make_form(alpha, modulation);
  };
  BmNambuForm first = one();
  BmNambuForm second = one();
  return {std::move(first), std::move(second)};
}

}  // namespace foldvol
