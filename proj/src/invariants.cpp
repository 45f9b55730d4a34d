#include "foldvol/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "foldvol/error.hpp"
#include "foldvol/quadrature.hpp"

namespace foldvol {

RegionalVolumes regional_volumes(const Field& coef, const CriticalSet& z) {
  RegionalVolumes out;
  for (size_t j = 0; j < z.regions(); ++j) {
    const auto [lo, hi] = z.region_bounds(j);
    out.volumes.push_back(coef.integrate_strip(lo, hi));
    out.total += out.volumes.back();
  }
  return out;
}

RegionalVolumes regional_volumes(const FoldedVolumeForm& omega) {
  return regional_volumes(omega.coef(), omega.critical());
}

FoldedVerdict folded_equivalent(const FoldedVolumeForm& omega0, const FoldedVolumeForm& omega1,
                                double tol) {
  if (!omega0.critical().same_circles(omega1.critical())) {
    throw Error(ErrorKind::kIncomparable,
                "different critical sets; conjugating the circles themselves is not attempted");
  }
  if (omega0.critical().coorientations() != omega1.critical().coorientations()) {
    throw Error(ErrorKind::kIncomparable, "coorientations differ");
  }
  const RegionalVolumes v0 = regional_volumes(omega0);
  const RegionalVolumes v1 = regional_volumes(omega1);
  FoldedVerdict verdict;
  for (size_t j = 0; j < v0.volumes.size(); ++j) {
    verdict.defects.push_back(v1.volumes[j] - v0.volumes[j]);
    verdict.max_defect = std::max(verdict.max_defect, std::abs(verdict.defects.back()));
  }
  verdict.equivalent = verdict.max_defect <= tol;
  return verdict;
}

ModularPeriods modular_periods(const BmNambuForm& theta) {
  ModularPeriods p;
  p.m = theta.m();
  for (const LaurentData& l : theta.laurent()) {
    std::vector<double> row(theta.m());
    for (int i = 1; i <= theta.m(); ++i) row[i - 1] = l.alpha[theta.m() - i].mean();
    p.periods.push_back(std::move(row));
  }
  return p;
}

namespace {

// Integral of w(t) t^p over eps <= |t|, both sides.
double symmetric_tail(const Blend& w, int p, double eps) {
  if (p % 2 != 0) return 0.0;
  const double inner = std::max(eps, w.inner);
  double one_side = 0.0;
  if (eps < w.inner) {
    one_side += (std::pow(w.inner, p + 1) - std::pow(eps, p + 1)) / (p + 1);
  }
  if (w.width > 0.0) {
    one_side += integrate_gl([&](double t) { return w.weight(t) * std::pow(t, p); }, inner,
                             w.inner + w.width, 16, 16);
  }
  return 2.0 * one_side;
}

}  // namespace

LiouvilleVolume liouville_volume_pv(const BmNambuForm& theta, const std::vector<double>& cutoffs) {
  const CriticalSet& z = theta.critical();
  const Blend blend = z.blend();
  LiouvilleVolume out;
  out.cutoffs = cutoffs;

  // Bounded part: smooth remainder plus the blended beta terms.
  const BmNambuForm bounded(theta.m(), z, std::vector<LaurentData>(z.size()), theta.smooth(),
                            theta.beta(), theta.folds());
  const Field bounded_field = bounded.assemble();
  out.finite_part = bounded_field.integrate_total();

  const ModularPeriods periods = modular_periods(theta);
  const double scale = 1.0 + std::abs(out.finite_part);
  for (size_t c = 0; c < z.size(); ++c) {
    for (int order = 2; order <= theta.m(); order += 2) {
      if (std::abs(periods.at(c, order)) > 1e-12 * scale) out.diverged = true;
    }
  }

  for (double eps : cutoffs) {
    if (!(eps > 0.0) || eps >= z.collar_width()) {
      throw Error(ErrorKind::kMalformedInput,
                  "cutoff " + std::to_string(eps) + " must lie in (0, collar width)");
    }
    double total = out.finite_part;
    for (size_t c = 0; c < z.size(); ++c) {
      const double center = z.circles()[c];
      total -= bounded_field.integrate_strip(center - eps, center + eps);
      for (int i = 0; i < theta.m(); ++i) {
        const double mean = theta.laurent()[c].alpha[i].mean();
        if (mean != 0.0) total += mean * symmetric_tail(blend, i - theta.m(), eps);
      }
    }
    out.cutoff_integrals.push_back(total);
  }
  out.value = out.diverged ? std::nan("") : out.finite_part;
  return out;
}

BmVerdict bm_equivalent(const BmNambuForm& theta0, const BmNambuForm& theta1, double tol) {
  if (theta0.m() != theta1.m()) {
    throw Error(ErrorKind::kIncomparable, "different orders m");
  }
  if (!theta0.critical().same_circles(theta1.critical())) {
    throw Error(ErrorKind::kIncomparable, "different critical sets");
  }
  const LiouvilleVolume l0 = liouville_volume_pv(theta0, {});
  const LiouvilleVolume l1 = liouville_volume_pv(theta1, {});
  const ModularPeriods p0 = modular_periods(theta0);
  const ModularPeriods p1 = modular_periods(theta1);
  BmVerdict verdict;
  verdict.volume_gap = std::abs(l0.finite_part - l1.finite_part);
  for (size_t r = 0; r < p0.periods.size(); ++r) {
    for (size_t i = 0; i < p0.periods[r].size(); ++i) {
      verdict.period_gap =
          std::max(verdict.period_gap, std::abs(p0.periods[r][i] - p1.periods[r][i]));
    }
  }
  verdict.equivalent = verdict.volume_gap <= tol && verdict.period_gap <= tol;
  return verdict;
}

}  // namespace foldvol
