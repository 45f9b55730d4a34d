#pragma once

// Classifying invariants: regional volumes for folded forms, modular periods
// and the principal-value Liouville volume for b^m forms.

#include <vector>

#include "foldvol/bm_structures.hpp"

namespace foldvol {

inline constexpr double kDefaultEquivalenceTol = 1e-8;

struct RegionalVolumes {
  std::vector<double> volumes;  // region j = [c_j, c_{j+1}), cyclic
  double total = 0.0;           // integral over the torus
};

// Works for any integrable coefficient; folded forms are the intended input.
RegionalVolumes regional_volumes(const Field& coef, const CriticalSet& z);
RegionalVolumes regional_volumes(const FoldedVolumeForm& omega);

struct FoldedVerdict {
  bool equivalent = false;
  double max_defect = 0.0;
  std::vector<double> defects;  // V_j(omega1) - V_j(omega0)
};

// Throws kIncomparable for different critical sets or coorientations.
FoldedVerdict folded_equivalent(const FoldedVolumeForm& omega0, const FoldedVolumeForm& omega1,
                                double tol = kDefaultEquivalenceTol);

// periods[r][i - 1] is the period of the order-i singular term dt / t^i on
// circle r, carried by alpha_{m - i}.
struct ModularPeriods {
  int m = 0;
  std::vector<std::vector<double>> periods;

  double at(size_t circle, int order) const { return periods[circle][order - 1]; }
};

ModularPeriods modular_periods(const BmNambuForm& theta);

struct LiouvilleVolume {
  double value = 0.0;        // PV limit; meaningless when diverged
  bool diverged = false;
  double finite_part = 0.0;  // integral of the bounded part of the form
  std::vector<double> cutoffs;
  std::vector<double> cutoff_integrals;  // integral over {|t| >= eps} per cutoff
};

inline const std::vector<double> kDefaultCutoffs{1e-1, 5e-2, 2.5e-2, 1.25e-2, 6.25e-3};

// Symmetric cutoff in t around every circle. The Laurent terms are integrated
// in closed form in y and by Gauss-Legendre in t; odd powers cancel, even
// powers with nonzero period diverge.
LiouvilleVolume liouville_volume_pv(const BmNambuForm& theta,
                                    const std::vector<double>& cutoffs = kDefaultCutoffs);

struct BmVerdict {
  bool equivalent = false;
  double volume_gap = 0.0;
  double period_gap = 0.0;
};

// Compares the finite Liouville parts and all modular periods. Throws
// kIncomparable for different m or critical sets.
BmVerdict bm_equivalent(const BmNambuForm& theta0, const BmNambuForm& theta1,
                        double tol = kDefaultEquivalenceTol);

}  // namespace foldvol
