#pragma once

// Equivalent b^{2k+1} forms desingularize to equivalent folded forms: the
// end-to-end experiment and its randomized fixture family.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "foldvol/bm_structures.hpp"
#include "foldvol/invariants.hpp"
#include "foldvol/moser_flow.hpp"

namespace foldvol {

inline MoserConfig witness_defaults() {
  MoserConfig c;
  c.steps = 50;
  return c;
}

struct ExperimentConfig {
  std::vector<double> eps{0.05, 0.1, 0.2};
  int contact_order = 3;
  bool witness = false;
  // Witness runs: grid N, bandwidth K, steps, certificate tolerances. 50 steps
  // rather than 200: the certificate error is set by the Jacobian stencil,
  // not by the integrator, and the matrix has 30 runs.
  MoserConfig moser = witness_defaults();
  double tol = kDefaultEquivalenceTol;
  std::uint64_t seed = 1;    // first seed of the random family
  int pairs = 10;
};

struct WitnessSummary {
  bool success = false;
  double pullback_error = 0.0;
  double z_fixing_error = 0.0;
  double min_jacobian = 0.0;
  double primitive_residual = 0.0;
  double seconds = 0.0;
};

struct CompatRow {
  double eps = 0.0;
  std::vector<double> volumes0;
  std::vector<double> volumes1;
  bool folded_equivalent = false;
  double max_defect = 0.0;        // max_j |V_j(1) - V_j(0)|
  double mechanism_defect = 0.0;  // max_j |integral over R_j of (omega1 - omega0)|
  std::optional<WitnessSummary> witness;
  std::string error;              // nonempty when a stage threw
};

struct CompatReport {
  int m = 0;
  bool bm_equivalent = false;
  ModularPeriods periods0;
  ModularPeriods periods1;
  double finite_part0 = 0.0;
  double finite_part1 = 0.0;
  std::vector<double> critical;  // Z plus fold circles
  std::vector<CompatRow> rows;

  // Every row agrees with the b^m verdict and every witness passed.
  bool consistent() const;
};

// Throws kWrongParity for even m, kIncomparable for different m or circles.
CompatReport compat_experiment(const BmNambuForm& theta0, const BmNambuForm& theta1,
                               const ExperimentConfig& config = {});

// Random m = 1 pair on Z = {x = 0} (collar 0.4, fold circle x = 1/2) with
// equal periods, equal finite Liouville parts, and smooth parts differing by
// a y-mean-free (hence exact) form.
std::pair<BmNambuForm, BmNambuForm> random_equivalent_pair(std::uint64_t seed);

// Fixture shared by tests and CLI: alpha_0 = amplitude * (1 + delta cos 2 pi y),
// smooth part (sin 2 pi x - sin 4 pi x / 2) (1 + smooth_mod cos 2 pi y).
BmNambuForm single_circle_form(double amplitude, double delta, double smooth_mod);

}  // namespace foldvol
