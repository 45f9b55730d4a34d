#pragma once

// Moser's path method for folded volume forms with a common critical set, and
// the isotopy side of the converse statement (Z-preserving flows and the de
// Rham homotopy operator).

#include <cstdint>
#include <optional>
#include <vector>

#include "foldvol/bm_structures.hpp"
#include "foldvol/exterior.hpp"
#include "foldvol/relative_primitive.hpp"

namespace foldvol {

struct MoserConfig {
  int steps = 200;
  int grid = 256;
  int bandwidth = kDefaultBandwidth;
  double pullback_tol = 1e-4;   // relative to sup |Omega0|
  double z_tol = 1e-8;
  double volume_tol = 1e-8;     // regional volumes must agree this well
  double delta = 1e-2;          // Taylor-division half-window near circles
};

struct FlowCertificate {
  double pullback_error = 0.0;      // sup |phi^* Omega1 - Omega0| / sup |Omega0|
  double z_fixing_error = 0.0;      // max |phi(p) - p| over circle samples
  double trajectory_z_error = 0.0;  // max drift off Z at s = k/10
  double min_jacobian = 0.0;
  double max_displacement = 0.0;
  int steps = 0;
  int grid = 0;
  bool pullback_ok = false;
  bool z_ok = false;
  bool orientation_ok = false;

  bool success() const { return pullback_ok && z_ok && orientation_ok; }
};

struct MoserProblem {
  FoldedVolumeForm omega0;
  FoldedVolumeForm omega1;
  PrimitiveOneForm beta;  // d beta = Omega0 - Omega1
  double delta = 1e-2;
};

// Checks the hypotheses (common circles and coorientations, equal regional
// volumes, certified convex path) and builds the primitive. Throws
// ObstructionError with V(Omega1) - V(Omega0) when volumes differ.
MoserProblem make_moser_problem(const FoldedVolumeForm& omega0, const FoldedVolumeForm& omega1,
                                const MoserConfig& config = {});

// v_s with i_{v_s} Omega_s = beta, Omega_s = (1 - s) Omega0 + s Omega1.
class MoserField {
 public:
  explicit MoserField(const MoserProblem& problem);
  Eigen::Vector2d operator()(double x, double y, double s) const;

 private:
  MoserProblem problem_;
};

PointwiseVectorField moser_field(const MoserProblem& problem, double s);

struct FlowResult {
  DiscreteMap map;
  std::vector<Eigen::Vector2d> circle_seeds;
  std::vector<Eigen::Vector2d> circle_images;
  double trajectory_z_error = 0.0;
};

// Classical RK4 from s = 0 to 1 for every grid seed plus 4K seeds per circle.
// Throws kIntegration on nonfinite values or a step moving a point by > 0.25.
FlowResult integrate_flow(const MoserProblem& problem, int steps, int n);

struct MoserResult {
  DiscreteMap map;
  FlowCertificate certificate;
  PrimitiveReport primitive;
};

MoserResult run_moser(const FoldedVolumeForm& omega0, const FoldedVolumeForm& omega1,
                      const MoserConfig& config = {});

// Time-one flow of an autonomous field, RK4 on the n x n grid.
DiscreteMap flow_map(const PointwiseVectorField& v, int n, int steps, double time = 1.0);

// Flow of v = amplitude * (T(x) g(x, y), h(x, y)) with T = prod_c sin^2(pi (x - c))
// and g, h random fields of bandwidth 2 normalized to sup <= 1.
struct ZDiffeo {
  CriticalSet z;
  double amplitude = 0.0;
  SpectralField2D g;
  SpectralField2D h;
  DiscreteMap map;

  Eigen::Vector2d generator(double x, double y) const;
  PointwiseVectorField field() const;
  DiscreteMap inverse(int steps = 64) const;
};

// Throws kReduceAmplitude when the Jacobian determinant is not positive.
ZDiffeo random_z_diffeo(const CriticalSet& z, std::uint64_t seed, double amplitude, int n = 256,
                        int steps = 64);

// Q Omega = integral_0^1 phi_t^*(i_v Omega) dt by composite Simpson over
// `intervals` (even) panels, sampled on an n x n grid and projected to
// bandwidth (n - 1) / 2 capped at K.
OneForm homotopy_primitive(const Field& omega, const ZDiffeo& isotopy, int intervals = 16,
                           int n = 128, int steps_per_interval = 4);

// sup |d(Q Omega) - (phi^* Omega - Omega)| on the n x n grid.
double homotopy_residual(const Field& omega, const ZDiffeo& isotopy, const OneForm& q, int n);

}  // namespace foldvol
