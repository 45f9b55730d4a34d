#include "foldvol/moser_flow.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "foldvol/error.hpp"
#include "foldvol/invariants.hpp"
#include "foldvol/quadrature.hpp"

namespace foldvol {

MoserProblem make_moser_problem(const FoldedVolumeForm& omega0, const FoldedVolumeForm& omega1,
                                const MoserConfig& config) {
  if (!omega0.critical().same_circles(omega1.critical())) {
    throw Error(ErrorKind::kIncomparable, "Moser path needs a common critical set");
  }
  const FoldedVerdict verdict = folded_equivalent(omega0, omega1, config.volume_tol);
  if (!verdict.equivalent) {
    std::string list;
    for (double d : verdict.defects) list += (list.empty() ? "" : ", ") + std::to_string(d);
    throw ObstructionError(verdict.defects, "regional volumes differ by (" + list + ")");
  }
  // every form on the path has to stay folded on Z
  convex_path(omega0, omega1, 0.5);
  const Field delta = omega0.coef() - omega1.coef();
  PrimitiveOneForm beta = build_primitive(delta, omega0.critical(), config.volume_tol);
  // The Taylor window has to sit well inside the nearest profile knot and the
  // primitive's layer: the quotient at t = 0 is a one-sided slope fit and its
  // error goes like (window / scale)^6.
  const CriticalSet& z = omega0.critical();
  const double clearance =
      std::min({knot_clearance(delta, z), knot_clearance(omega0.coef(), z),
                knot_clearance(omega1.coef(), z), beta.layer_width()});
  const double delta_window =
      std::min({config.delta, 0.5 * z.collar_width(), clearance / 40.0});
  return MoserProblem{omega0, omega1, std::move(beta), delta_window};
}

MoserField::MoserField(const MoserProblem& problem) : problem_(problem) {}

Eigen::Vector2d MoserField::operator()(double x, double y, double s) const {
  const CriticalSet& z = problem_.omega0.critical();
  const Field& w0 = problem_.omega0.coef();
  const Field& w1 = problem_.omega1.coef();
  const PrimitiveOneForm& beta = problem_.beta;
  std::array<double, 4> q{};
  auto sample = [&](double xx, double yy, std::span<double> out) {
    const Eigen::Vector2d b = beta(xx, yy);
    out[0] = b.x();
    out[1] = b.y();
    out[2] = w0(xx, yy);
    out[3] = w1(xx, yy);
  };
  double t = 0.0;
  const size_t i = z.nearest(x, &t);
  if (std::abs(t) >= problem_.delta) {
    sample(x, y, q);
  } else {
    // Every entry vanishes on Z, so the quotients by t share the node set.
    const double c = z.circles()[i];
    taylor_quotients([&](double tau, std::span<double> out) { sample(c + tau, y, out); }, t,
                     problem_.delta, q);
  }
  const double ws = (1.0 - s) * q[2] + s * q[3];
  return {q[1] / ws, -q[0] / ws};
}

PointwiseVectorField moser_field(const MoserProblem& problem, double s) {
  auto field = std::make_shared<MoserField>(problem);
  return [field, s](double x, double y) { return (*field)(x, y, s); };
}

namespace {

// RK4 over a batch of points in place.
template <typename F>
void rk4_step(const F& v, std::vector<Eigen::Vector2d>& pts, double s, double h,
              double* max_move) {
  for (Eigen::Vector2d& p : pts) {
    const Eigen::Vector2d k1 = v(p, s);
    const Eigen::Vector2d k2 = v(p + 0.5 * h * k1, s + 0.5 * h);
    const Eigen::Vector2d k3 = v(p + 0.5 * h * k2, s + 0.5 * h);
    const Eigen::Vector2d k4 = v(p + h * k3, s + h);
    const Eigen::Vector2d step = h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!step.allFinite()) throw Error(ErrorKind::kIntegration, "nonfinite flow step");
    const double move = step.norm();
    if (move > 0.25) {
      throw Error(ErrorKind::kIntegration,
                  "step rejected: a point moved by " + std::to_string(move));
    }
    *max_move = std::max(*max_move, move);
    p += step;
  }
}

DiscreteMap grid_map(const std::vector<Eigen::Vector2d>& pts, int n) {
  Eigen::ArrayXXd dx(n, n), dy(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d& p = pts[static_cast<size_t>(i) * n + j];
      dx(i, j) = p.x() - double(i) / n;
      dy(i, j) = p.y() - double(j) / n;
    }
  }
  return DiscreteMap(std::move(dx), std::move(dy));
}

std::vector<Eigen::Vector2d> grid_seeds(int n) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) pts.emplace_back(double(i) / n, double(j) / n);
  }
  return pts;
}

}  // namespace

FlowResult integrate_flow(const MoserProblem& problem, int steps, int n) {
  if (steps < 1 || n < 8) throw Error(ErrorKind::kMalformedInput, "need steps >= 1, grid >= 8");
  const MoserField field(problem);
  auto v = [&](const Eigen::Vector2d& p, double s) {
    return field(wrap01(p.x()), wrap01(p.y()), s);
  };
  const CriticalSet& z = problem.omega0.critical();
  FlowResult out;
  const int per_circle = 4 * std::max(problem.omega0.coef().bandwidth(), 16);
  for (double c : z.circles()) {
    for (int j = 0; j < per_circle; ++j) out.circle_seeds.emplace_back(c, double(j) / per_circle);
  }
  std::vector<Eigen::Vector2d> pts = grid_seeds(n);
  std::vector<Eigen::Vector2d> circ = out.circle_seeds;
  const size_t per = static_cast<size_t>(per_circle);
  const double h = 1.0 / steps;
  double max_move = 0.0;
  for (int k = 0; k < steps; ++k) {
    const double s = k * h;
    rk4_step(v, pts, s, h, &max_move);
    rk4_step(v, circ, s, h, &max_move);
    if (((k + 1) * 10) % steps == 0) {
      for (size_t q = 0; q < circ.size(); ++q) {
        const double c = z.circles()[q / per];
        out.trajectory_z_error =
            std::max(out.trajectory_z_error, std::abs(wrapped_offset(circ[q].x(), c)));
      }
    }
  }
  out.circle_images = std::move(circ);
  out.map = grid_map(pts, n);
  return out;
}

MoserResult run_moser(const FoldedVolumeForm& omega0, const FoldedVolumeForm& omega1,
                      const MoserConfig& config) {
  const MoserProblem problem = make_moser_problem(omega0, omega1, config);
  const FlowResult flow = integrate_flow(problem, config.steps, config.grid);

  MoserResult result{flow.map, {}, problem.beta.report()};
  FlowCertificate& cert = result.certificate;
  cert.steps = config.steps;
  cert.grid = config.grid;
  cert.trajectory_z_error = flow.trajectory_z_error;
  cert.max_displacement = flow.map.max_displacement();
  for (size_t q = 0; q < flow.circle_seeds.size(); ++q) {
    const Eigen::Vector2d d = flow.circle_images[q] - flow.circle_seeds[q];
    cert.z_fixing_error = std::max(cert.z_fixing_error, d.norm());
  }
  cert.min_jacobian = flow.map.jacobian_determinant().minCoeff();
  cert.orientation_ok = cert.min_jacobian > 0.0;
  if (cert.orientation_ok) {
    const Eigen::ArrayXXd pulled = pullback_samples(omega1.form(), flow.map);
    const Eigen::ArrayXXd target =
        sample_grid([&](double x, double y) { return omega0(x, y); }, config.grid);
    cert.pullback_error = (pulled - target).abs().maxCoeff() / target.abs().maxCoeff();
  } else {
    cert.pullback_error = std::numeric_limits<double>::infinity();
  }
  cert.pullback_ok = cert.pullback_error <= config.pullback_tol;
  cert.z_ok = std::max(cert.z_fixing_error, cert.trajectory_z_error) <= config.z_tol;
  return result;
}

DiscreteMap flow_map(const PointwiseVectorField& v, int n, int steps, double time) {
  std::vector<Eigen::Vector2d> pts = grid_seeds(n);
  auto f = [&](const Eigen::Vector2d& p, double) { return v(wrap01(p.x()), wrap01(p.y())); };
  const double h = time / steps;
  double max_move = 0.0;
  for (int k = 0; k < steps; ++k) rk4_step(f, pts, k * h, h, &max_move);
  return grid_map(pts, n);
}

// ---------------------------------------------------------------- isotopies

Eigen::Vector2d ZDiffeo::generator(double x, double y) const {
  if (amplitude == 0.0) return Eigen::Vector2d::Zero();
  double t = 1.0;
  for (double c : z.circles()) {
    const double s = std::sin(std::numbers::pi * (x - c));
    t *= s * s;
  }
  return amplitude * Eigen::Vector2d(t * g(x, y), h(x, y));
}

PointwiseVectorField ZDiffeo::field() const {
  auto self = std::make_shared<ZDiffeo>(*this);
  return [self](double x, double y) { return self->generator(x, y); };
}

DiscreteMap ZDiffeo::inverse(int steps) const {
  const PointwiseVectorField v = field();
  return flow_map([v](double x, double y) { return Eigen::Vector2d(-v(x, y)); },
                  map.resolution(), steps);
}

namespace {

SpectralField2D random_field(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  constexpr int kBand = 2;
  Eigen::ArrayXXcd c = Eigen::ArrayXXcd::Zero(2 * kBand + 1, 2 * kBand + 1);
  double norm = 0.0;
  for (int kx = 0; kx <= kBand; ++kx) {
    for (int ky = -kBand; ky <= kBand; ++ky) {
      if (kx == 0 && ky < 0) continue;
      Complex v(u(rng), kx == 0 && ky == 0 ? 0.0 : u(rng));
      c(kBand + kx, kBand + ky) = v;
      c(kBand - kx, kBand - ky) = std::conj(v);
      norm += (kx == 0 && ky == 0 ? 1.0 : 2.0) * std::abs(v);
    }
  }
  c /= norm;  // sup norm <= sum of |coefficients| = 1
  return SpectralField2D(c);
}

}  // namespace

ZDiffeo random_z_diffeo(const CriticalSet& z, std::uint64_t seed, double amplitude, int n,
                        int steps) {
  std::mt19937_64 rng(seed);
  ZDiffeo out{z, amplitude, random_field(rng), random_field(rng), DiscreteMap(n)};
  if (amplitude == 0.0) return out;
  out.map = flow_map(out.field(), n, steps);
  const double det = out.map.jacobian_determinant().minCoeff();
  if (!(det > 0.0)) {
    throw Error(ErrorKind::kReduceAmplitude,
                "flow is not orientation preserving (min det " + std::to_string(det) + ")");
  }
  return out;
}

OneForm homotopy_primitive(const Field& omega, const ZDiffeo& isotopy, int intervals, int n,
                           int steps_per_interval) {
  if (intervals < 2 || intervals % 2 != 0) {
    throw Error(ErrorKind::kMalformedInput, "Simpson needs an even number of intervals");
  }
  const int bandwidth = std::min(kDefaultBandwidth, (n - 1) / 2);
  Eigen::ArrayXXd qa = Eigen::ArrayXXd::Zero(n, n), qb = Eigen::ArrayXXd::Zero(n, n);
  std::vector<Eigen::Vector2d> pts = grid_seeds(n);
  auto v = [&](const Eigen::Vector2d& p, double) {
    return isotopy.generator(wrap01(p.x()), wrap01(p.y()));
  };
  const double dt = 1.0 / intervals;
  double max_move = 0.0;
  for (int q = 0; q <= intervals; ++q) {
    if (q > 0) {
      const double h = dt / steps_per_interval;
      for (int k = 0; k < steps_per_interval; ++k) rk4_step(v, pts, 0.0, h, &max_move);
    }
    const double weight = dt / 3.0 * (q == 0 || q == intervals ? 1.0 : (q % 2 ? 4.0 : 2.0));
    const DiscreteMap phi = grid_map(pts, n);
    const auto jac = phi.jacobian();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Eigen::Vector2d& p = pts[static_cast<size_t>(i) * n + j];
        const double x = wrap01(p.x()), y = wrap01(p.y());
        const Eigen::Vector2d vv = isotopy.generator(x, y);
        const double w = omega(x, y);
        const double alpha_a = -w * vv.y(), alpha_b = w * vv.x();
        qa(i, j) += weight * (jac[0](i, j) * alpha_a + jac[2](i, j) * alpha_b);
        qb(i, j) += weight * (jac[1](i, j) * alpha_a + jac[3](i, j) * alpha_b);
      }
    }
  }
  return OneForm{SpectralField2D::from_samples(qa, bandwidth),
                 SpectralField2D::from_samples(qb, bandwidth)};
}

double homotopy_residual(const Field& omega, const ZDiffeo& isotopy, const OneForm& q, int n) {
  const DiscreteMap phi = flow_map(isotopy.field(), n, 64);
  const Eigen::ArrayXXd pulled = pullback_samples(TwoForm{omega}, phi);
  const Eigen::ArrayXXd base = sample_grid([&](double x, double y) { return omega(x, y); }, n);
  const Eigen::ArrayXXd dq_grid = d1(q).coef.spectral_part().sample(n);
  return (dq_grid - (pulled - base)).abs().maxCoeff();
}

}  // namespace foldvol
