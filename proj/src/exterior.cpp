#include "foldvol/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "foldvol/error.hpp"
#include "foldvol/quadrature.hpp"

namespace foldvol {

OneForm d0(const SpectralField2D& f) {
  return OneForm{differentiate(f, Axis::kX), differentiate(f, Axis::kY)};
}

TwoForm d1(const OneForm& w) {
  return TwoForm{differentiate(w.b, Axis::kX) - differentiate(w.a, Axis::kY)};
}

OneForm contract(const TwoForm& omega, const VectorField& v) {
  if (!omega.coef.band_limited()) {
    throw Error(ErrorKind::kMalformedField, "contract needs a band-limited two-form");
  }
  const SpectralField2D& w = omega.coef.spectral_part();
  return OneForm{-multiply(w, v.vy), multiply(w, v.vx)};
}

Eigen::Vector2d contract_at(const TwoForm& omega, const Eigen::Vector2d& v, double x, double y) {
  const double w = omega(x, y);
  return {-w * v.y(), w * v.x()};
}

void divide_by_defining(const CriticalSet& z, double delta, double x, double y,
                        const std::function<void(double, double, std::span<double>)>& sample,
                        std::span<double> quotients) {
  double t = 0.0;
  const size_t i = z.nearest(x, &t);
  if (std::abs(t) >= delta) {
    sample(x, y, quotients);
    for (double& q : quotients) q /= t;
    return;
  }
  const double c = z.circles()[i];
  taylor_quotients([&](double tau, std::span<double> out) { sample(c + tau, y, out); }, t, delta,
                   quotients);
}

ContractionField::ContractionField(Field omega, CriticalSet z, PointwiseOneForm beta,
                                   double delta)
    : omega_(std::move(omega)), z_(std::move(z)), beta_(std::move(beta)), delta_(delta) {}

Eigen::Vector2d ContractionField::operator()(double x, double y) const {
  std::array<double, 3> q{};
  divide_by_defining(
      z_, delta_, x, y,
      [&](double xx, double yy, std::span<double> out) {
        const Eigen::Vector2d b = beta_(xx, yy);
        out[0] = b.x();
        out[1] = b.y();
        out[2] = omega_(xx, yy);
      },
      q);
  // i_v Omega = beta  <=>  v = (b, -a) / Omega
  return {q[1] / q[2], -q[0] / q[2]};
}

double vanishing_order(const PointwiseOneForm& beta, double c, double t_min, double t_max,
                       int samples, int y_samples) {
  std::vector<double> ts(samples), mags(samples);
  double order = std::numeric_limits<double>::infinity();
  for (double side : {1.0, -1.0}) {
    bool any = false;
    for (int k = 0; k < samples; ++k) {
      const double t = t_min * std::pow(t_max / t_min, double(k) / (samples - 1));
      double m = 0.0;
      for (int j = 0; j < y_samples; ++j) {
        m = std::max(m, beta(c + side * t, (j + 0.5) / y_samples).norm());
      }
      ts[k] = t;
      mags[k] = m;
      any = any || m > 0.0;
    }
    if (any) order = std::min(order, fit_loglog_slope(ts, mags));
  }
  return order;
}

ContractionField solve_contraction(const TwoForm& omega, const CriticalSet& z,
                                   const PointwiseOneForm& beta, double delta) {
  delta = std::min(delta, 0.5 * z.collar_width());
  for (size_t i = 0; i < z.size(); ++i) {
    const double c = z.circles()[i];
    const double order = vanishing_order(beta, c, 1e-4, std::min(1e-2, z.collar_width()));
    if (order < 1.75) {
      throw Error(ErrorKind::kIllPosedContraction,
                  "one-form vanishes to order " + std::to_string(order) + " at circle x = " +
                      std::to_string(c) + " (need 2)");
    }
    // mu = Omega / t must keep one sign across the collar.
    const int nt = 33, ny = 32;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int a = 0; a < nt; ++a) {
      const double t = z.collar_width() * (2.0 * a / (nt - 1) - 1.0);
      for (int j = 0; j < ny; ++j) {
        const double y = (j + 0.5) / ny;
        double mu = 0.0;
        if (std::abs(t) >= delta) {
          mu = omega(c + t, y) / t;
        } else {
          mu = taylor_quotient([&](double tau) { return omega(c + tau, y); }, t, delta);
        }
        lo = std::min(lo, mu);
        hi = std::max(hi, mu);
      }
    }
    if (!(lo > 0.0 || hi < 0.0)) {
      throw Error(ErrorKind::kNotFolded,
                  "Omega / t vanishes in the collar of x = " + std::to_string(c));
    }
  }
  return ContractionField(omega.coef, z, beta, delta);
}

// ---------------------------------------------------------------- DiscreteMap

DiscreteMap::DiscreteMap(int n)
    : n_(n), dx_(Eigen::ArrayXXd::Zero(n, n)), dy_(Eigen::ArrayXXd::Zero(n, n)) {}

DiscreteMap::DiscreteMap(Eigen::ArrayXXd dx, Eigen::ArrayXXd dy)
    : n_(static_cast<int>(dx.rows())), dx_(std::move(dx)), dy_(std::move(dy)) {
  if (dx_.rows() != dx_.cols() || dy_.rows() != dx_.rows() || dy_.cols() != dx_.cols()) {
    throw Error(ErrorKind::kMalformedInput, "displacement grids must be N x N");
  }
  if (!dx_.allFinite() || !dy_.allFinite()) {
    throw Error(ErrorKind::kMalformedInput, "displacement contains nonfinite values");
  }
}

DiscreteMap DiscreteMap::translation(int n, double tx, double ty) {
  return DiscreteMap(Eigen::ArrayXXd::Constant(n, n, tx), Eigen::ArrayXXd::Constant(n, n, ty));
}

namespace {

inline int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

inline void catmull_rom(double f, double w[4]) {
  const double f2 = f * f, f3 = f2 * f;
  w[0] = 0.5 * (-f3 + 2.0 * f2 - f);
  w[1] = 0.5 * (3.0 * f3 - 5.0 * f2 + 2.0);
  w[2] = 0.5 * (-3.0 * f3 + 4.0 * f2 + f);
  w[3] = 0.5 * (f3 - f2);
}

Eigen::ArrayXXd centered_difference(const Eigen::ArrayXXd& f, int axis) {
  const int n = static_cast<int>(f.rows());
  const double scale = n / 60.0;
  Eigen::ArrayXXd d(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      auto at = [&](int o) {
        return axis == 0 ? f(wrap(i + o, n), j) : f(i, wrap(j + o, n));
      };
      d(i, j) = scale * (45.0 * (at(1) - at(-1)) - 9.0 * (at(2) - at(-2)) + (at(3) - at(-3)));
    }
  }
  return d;
}

}  // namespace

Eigen::Vector2d DiscreteMap::operator()(const Eigen::Vector2d& p) const {
  const double ux = wrap01(p.x()) * n_;
  const double uy = wrap01(p.y()) * n_;
  const int ix = static_cast<int>(std::floor(ux));
  const int iy = static_cast<int>(std::floor(uy));
  double wx[4], wy[4];
  catmull_rom(ux - ix, wx);
  catmull_rom(uy - iy, wy);
  double sx = 0.0, sy = 0.0;
  for (int a = 0; a < 4; ++a) {
    const int ia = wrap(ix - 1 + a, n_);
    for (int b = 0; b < 4; ++b) {
      const int jb = wrap(iy - 1 + b, n_);
      const double w = wx[a] * wy[b];
      sx += w * dx_(ia, jb);
      sy += w * dy_(ia, jb);
    }
  }
  return p + Eigen::Vector2d(sx, sy);
}

std::array<Eigen::ArrayXXd, 4> DiscreteMap::jacobian() const {
  std::array<Eigen::ArrayXXd, 4> j{centered_difference(dx_, 0), centered_difference(dx_, 1),
                                   centered_difference(dy_, 0), centered_difference(dy_, 1)};
  j[0] += 1.0;
  j[3] += 1.0;
  return j;
}

Eigen::ArrayXXd DiscreteMap::jacobian_determinant() const {
  const auto j = jacobian();
  return j[0] * j[3] - j[1] * j[2];
}

DiscreteMap DiscreteMap::compose(const DiscreteMap& inner) const {
  const int n = inner.resolution();
  Eigen::ArrayXXd dx(n, n), dy(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d p = inner.grid_point(i, j);
      const Eigen::Vector2d q = (*this)(inner.image(i, j));
      dx(i, j) = q.x() - p.x();
      dy(i, j) = q.y() - p.y();
    }
  }
  return DiscreteMap(std::move(dx), std::move(dy));
}

double DiscreteMap::max_displacement() const {
  return (dx_.square() + dy_.square()).sqrt().maxCoeff();
}

Eigen::ArrayXXd pullback_samples(const TwoForm& omega, const DiscreteMap& phi) {
  const Eigen::ArrayXXd det = phi.jacobian_determinant();
  const double min_det = det.minCoeff();
  if (!(min_det > 0.0)) {
    throw Error(ErrorKind::kOrientation,
                "nonpositive Jacobian determinant " + std::to_string(min_det));
  }
  const int n = phi.resolution();
  Eigen::ArrayXXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d q = phi.image(i, j);
      out(i, j) = omega(wrap01(q.x()), wrap01(q.y())) * det(i, j);
    }
  }
  return out;
}

TwoForm pullback(const TwoForm& omega, const DiscreteMap& phi, int bandwidth) {
  return TwoForm{SpectralField2D::from_samples(pullback_samples(omega, phi), bandwidth)};
}

Eigen::ArrayXXd sample_grid(const std::function<double(double, double)>& f, int n) {
  Eigen::ArrayXXd out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out(i, j) = f(double(i) / n, double(j) / n);
  }
  return out;
}

}  // namespace foldvol
