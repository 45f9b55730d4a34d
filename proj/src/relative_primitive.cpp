#include "foldvol/relative_primitive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "foldvol/error.hpp"
#include "foldvol/quadrature.hpp"

namespace foldvol {

// Smoothness of the cutoffs and the layer window. The Moser map inherits it,
// and the sixth-order Jacobian stencil only converges at full order across a
// window end if the map is smooth enough there; C^5 measured best (C^3 stalls
// near 7x per doubling of N, C^7 has larger derivatives and converges slower).
constexpr int kStepOrder = 5;

std::vector<double> obstruction(const Field& delta, const CriticalSet& z) {
  std::vector<double> defects;
  for (size_t j = 0; j < z.regions(); ++j) {
    const auto [lo, hi] = z.region_bounds(j);
    defects.push_back(delta.integrate_strip(lo, hi));
  }
  return defects;
}

double CutoffProfile::value(double x) const { return smoothstep(kStepOrder, (x - lo) / (hi - lo)); }

double CutoffProfile::derivative(double x) const {
  return smoothstep_derivative(kStepOrder, (x - lo) / (hi - lo)) / (hi - lo);
}

namespace {

constexpr Complex kI{0.0, 1.0};

Complex unit(double phase) { return std::polar(1.0, kTwoPi * phase); }

// A(x) = integral_lo^x g(s) exp(2 pi i k s) ds on [lo, hi], tabulated with
// A, A' and A'' at the nodes and read back by quintic Hermite interpolation.
class AntiderivativeTable {
 public:
  AntiderivativeTable(const Profile1D& g, int k, double lo, double hi) {
    std::vector<double> breaks{lo, hi};
    for (double knot : g.knots()) {
      for (int shift = -1; shift <= 1; ++shift) {
        const double x = knot + shift;
        if (x > lo && x < hi) breaks.push_back(x);
      }
    }
    std::sort(breaks.begin(), breaks.end());
    const double h_max = (hi - lo) / 2048.0;
    x_.push_back(lo);
    for (size_t b = 0; b + 1 < breaks.size(); ++b) {
      const double span = breaks[b + 1] - breaks[b];
      if (span <= 1e-15) continue;
      const int cells = std::max(1, static_cast<int>(std::ceil(span / h_max)));
      for (int c = 1; c <= cells; ++c) {
        x_.push_back(c == cells ? breaks[b + 1] : breaks[b] + span * c / cells);
      }
    }
    const double w = kTwoPi * k;
    auto integrand = [&](double s) { return g.value(s) * unit(k * s); };
    const GaussRule& rule = gauss_legendre(8);
    v_.resize(x_.size());
    d1_.resize(x_.size());
    d2_.resize(x_.size());
    Complex acc{};
    for (size_t i = 0; i < x_.size(); ++i) {
      if (i > 0) {
        const double a = x_[i - 1], b = x_[i];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        Complex cell{};
        for (size_t q = 0; q < rule.nodes.size(); ++q) {
          cell += rule.weights[q] * integrand(mid + half * rule.nodes[q]);
        }
        acc += half * cell;
      }
      // One-sided values at knots would differ only where g is merely
      // continuous; the interior limit is used for both neighbours.
      const double s = x_[i];
      v_[i] = acc;
      d1_[i] = g.value(s) * unit(k * s);
      d2_[i] = (g.derivative(s) + kI * w * g.value(s)) * unit(k * s);
    }
  }

  Complex operator()(double x) const {
    if (x <= x_.front()) return v_.front();
    if (x >= x_.back()) return v_.back();
    const size_t i = static_cast<size_t>(std::upper_bound(x_.begin(), x_.end(), x) - x_.begin());
    const size_t i0 = i - 1;
    const double h = x_[i] - x_[i0];
    const double s = (x - x_[i0]) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double g0 = 10 * s3 - 15 * s4 + 6 * s5;
    const double g1 = -4 * s3 + 7 * s4 - 3 * s5;
    const double g2 = 0.5 * (s3 - 2 * s4 + s5);
    return v_[i0] * h0 + h * d1_[i0] * h1 + h * h * d2_[i0] * h2 + v_[i] * g0 +
           h * d1_[i] * g1 + h * h * d2_[i] * g2;
  }

  Complex total() const { return v_.back(); }

 private:
  std::vector<double> x_;
  std::vector<Complex> v_, d1_, d2_;
};

struct YMode {
  int k;
  Complex c;
};

// Real 1D series c0 + sum_k 2 Re(c_k exp(2 pi i k y)) over k > 0.
struct SparseSeries {
  double c0 = 0.0;
  std::vector<YMode> modes;

  double operator()(double y) const {
    double v = c0;
    for (const YMode& m : modes) v += 2.0 * (m.c * unit(m.k * y)).real();
    return v;
  }
  // Same with exp(2 pi i k y) supplied by the caller.
  template <class Pow>
  double at(const Pow& pow) const {
    double v = c0;
    for (const YMode& m : modes) v += 2.0 * (m.c * pow(m.k)).real();
    return v;
  }
};

struct TermModes {
  double mean = 0.0;
  std::vector<Mode> half;                 // factor modes
  std::vector<size_t> table_of_mode;      // index into tables
  size_t mean_table = 0;
  std::vector<AntiderivativeTable> tables;
};

// 1 on the circles, 0 beyond distance L: 1 - smoothstep(|t| / L) with t the
// offset to the nearest circle.
class WindowProfile final : public Profile1D {
 public:
  WindowProfile(CriticalSet z, double width) : z_(std::move(z)), width_(width) {}

  double value(double x) const override {
    double t = 0.0;
    z_.nearest(x, &t);
    return 1.0 - smoothstep(kStepOrder, std::abs(t) / width_);
  }
  double derivative(double x) const override {
    double t = 0.0;
    z_.nearest(x, &t);
    const double sign = t < 0.0 ? -1.0 : 1.0;
    return -sign * smoothstep_derivative(kStepOrder, std::abs(t) / width_) / width_;
  }
  std::vector<double> knots() const override {
    std::vector<double> out;
    for (double c : z_.circles()) {
      for (double d : {-width_, width_}) out.push_back(wrap01(c + d));
    }
    return out;
  }

 private:
  CriticalSet z_;
  double width_;
};

class ProductProfile final : public Profile1D {
 public:
  ProductProfile(std::shared_ptr<const Profile1D> a, std::shared_ptr<const Profile1D> b)
      : a_(std::move(a)), b_(std::move(b)) {}

  double value(double x) const override { return a_->value(x) * b_->value(x); }
  double derivative(double x) const override {
    return a_->derivative(x) * b_->value(x) + a_->value(x) * b_->derivative(x);
  }
  std::vector<double> knots() const override {
    std::vector<double> out = a_->knots();
    const std::vector<double> more = b_->knots();
    out.insert(out.end(), more.begin(), more.end());
    return out;
  }
  bool singular() const override { return a_->singular() || b_->singular(); }

 private:
  std::shared_ptr<const Profile1D> a_, b_;
};

// Keeps the ky == 0 column (mean in y) or everything else.
SpectralField2D y_split(const SpectralField2D& f, bool mean) {
  const int k = f.bandwidth();
  Eigen::ArrayXXcd c = f.coeffs();
  for (int ky = -k; ky <= k; ++ky) {
    if ((ky == 0) != mean) c.col(k + ky).setZero();
  }
  return SpectralField2D(std::move(c));
}

// y-antiderivative of the y-mean-free part.
SpectralField2D y_antiderivative(const SpectralField2D& f) {
  const int k = f.bandwidth();
  Eigen::ArrayXXcd c = f.coeffs();
  for (int ky = -k; ky <= k; ++ky) {
    if (ky == 0) {
      c.col(k).setZero();
    } else {
      c.col(k + ky) /= kI * (kTwoPi * ky);
    }
  }
  return SpectralField2D(std::move(c));
}

}  // namespace

double knot_clearance(const Field& f, const CriticalSet& z) {
  double out = std::numeric_limits<double>::infinity();
  for (double knot : f.knots()) {
    double t = 0.0;
    z.nearest(knot, &t);
    if (std::abs(t) > 1e-9) out = std::min(out, std::abs(t));
  }
  return out;
}

namespace {

// Layer width near the circles: a quarter of the smallest gap, shrunk to 1.5
// times the nearest profile knot. Inside the knot the x-flux sees a smooth
// Delta; the extra half keeps the window's own C^3 end off the knot.
double layer_width(const Field& delta, const CriticalSet& z) {
  return std::min(0.25 * z.min_gap(), 1.5 * knot_clearance(delta, z));
}

// b = integral_lo^x F - chi h(y), a = -chi' H(y) on one interval, with
// h(y) = integral_lo^hi F(s, y) ds and H' = h.
struct Piece {
  double lo = 0.0, hi = 0.0;
  CutoffProfile chi;
  double f00 = 0.0;
  std::vector<Mode> spectral;
  std::vector<TermModes> terms;
  SparseSeries h, big_h;
  int max_kx = 0, max_ky = 0;
  std::vector<Complex> at_lo;  // exp(2 pi i kx lo) for kx = 0..max_kx

  Eigen::Vector2d eval(double x, double y) const {
    if (x <= lo || x >= hi) return Eigen::Vector2d::Zero();
    // Shared power tables: two sincos per call instead of one per mode.
    thread_local std::vector<Complex> px, py, tv;
    px.resize(max_kx + 1);
    py.resize(2 * max_ky + 1);
    const Complex ex = cis_cached(kTwoPi * x), ey = cis_cached(kTwoPi * y);
    px[0] = 1.0;
    for (int k = 1; k <= max_kx; ++k) px[k] = px[k - 1] * ex;
    py[max_ky] = 1.0;
    for (int k = 1; k <= max_ky; ++k) {
      py[max_ky + k] = py[max_ky + k - 1] * ey;
      py[max_ky - k] = std::conj(py[max_ky + k]);
    }
    auto ypow = [&](int k) { return py[max_ky + k]; };

    double big_b = f00 * (x - lo);
    for (const Mode& m : spectral) {
      const Complex e = m.kx == 0 ? Complex(x - lo, 0.0)
                                  : (px[m.kx] - at_lo[m.kx]) / (kI * (kTwoPi * m.kx));
      big_b += 2.0 * (m.c * e * ypow(m.ky)).real();
    }
    for (const TermModes& t : terms) {
      tv.resize(t.tables.size());
      for (size_t i = 0; i < t.tables.size(); ++i) tv[i] = t.tables[i](x);
      if (t.mean != 0.0) big_b += t.mean * tv[t.mean_table].real();
      for (size_t q = 0; q < t.half.size(); ++q) {
        const Mode& m = t.half[q];
        big_b += 2.0 * (m.c * tv[t.table_of_mode[q]] * ypow(m.ky)).real();
      }
    }
    return {-chi.derivative(x) * big_h.at(ypow), big_b - chi.value(x) * h.at(ypow)};
  }
};

Piece build_piece(const Field& f, double lo, double hi, double tol) {
  Piece piece;
  piece.lo = lo;
  piece.hi = hi;
  piece.chi = CutoffProfile{lo, hi};
  const SpectralField2D& smooth = f.spectral_part();
  piece.f00 = smooth.mean();
  piece.spectral = smooth.half_modes();
  for (const Mode& m : smooth.half_modes()) piece.max_kx = std::max(piece.max_kx, m.kx);
  for (int k = 0; k <= piece.max_kx; ++k) piece.at_lo.push_back(unit(k * lo));

  int ky_max = 0;
  for (const Mode& m : smooth.half_modes()) ky_max = std::max(ky_max, std::abs(m.ky));
  for (const FieldTerm& term : f.terms()) {
    for (const Mode& m : term.factor.half_modes()) ky_max = std::max(ky_max, std::abs(m.ky));
  }
  std::vector<Complex> h(2 * ky_max + 1);
  auto add = [&](int ky, Complex c) {
    h[ky_max + ky] += c;
    h[ky_max - ky] += std::conj(c);
  };
  h[ky_max] += piece.f00 * (hi - lo);
  for (const Mode& m : smooth.half_modes()) add(m.ky, m.c * exp_integral(m.kx, lo, hi));

  for (const FieldTerm& term : f.terms()) {
    TermModes tm;
    tm.mean = term.factor.mean();
    std::vector<int> kxs;
    auto table_for = [&](int kx) {
      auto it = std::find(kxs.begin(), kxs.end(), kx);
      if (it != kxs.end()) return static_cast<size_t>(it - kxs.begin());
      kxs.push_back(kx);
      tm.tables.emplace_back(*term.profile, kx, lo, hi);
      return tm.tables.size() - 1;
    };
    if (tm.mean != 0.0) {
      tm.mean_table = table_for(0);
      h[ky_max] += tm.mean * tm.tables[tm.mean_table].total().real();
    }
    for (const Mode& m : term.factor.half_modes()) {
      const size_t t = table_for(m.kx);
      tm.half.push_back(m);
      tm.table_of_mode.push_back(t);
      add(m.ky, m.c * tm.tables[t].total());
    }
    piece.terms.push_back(std::move(tm));
  }

  piece.max_ky = ky_max;
  // The y-mean of h is the interval defect; H must close up periodically.
  const double mean = h[ky_max].real();
  if (std::abs(mean) > std::max(tol, 1e-10)) {
    throw Error(ErrorKind::kInternalConsistency,
                "antiderivative in y does not close: mean " + std::to_string(mean));
  }
  piece.h.c0 = mean;
  for (int ky = 1; ky <= ky_max; ++ky) {
    const Complex c = h[ky_max + ky];
    if (c == Complex{}) continue;
    piece.h.modes.push_back({ky, c});
    const Complex big = c / (kI * (kTwoPi * ky));
    piece.big_h.modes.push_back({ky, big});
    piece.big_h.c0 -= 2.0 * big.real();  // anchors H(0) = 0
  }
  return piece;
}

}  // namespace

// Delta splits into its y-mean, sigma times the y-mean-free part, and the
// rest, which lives in layers of width L next to the circles. The middle
// part has the exact primitive -sigma G dx with dG/dy the mean-free part; the
// others are integrated in x with a cutoff correction. Pure x-flux over whole
// regions also works but produces maps with layers far thinner than eps.
struct PrimitiveOneForm::Impl {
  CriticalSet z;
  std::shared_ptr<const WindowProfile> window;  // 1 - sigma
  Field g;                                      // y-antiderivative of the mean-free part
  double width = 0.0;
  std::vector<std::vector<Piece>> regions;

  Eigen::Vector2d eval(double x, double y) const {
    double lifted = 0.0;
    const size_t j = z.region_of(x, &lifted);
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    for (const Piece& p : regions[j]) out += p.eval(lifted, y);
    const double sigma = 1.0 - window->value(x);
    if (sigma != 0.0) out.x() -= sigma * g(x, y);
    return out;
  }
};

Eigen::Vector2d PrimitiveOneForm::operator()(double x, double y) const { return impl_->eval(x, y); }

PointwiseOneForm PrimitiveOneForm::pointwise() const {
  auto impl = impl_;
  return [impl](double x, double y) { return impl->eval(x, y); };
}

const CriticalSet& PrimitiveOneForm::critical() const { return impl_->z; }

double PrimitiveOneForm::layer_width() const { return impl_->width; }

OneForm PrimitiveOneForm::project(int bandwidth, int n, double* error) const {
  Eigen::ArrayXXd ga(n, n), gb(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::Vector2d v = impl_->eval(double(i) / n, double(j) / n);
      ga(i, j) = v.x();
      gb(i, j) = v.y();
    }
  }
  OneForm out{SpectralField2D::from_samples(ga, bandwidth),
              SpectralField2D::from_samples(gb, bandwidth)};
  if (error) {
    double e = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double x = (i + 0.5) / n, y = (j + 0.5) / n;
        e = std::max(e, (impl_->eval(x, y) - out(x, y)).cwiseAbs().maxCoeff());
      }
    }
    *error = e;
  }
  return out;
}

PrimitiveOneForm build_primitive(const Field& delta, const CriticalSet& z, double tol) {
  if (delta.singular()) {
    throw Error(ErrorKind::kSingularPoint, "primitive of a singular form");
  }
  const std::vector<double> defects = obstruction(delta, z);
  double worst = 0.0;
  for (double d : defects) worst = std::max(worst, std::abs(d));
  if (worst > tol) {
    std::string list;
    for (double d : defects) list += (list.empty() ? "" : ", ") + std::to_string(d);
    throw ObstructionError(defects, "regional defects (" + list + ") are not zero");
  }

  auto impl = std::make_shared<PrimitiveOneForm::Impl>();
  impl->z = z;
  const double width = layer_width(delta, z);
  impl->width = width;
  impl->window = std::make_shared<WindowProfile>(z, width);

  // y-mean part, and the mean-free part times the window.
  std::vector<FieldTerm> mean_terms, layer_terms, g_terms;
  const SpectralField2D& smooth = delta.spectral_part();
  layer_terms.push_back({impl->window, y_split(smooth, false)});
  for (const FieldTerm& term : delta.terms()) {
    mean_terms.push_back({term.profile, y_split(term.factor, true)});
    layer_terms.push_back({std::make_shared<ProductProfile>(impl->window, term.profile),
                           y_split(term.factor, false)});
    g_terms.push_back({term.profile, y_antiderivative(term.factor)});
  }
  const Field mean_part(y_split(smooth, true), std::move(mean_terms));
  const Field layer_part(SpectralField2D(0), std::move(layer_terms));
  impl->g = Field(y_antiderivative(smooth), std::move(g_terms));

  for (size_t j = 0; j < z.regions(); ++j) {
    const auto [lo, hi] = z.region_bounds(j);
    std::vector<Piece> pieces;
    pieces.push_back(build_piece(mean_part, lo, hi, tol));
    pieces.push_back(build_piece(layer_part, lo, lo + width, tol));
    pieces.push_back(build_piece(layer_part, hi - width, hi, tol));
    impl->regions.push_back(std::move(pieces));
  }

  PrimitiveOneForm out;
  out.impl_ = impl;
  out.report_ = verify_primitive(out.pointwise(), delta, z);
  return out;
}

PrimitiveReport verify_primitive(const PointwiseOneForm& beta, const Field& delta,
                                 const CriticalSet& z, int n) {
  PrimitiveReport report;
  const double h = 1e-3;
  static constexpr double kW[3] = {45.0, -9.0, 1.0};  // sixth-order first difference / 60h
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.37) / n;
    double t = 0.0;
    z.nearest(x, &t);
    if (std::abs(t) < 3.5 * h) continue;
    for (int j = 0; j < n; ++j) {
      const double y = (j + 0.61) / n;
      double db_dx = 0.0, da_dy = 0.0;
      for (int s = 1; s <= 3; ++s) {
        db_dx += kW[s - 1] * (beta(x + s * h, y).y() - beta(x - s * h, y).y());
        da_dy += kW[s - 1] * (beta(x, y + s * h).x() - beta(x, y - s * h).x());
      }
      const double curl = (db_dx - da_dy) / (60.0 * h);
      report.residual = std::max(report.residual, std::abs(curl - delta(x, y)));
      ++report.residual_points;
    }
  }
  const double t_max = std::min(1e-2, 0.5 * z.collar_width());
  for (double c : z.circles()) {
    report.orders.push_back(vanishing_order(beta, c, 1e-4, t_max));
    for (int j = 0; j < 64; ++j) {
      const double y = (j + 0.5) / 64;
      const Eigen::Vector2d jump = beta(c + 1e-13, y) - beta(c - 1e-13, y);
      report.max_jump = std::max(report.max_jump, jump.cwiseAbs().maxCoeff());
    }
  }
  return report;
}

}  // namespace foldvol
