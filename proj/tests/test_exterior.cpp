#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "foldvol/error.hpp"
#include "foldvol/exterior.hpp"

using namespace foldvol;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField2D random_field(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpectralField2D f(8);
  for (int kx = 0; kx <= 3; ++kx) {
    for (int ky = -3; ky <= 3; ++ky) {
      f = f + SpectralField2D::cosine(kx, ky, 0.2 * u(rng), 8) +
          SpectralField2D::sine(kx, ky, 0.2 * u(rng), 8);
    }
  }
  return f;
}

// Smooth periodic displacement; small enough to stay a diffeomorphism.
DiscreteMap wavy_map(int n, double amp) {
  Eigen::ArrayXXd dx(n, n), dy(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = double(i) / n, y = double(j) / n;
      dx(i, j) = amp * std::sin(kTwoPi * y) * std::cos(kTwoPi * x);
      dy(i, j) = amp * std::cos(kTwoPi * (x + 2.0 * y));
    }
  }
  return DiscreteMap(dx, dy);
}

}  // namespace

TEST_SUITE("exterior_calculus") {
  TEST_CASE("exterior derivative") {
    const OneForm w{SpectralField2D(8), SpectralField2D::sine(1, 0, 1.0)};
    const TwoForm dw = d1(w);
    for (double x : {0.0, 0.2, 0.45}) {
      CHECK(dw(x, 0.3) == Approx(kTwoPi * std::cos(kTwoPi * x)).epsilon(1e-13));
    }
    for (std::uint64_t seed : {1, 2, 3}) {
      const TwoForm dd = d1(d0(random_field(seed)));
      CHECK(dd.coef.spectral_part().max_abs_coeff() < 1e-12);
      // Stokes: exact forms have zero integral
      const OneForm g = d0(random_field(seed + 10));
      CHECK(std::abs(integrate_total(g.a)) < 1e-14);
      CHECK(std::abs(integrate_total(g.b)) < 1e-14);
    }
  }

  TEST_CASE("contraction") {
    const TwoForm area{SpectralField2D::constant(1.0, 8)};
    const VectorField ex{SpectralField2D::constant(1.0, 8), SpectralField2D(8)};
    const VectorField ey{SpectralField2D(8), SpectralField2D::constant(1.0, 8)};
    const OneForm a = contract(area, ex);
    CHECK(a.a.is_zero());
    CHECK(a.b(0.3, 0.4) == Approx(1.0));
    const OneForm b = contract(area, ey);
    CHECK(b.a(0.3, 0.4) == Approx(-1.0));
    CHECK(b.b.is_zero());

    const auto s = SpectralField2D::sine(1, 0, 1.0, 8);
    const OneForm c = contract(TwoForm{s}, VectorField{s, SpectralField2D(8)});
    for (double x : {0.1, 0.3, 0.8}) {
      CHECK(c.b(x, 0.2) == Approx(std::pow(std::sin(kTwoPi * x), 2)).epsilon(1e-13));
    }
  }

  TEST_CASE("solving the contraction near the critical set") {
    const CriticalSet z({0.0, 0.5}, {}, 0.2);
    const TwoForm omega{SpectralField2D::sine(1, 0, 1.0)};
    const auto zero = [](double, double) { return Eigen::Vector2d::Zero().eval(); };
    const ContractionField v0 = solve_contraction(omega, z, zero);
    CHECK(v0(0.3, 0.1).norm() == 0.0);

    const auto beta = [](double x, double) {
      const double s = std::sin(kTwoPi * x);
      return Eigen::Vector2d(0.0, s * s);
    };
    const ContractionField v = solve_contraction(omega, z, beta);
    for (double x : {0.0, 1e-3, 0.004, 0.2, 0.5, 0.503, 0.77}) {
      const Eigen::Vector2d got = v(x, 0.4);
      CHECK(got.x() == Approx(std::sin(kTwoPi * x)).epsilon(1e-9).scale(1.0));
      CHECK(std::abs(got.y()) < 1e-12);
    }

    const auto first_order = [](double x, double) {
      return Eigen::Vector2d(0.0, std::sin(kTwoPi * x));
    };
    CHECK_THROWS_AS(solve_contraction(omega, z, first_order), Error);
  }

  TEST_CASE("pullback") {
    const int n = 64;
    const TwoForm omega{SpectralField2D::constant(1.0, 8) +
                        multiply(SpectralField2D::sine(1, 0, 0.5, 8),
                                 SpectralField2D::cosine(0, 1, 1.0, 8))};
    const TwoForm same = pullback(omega, DiscreteMap(n), 8);
    CHECK((same.coef.spectral_part() - omega.coef.spectral_part()).max_abs_coeff() < 1e-12);

    // translation in y: the coefficient is translated, the integral kept
    const TwoForm shifted = pullback(omega, DiscreteMap::translation(n, 0.0, 0.3), 8);
    for (double x : {0.1, 0.6}) {
      for (double y : {0.0, 0.25}) CHECK(shifted(x, y) == Approx(omega(x, y + 0.3)).epsilon(1e-12));
    }
    CHECK(shifted.integral() == Approx(omega.integral()).epsilon(1e-12));

    // functoriality on translations
    const DiscreteMap t1 = DiscreteMap::translation(n, 0.1, 0.2);
    const DiscreteMap t2 = DiscreteMap::translation(n, 0.05, -0.35);
    const TwoForm two_steps = pullback(pullback(omega, t2, 8), t1, 8);
    const TwoForm one_step = pullback(omega, t2.compose(t1), 8);
    CHECK((two_steps.coef.spectral_part() - one_step.coef.spectral_part()).max_abs_coeff() < 1e-8);
  }

  TEST_CASE("change of variables at N = 256") {
    const TwoForm omega{SpectralField2D::constant(0.7, 8) + SpectralField2D::sine(1, 1, 0.4, 8)};
    const DiscreteMap phi = wavy_map(256, 0.03);
    CHECK(phi.jacobian_determinant().minCoeff() > 0.0);
    CHECK(pullback_samples(omega, phi).mean() == Approx(omega.integral()).epsilon(1e-6));
  }

  TEST_CASE("orientation reversing maps are rejected") {
    const int n = 32;
    Eigen::ArrayXXd dx(n, n), dy = Eigen::ArrayXXd::Zero(n, n);
    for (int i = 0; i < n; ++i) dx.row(i).setConstant(-2.0 * double(i) / n);  // x -> -x
    const TwoForm omega{SpectralField2D::constant(1.0, 4)};
    CHECK_THROWS_AS(pullback_samples(omega, DiscreteMap(dx, dy)), Error);
  }
}
