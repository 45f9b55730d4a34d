#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "foldvol/spectral_field.hpp"

using namespace foldvol;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

SpectralField2D random_field(std::uint64_t seed, int modes = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  SpectralField2D f(8);
  for (int kx = -modes; kx <= modes; ++kx) {
    for (int ky = -modes; ky <= modes; ++ky) {
      f = f + SpectralField2D::cosine(kx, ky, 0.3 * u(rng), 8) +
          SpectralField2D::sine(kx, ky, 0.3 * u(rng), 8);
    }
  }
  return f;
}

}  // namespace

TEST_SUITE("spectral_field") {
  TEST_CASE("point evaluation") {
    CHECK(SpectralField2D::cosine(1, 0, 1.0)(0.0, 0.3) == Approx(1.0).epsilon(1e-14));
    CHECK(SpectralField2D::sine(1, 0, 1.0)(0.25, 0.0) == Approx(1.0).epsilon(1e-14));
    const auto f = SpectralField2D::constant(1.0) + SpectralField2D::cosine(0, 1, 0.5);
    CHECK(f(0.7, 0.5) == Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("power tables agree with direct summation") {
    const SpectralField2D f = random_field(3, 5);
    for (double x : {0.0, 0.13, 0.71}) {
      for (double y : {0.0, 0.42, 0.93}) {
        double direct = f.mean();
        for (const Mode& m : f.half_modes()) {
          direct += 2.0 * (m.c * std::polar(1.0, kTwoPi * (m.kx * x + m.ky * y))).real();
        }
        CHECK(std::abs(f(x, y) - direct) < 1e-13);
      }
    }
  }

  TEST_CASE("derivatives") {
    const auto s = SpectralField2D::sine(1, 0, 1.0);
    CHECK(differentiate(s, Axis::kX)(0.0, 0.2) == Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(differentiate(s, Axis::kY).is_zero());
    const auto c = SpectralField2D::cosine(1, 0, 1.0);
    const auto cxx = differentiate(differentiate(c, Axis::kX), Axis::kX);
    for (double x : {0.0, 0.1, 0.37}) {
      CHECK(cxx(x, 0.5) == Approx(-4.0 * kPi * kPi * std::cos(kTwoPi * x)).epsilon(1e-12));
    }
  }

  TEST_CASE("total and strip integrals") {
    CHECK(integrate_total(SpectralField2D::constant(1.0) + SpectralField2D::cosine(1, 0, 1.0)) ==
          Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(integrate_total(SpectralField2D::sine(1, 0, 1.0))) < 1e-15);
    const auto f = SpectralField2D::constant(3.0) +
                   multiply(SpectralField2D::sine(1, 0, 1.0), SpectralField2D::cosine(0, 1, 1.0));
    CHECK(integrate_total(f) == Approx(3.0).epsilon(1e-14));
    // quadrature cross-check at N = 256
    CHECK(f.sample(256).mean() == Approx(3.0).epsilon(1e-13));

    CHECK(integrate_strip(SpectralField2D::sine(1, 0, 1.0), 0.0, 0.5) ==
          Approx(1.0 / kPi).epsilon(1e-14));
    CHECK(integrate_strip(SpectralField2D::constant(1.0), 0.2, 0.7) == Approx(0.5).epsilon(1e-14));
    // y-mean-free: integrates to zero over any strip
    const auto g = multiply(SpectralField2D::cosine(0, 1, 1.0),
                            SpectralField2D::sine(3, 0, 0.7) + SpectralField2D::cosine(2, 0, 0.2));
    CHECK(std::abs(integrate_strip(g, 0.13, 0.61)) < 1e-14);
  }

  TEST_CASE("products") {
    const SpectralField2D f = random_field(1);
    const auto one = SpectralField2D::constant(1.0, 8);
    CHECK((multiply(f, one) - f).max_abs_coeff() < 1e-14);
    CHECK(multiply(f, SpectralField2D(8)).is_zero());
    const auto s = SpectralField2D::sine(1, 0, 1.0);
    const auto s2 = multiply(s, s);
    CHECK(s2.mean() == Approx(0.5).epsilon(1e-14));
    for (double x : {0.0, 0.1, 0.3}) {
      CHECK(s2(x, 0.0) == Approx(0.5 * (1.0 - std::cos(2.0 * kTwoPi * x))).epsilon(1e-13));
    }
    // roundoff modes are pruned, so products stay sparse
    CHECK(s2.half_modes().size() == 1);
  }

  TEST_CASE("sampling round trip and symmetry") {
    const SpectralField2D f = random_field(9);
    const auto back = SpectralField2D::from_samples(f.sample(32), 8);
    CHECK((back - f).max_abs_coeff() < 1e-13);
    CHECK(f.symmetry_defect() < 1e-15);

    Eigen::ArrayXXcd c = Eigen::ArrayXXcd::Zero(5, 5);
    c(3, 2) = Complex(1.0, 0.0);  // kx = 1 without its conjugate partner
    double correction = 0.0;
    const auto sym = SpectralField2D::symmetrized(c, &correction);
    CHECK(correction > 0.1);
    CHECK(sym.symmetry_defect() < 1e-15);
  }

  TEST_CASE("one-dimensional series") {
    const auto g = SpectralField1D::constant(2.0, 3) + SpectralField1D::cosine(2, 0.5, 3);
    CHECK(g(0.0) == Approx(2.5).epsilon(1e-14));
    CHECK(g.mean() == Approx(2.0));
    const auto gi = SpectralField1D::cosine(1, 1.0, 2).antiderivative();
    CHECK(gi.derivative()(0.3) == Approx(std::cos(kTwoPi * 0.3)).epsilon(1e-13));
  }
}
