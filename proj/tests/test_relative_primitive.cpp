#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "foldvol/error.hpp"
#include "foldvol/relative_primitive.hpp"

using namespace foldvol;
using doctest::Approx;

namespace fx = foldvol::fixtures;

TEST_SUITE("relative_primitive") {
  TEST_CASE("obstruction vector") {
    const CriticalSet z = fx::two_circles();
    for (double d : obstruction(Field(SpectralField2D(8)), z)) CHECK(d == 0.0);
    const auto v = obstruction(Field(0.2 * fx::sin_x()), z);
    CHECK(v[0] == Approx(0.2 / std::numbers::pi).epsilon(1e-12));
    CHECK(v[1] == Approx(-0.2 / std::numbers::pi).epsilon(1e-12));
    for (double d : obstruction(Field(multiply(fx::sin_x(), SpectralField2D::cosine(0, 1, 1.0))), z)) {
      CHECK(std::abs(d) < 1e-15);
    }
  }

  TEST_CASE("zero difference has zero primitive") {
    const PrimitiveOneForm beta = build_primitive(Field(SpectralField2D(8)), fx::two_circles());
    CHECK(beta(0.3, 0.7).norm() == 0.0);
    CHECK(beta.report().residual == 0.0);
  }

  TEST_CASE("mean-free example") {
    const auto delta = 0.3 * multiply(fx::sin_x(), SpectralField2D::cosine(0, 1, 1.0));
    const PrimitiveOneForm beta = build_primitive(Field(delta), fx::two_circles());
    const PrimitiveReport& r = beta.report();
    CHECK(r.residual <= 1e-9);
    for (double o : r.orders) CHECK(o >= 1.95);
    CHECK(r.max_jump < 1e-12);
    // far from the circles the primitive is the exact y-antiderivative term
    const double x = 0.25, y = 0.1;
    const double g = 0.3 * std::sin(2.0 * std::numbers::pi * x) *
                     std::sin(2.0 * std::numbers::pi * y) / (2.0 * std::numbers::pi);
    CHECK(beta(x, y).x() == Approx(-g).epsilon(1e-10));
  }

  TEST_CASE("difference of the equivalent sin pair") {
    const Field delta(fx::sin_x() - fx::modulated_sin());
    const PrimitiveOneForm beta = build_primitive(delta, fx::two_circles());
    for (double o : beta.report().orders) CHECK(o >= 2.0 - 1e-3);
    CHECK(beta.report().residual <= 1e-9);
  }

  TEST_CASE("random zero-defect differences") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      CAPTURE(seed);
      const Field delta(fx::random_zero_defect(seed));
      const PrimitiveOneForm beta = build_primitive(delta, fx::two_circles());
      CHECK(beta.report().residual <= 1e-8);
      for (double o : beta.report().orders) CHECK(o >= 1.9);
    }
  }

  TEST_CASE("nonzero defects are an obstruction") {
    try {
      build_primitive(Field(0.1 * fx::sin_x()), fx::two_circles());
      FAIL("expected an obstruction");
    } catch (const ObstructionError& e) {
      CHECK(e.defects()[0] == Approx(0.1 / std::numbers::pi).epsilon(1e-12));
    }
  }

  TEST_CASE("verification of hand-made one-forms") {
    const CriticalSet z = fx::two_circles();
    const auto zero = [](double, double) { return Eigen::Vector2d::Zero().eval(); };
    CHECK(verify_primitive(zero, Field(SpectralField2D(8)), z).residual == 0.0);
    // sin(2 pi x) dy: d of it is 2 pi cos(2 pi x), vanishing order 1
    const auto first = [](double x, double) {
      return Eigen::Vector2d(0.0, std::sin(2.0 * std::numbers::pi * x));
    };
    const Field d(SpectralField2D::cosine(1, 0, 2.0 * std::numbers::pi));
    const PrimitiveReport r = verify_primitive(first, d, z);
    CHECK(r.residual < 1e-8);
    for (double o : r.orders) CHECK(o == Approx(1.0).epsilon(0.02));
  }
}
