#include <doctest.h>

#include <cmath>

#include "foldvol/desingularization.hpp"
#include "foldvol/error.hpp"

using namespace foldvol;
using doctest::Approx;

namespace {

BmNambuForm single(int m, const SpectralField1D& alpha0, const SpectralField2D& smooth,
                   std::vector<double> folds = {}) {
  std::vector<SpectralField1D> alpha(m);
  alpha[0] = alpha0;
  return BmNambuForm(m, CriticalSet({0.0}, {}, 0.4), {LaurentData{alpha}}, smooth,
                     SpectralField2D(0), std::move(folds));
}

// S = sin 2 pi x - sin(4 pi x) / 2 folds at 1/2 and is cubic at 0.
SpectralField2D cubic_smooth() {
  return SpectralField2D::sine(1, 0, 1.0, 8) + SpectralField2D::sine(2, 0, -0.5, 8);
}

}  // namespace

TEST_SUITE("desingularization") {
  TEST_CASE("even-m profile") {
    const double eps = 0.1;
    const DesingProfile p = build_even_profile(1, eps);
    CHECK(p.derivative(2.0 * eps, 1) == Approx(1.0 / (4.0 * eps * eps)).epsilon(1e-12));
    double odd = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double x = -0.3 + 0.6 * i / 99.0;
      if (x == 0.0) continue;
      odd = std::max(odd, std::abs(p.value(-x) + p.value(x)));
    }
    CHECK(odd <= 1e-12);
    CHECK(std::abs(p.derivative(eps * (1 + 1e-15), 0) - p.derivative(eps, 0)) <= 1e-12);
    CHECK(p.contact_mismatch() <= 1e-9);
    CHECK(p.min_interior_slope() > 0.0);
  }

  TEST_CASE("odd-m profile") {
    const DesingProfile p = build_odd_profile(0, 0.1);
    CHECK(p.derivative(0.05, 1) == Approx(10.0).epsilon(1e-12));
    CHECK(p.derivative(0.0, 1) == 0.0);
    for (int k : {0, 1, 2}) {
      const double eps = 0.1;
      const DesingProfile q = build_odd_profile(k, eps);
      CHECK(q.derivative(0.0, 2) == Approx(2.0 / std::pow(eps, 2 * k + 2)).epsilon(1e-12));
      double even = 0.0;
      for (int i = 0; i < 100; ++i) {
        const double x = 0.001 + 0.3 * i / 99.0;
        even = std::max(even, std::abs(q.value(-x) - q.value(x)));
      }
      CHECK(even <= 1e-12);
      CHECK(q.contact_mismatch() <= 1e-9);
    }
  }

  TEST_CASE("higher contact orders stay monotone") {
    for (int r : {3, 4, 5}) {
      CAPTURE(r);
      const DesingProfile p = build_even_profile(2, 0.1, r);
      CHECK(p.min_interior_slope() > 0.0);
      const DesingProfile q = build_odd_profile(1, 0.1, r);
      CHECK(q.min_interior_slope() > 0.0);
    }
  }

  TEST_CASE("odd m = 1 desingularization is folded") {
    for (double eps : {0.05, 0.1, 0.2}) {
      CAPTURE(eps);
      const BmNambuForm theta = single(1, SpectralField1D::constant(1.0), cubic_smooth(), {0.5});
      const DesingularizedForm d = desingularize(theta, build_odd_profile(0, eps));
      REQUIRE(d.folded.has_value());
      const DesingReport r = verify_desing(d);
      CHECK(r.certified);
      for (double e : r.slope_ratio_error) CHECK(e <= 1e-6);
      CHECK(d.omega(0.0, 0.3) == 0.0);
    }
  }

  TEST_CASE("even m = 2 desingularization") {
    const BmNambuForm theta =
        single(2, SpectralField1D::constant(1.0), SpectralField2D::constant(0.5, 8));
    const LaurentSampler source = laurent_assemble(theta);
    const DesingularizedForm d = desingularize(theta, build_even_profile(1, 0.05));
    const DesingReport r = verify_desing(d);
    CHECK(r.outside_difference <= 1e-12);
    CHECK(r.min_abs_coef > 0.0);
    for (double x : {0.06, 0.1, 0.2}) {
      CHECK(d.omega(x, 0.4) == Approx(source(x, 0.4)).epsilon(1e-12));
    }
    CHECK(d.omega(0.5, 0.4) == Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("forms without a singular part are unchanged") {
    const BmNambuForm theta = single(1, SpectralField1D(), SpectralField2D::constant(2.0, 8));
    const DesingularizedForm d = desingularize(theta, build_odd_profile(0, 0.1));
    CHECK(verify_desing(d).identical_to_source);
    CHECK(d.omega(0.3, 0.1) == Approx(2.0));
  }

  TEST_CASE("parity and width are checked") {
    const BmNambuForm theta = single(1, SpectralField1D::constant(1.0), cubic_smooth(), {0.5});
    CHECK_THROWS_AS(desingularize(theta, build_even_profile(1, 0.1)), Error);
    CHECK_THROWS_AS(desingularize(theta, build_odd_profile(0, 0.3)), Error);
  }
}
