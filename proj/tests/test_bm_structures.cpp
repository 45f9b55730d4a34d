#include <doctest.h>

#include <cmath>
#include <numbers>

#include "foldvol/bm_structures.hpp"
#include "foldvol/error.hpp"

using namespace foldvol;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

const SpectralField2D kSin = SpectralField2D::sine(1, 0, 1.0);

FoldedVolumeForm sin_form() { return certify_folded(TwoForm{kSin}, CriticalSet({0.0, 0.5})); }

FoldedVolumeForm modulated_form() {
  const auto w = kSin + 0.3 * multiply(kSin, SpectralField2D::cosine(0, 1, 1.0));
  return certify_folded(TwoForm{w}, CriticalSet({0.0, 0.5}));
}

}  // namespace

TEST_SUITE("bm_structures") {
  TEST_CASE("certify folded forms") {
    const FoldedVolumeForm f = sin_form();
    CHECK(f.certificate().min_normal_derivative == Approx(2.0 * kPi).epsilon(1e-12));
    CHECK(f.certificate().max_abs_on_z < 1e-14);
    CHECK(f.certificate().coorientations == std::vector<int>{1, -1});

    CHECK_THROWS_AS(certify_folded(TwoForm{multiply(kSin, kSin)}, CriticalSet({0.0, 0.5})), Error);
    CHECK_THROWS_AS(certify_folded(TwoForm{SpectralField2D::constant(1.0)}, CriticalSet({0.0})),
                    Error);
  }

  TEST_CASE("certification scales with positive constants") {
    const FoldedVolumeForm f = sin_form();
    const FoldedVolumeForm g = certify_folded(TwoForm{3.0 * kSin}, CriticalSet({0.0, 0.5}));
    CHECK(g.certificate().min_normal_derivative ==
          Approx(3.0 * f.certificate().min_normal_derivative).epsilon(1e-12));
  }

  TEST_CASE("local factorization by the defining function") {
    const FoldedVolumeForm f = sin_form();
    const CollarQuotient mu = factor_defining(f, CollarSpec::of(f.critical(), 0));
    CHECK(mu(0.0, 0.3) == Approx(2.0 * kPi).epsilon(1e-9));
    double worst = 0.0;
    for (double t : {-0.2, -0.05, -1e-3, 1e-3, 0.02, 0.2}) {
      for (double y : {0.0, 0.4}) worst = std::max(worst, std::abs(t * mu(t, y) - f(t, y)));
    }
    CHECK(worst <= 1e-9);

    // already factored: omega = t (2 + cos 2 pi y) near 0
    const auto t_field = SpectralField2D::sine(1, 0, 1.0 / kTwoPi);
    const auto w = multiply(t_field, SpectralField2D::constant(2.0) +
                                         SpectralField2D::cosine(0, 1, 1.0));
    const FoldedVolumeForm g = certify_folded(TwoForm{w}, CriticalSet({0.0, 0.5}));
    const CollarQuotient nu = factor_defining(g, CollarSpec::of(g.critical(), 0));
    for (double y : {0.0, 0.25, 0.5}) {
      CHECK(nu(0.0, y) == Approx(2.0 + std::cos(kTwoPi * y)).epsilon(1e-9));
    }

    // a collar reaching past the next zero
    CHECK_THROWS_AS(factor_defining(f, CollarSpec{0, 0.0, 0.6}), Error);
    const FoldedVolumeForm h =
        certify_folded(TwoForm{SpectralField2D::sine(2, 0, 1.0)}, CriticalSet({0.0, 0.25, 0.5, 0.75}));
    CHECK_THROWS_AS(factor_defining(h, CollarSpec{0, 0.0, 0.3}), Error);
  }

  TEST_CASE("convex path") {
    const FoldedVolumeForm f0 = sin_form(), f1 = modulated_form();
    const FoldedVolumeForm p0 = convex_path(f0, f1, 0.0);
    CHECK(p0(0.2, 0.3) == f0(0.2, 0.3));
    const FoldedVolumeForm half = convex_path(f0, f1, 0.5);
    CHECK(half.certificate().min_normal_derivative >= 0.7 * 2.0 * kPi);
    const FoldedVolumeForm neg = certify_folded(TwoForm{-1.0 * kSin}, CriticalSet({0.0, 0.5}));
    CHECK_THROWS_AS(convex_path(f0, neg, 0.5), Error);
  }

  TEST_CASE("Laurent assembly") {
    const CriticalSet z({0.0}, {}, 0.3);
    const BmNambuForm theta(1, z, {LaurentData{{SpectralField1D::constant(2.0)}}},
                            SpectralField2D(8));
    CHECK(laurent_assemble(theta)(0.01, 0.4) == Approx(200.0).epsilon(1e-12));

    const BmNambuForm cubic(3, z,
                            {LaurentData{{SpectralField1D::constant(1.0), SpectralField1D(),
                                          SpectralField1D()}}},
                            SpectralField2D(8));
    CHECK(laurent_assemble(cubic)(0.1, 0.4) == Approx(1000.0).epsilon(1e-12));

    const auto smooth = SpectralField2D::constant(1.0, 8) + SpectralField2D::sine(1, 0, 0.5, 8);
    const BmNambuForm plain(1, z, {LaurentData{{SpectralField1D()}}}, smooth);
    CHECK_FALSE(plain.has_singular_part());
    CHECK(laurent_assemble(plain)(0.0, 0.2) == Approx(1.0));
  }
}
