#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "foldvol/error.hpp"
#include "foldvol/moser_flow.hpp"

using namespace foldvol;
using doctest::Approx;

namespace fx = foldvol::fixtures;

namespace {

FoldedVolumeForm folded(const SpectralField2D& f) { return certify_folded(TwoForm{f}, fx::two_circles()); }

MoserConfig small_config() {
  MoserConfig c;
  c.grid = 64;
  c.steps = 20;
  return c;
}

}  // namespace

TEST_SUITE("moser_flow") {
  TEST_CASE("equal forms give the zero field and the identity") {
    const FoldedVolumeForm f = folded(fx::sin_x());
    const MoserProblem p = make_moser_problem(f, f);
    const MoserField v(p);
    for (double s : {0.0, 0.5, 1.0}) CHECK(v(0.3, 0.2, s).norm() == 0.0);
    const MoserResult r = run_moser(f, f, small_config());
    CHECK(r.map.max_displacement() == 0.0);
    CHECK(r.certificate.pullback_error <= 1e-12);
    CHECK(r.certificate.success());
  }

  TEST_CASE("the field contracts back to beta") {
    const FoldedVolumeForm f0 = folded(fx::sin_x()), f1 = folded(fx::modulated_sin());
    const MoserProblem p = make_moser_problem(f0, f1);
    const MoserField v(p);
    double worst = 0.0;
    for (double s : {0.0, 0.5, 1.0}) {
      for (double x : {0.003, 0.1, 0.27, 0.49, 0.6, 0.93}) {
        for (double y : {0.0, 0.35, 0.8}) {
          const Eigen::Vector2d w = v(x, y, s);
          const double omega = (1.0 - s) * f0(x, y) + s * f1(x, y);
          const Eigen::Vector2d back(-omega * w.y(), omega * w.x());
          worst = std::max(worst, (back - p.beta(x, y)).norm());
        }
      }
    }
    CHECK(worst <= 1e-8);
  }

  TEST_CASE("the field vanishes linearly at Z") {
    const FoldedVolumeForm f0 = folded(fx::sin_x()), f1 = folded(fx::modulated_sin());
    const MoserProblem p = make_moser_problem(f0, f1);
    const MoserField v(p);
    const PointwiseOneForm mag = [&](double x, double y) {
      return Eigen::Vector2d(v(x, y, 0.5).norm(), 0.0);
    };
    CHECK(vanishing_order(mag, 0.0) >= 0.95);
    CHECK(vanishing_order(mag, 0.5) >= 0.95);
  }

  TEST_CASE("flow keeps Z fixed") {
    const FoldedVolumeForm f0 = folded(fx::sin_x()), f1 = folded(fx::modulated_sin());
    const MoserResult r = run_moser(f0, f1, small_config());
    CHECK(r.certificate.z_fixing_error <= 1e-8);
    CHECK(r.certificate.trajectory_z_error <= 1e-8);
    CHECK(r.certificate.min_jacobian > 0.0);
    // coarse grid: the pullback certificate is loose here, tight at N = 256
    CHECK(r.certificate.pullback_error <= 5e-3);
  }

  TEST_CASE("scaled forms are obstructed") {
    const FoldedVolumeForm f0 = folded(fx::sin_x()), f1 = folded(1.1 * fx::sin_x());
    try {
      run_moser(f0, f1, small_config());
      FAIL("expected an obstruction");
    } catch (const ObstructionError& e) {
      REQUIRE(e.defects().size() == 2);
      CHECK(e.defects()[0] == Approx(0.1 / std::numbers::pi).epsilon(1e-9));
      CHECK(e.defects()[1] == Approx(-0.1 / std::numbers::pi).epsilon(1e-9));
    }
  }

  TEST_CASE("random Z-preserving diffeomorphisms") {
    const CriticalSet z = fx::two_circles();
    const ZDiffeo still = random_z_diffeo(z, 7, 0.0, 64, 16);
    CHECK(still.map.max_displacement() == 0.0);

    const ZDiffeo phi = random_z_diffeo(z, 7, 0.05, 64, 32);
    double off = 0.0;
    for (double c : z.circles()) {
      for (int j = 0; j < 64; ++j) {
        const Eigen::Vector2d q = phi.map(Eigen::Vector2d(c, j / 64.0));
        double t = 0.0;
        z.nearest(q.x(), &t);
        off = std::max(off, std::abs(t));
      }
    }
    CHECK(off <= 1e-8);

    // pushforward: pullback by the inverse flow
    const FoldedVolumeForm f = folded(fx::modulated_sin());
    const TwoForm pushed = pullback(f.form(), phi.inverse(32), 32);
    const FoldedVolumeForm g = certify_folded(pushed, z);
    const RegionalVolumes a = regional_volumes(f), b = regional_volumes(g);
    CHECK(std::abs(a.volumes[0] - b.volumes[0]) <= 1e-5);
    CHECK(std::abs(a.volumes[1] - b.volumes[1]) <= 1e-5);
  }

  TEST_CASE("homotopy operator") {
    const CriticalSet z = fx::two_circles();
    const Field omega(fx::sin_x());
    const ZDiffeo id = random_z_diffeo(z, 3, 0.0, 64, 8);
    const OneForm q0 = homotopy_primitive(omega, id, 4, 64, 2);
    CHECK(q0.a.max_abs_coeff() == 0.0);
    CHECK(q0.b.max_abs_coeff() == 0.0);
  }
}
