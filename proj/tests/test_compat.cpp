#include <doctest.h>

#include <cmath>
#include <sstream>

#include "fixtures.hpp"
#include "foldvol/compat.hpp"
#include "foldvol/error.hpp"
#include "foldvol/io.hpp"

using namespace foldvol;
using doctest::Approx;

namespace fx = foldvol::fixtures;

TEST_SUITE("compat_pipeline") {
  TEST_CASE("equivalent single-circle pair") {
    const BmNambuForm a = single_circle_form(1.0, 0.2, 0.3);
    const BmNambuForm b = single_circle_form(1.0, -0.1, 0.0);
    const CompatReport r = compat_experiment(a, b);
    CHECK(r.bm_equivalent);
    REQUIRE(r.rows.size() == 3);
    for (const CompatRow& row : r.rows) {
      CAPTURE(row.eps);
      CHECK(row.error.empty());
      CHECK(row.folded_equivalent);
      CHECK(row.mechanism_defect <= 1e-8);
      CHECK_FALSE(row.witness.has_value());
    }
    CHECK(r.consistent());
  }

  TEST_CASE("different periods stay inequivalent after desingularizing") {
    const BmNambuForm a = single_circle_form(1.0, 0.2, 0.3);
    const BmNambuForm b = single_circle_form(1.3, 0.2, 0.3);
    const CompatReport r = compat_experiment(a, b);
    CHECK_FALSE(r.bm_equivalent);
    for (const CompatRow& row : r.rows) CHECK_FALSE(row.folded_equivalent);
    CHECK(r.consistent());
  }

  TEST_CASE("random pairs share periods and finite parts") {
    for (std::uint64_t seed : {1, 2, 3}) {
      const auto [a, b] = random_equivalent_pair(seed);
      const BmVerdict v = bm_equivalent(a, b);
      CHECK(v.equivalent);
      CHECK(v.period_gap <= 1e-14);
    }
    // deterministic in the seed
    const auto [a1, b1] = random_equivalent_pair(4);
    const auto [a2, b2] = random_equivalent_pair(4);
    CHECK(to_json(a1) == to_json(a2));
  }

  TEST_CASE("witness on a coarse grid") {
    ExperimentConfig cfg;
    cfg.eps = {0.2};
    cfg.witness = true;
    cfg.moser.grid = 64;
    cfg.moser.steps = 10;
    const CompatReport r =
        compat_experiment(single_circle_form(1.0, 0.2, 0.3), single_circle_form(1.0, -0.1, 0.0), cfg);
    REQUIRE(r.rows[0].witness.has_value());
    CHECK(r.rows[0].witness->z_fixing_error <= 1e-8);
    CHECK(r.rows[0].witness->min_jacobian > 0.0);
  }
}

TEST_SUITE("io") {
  TEST_CASE("spectral fields round trip") {
    const SpectralField2D f = fx::random_bandlimited(3, 2, 0.5).with_bandwidth(4);
    double correction = -1.0;
    const SpectralField2D g = field_from_json(to_json(f), &correction);
    CHECK((g - f).max_abs_coeff() < 1e-15);
    CHECK(correction < 1e-15);

    const SpectralField1D h = SpectralField1D::constant(1.0, 3) + SpectralField1D::sine(2, 0.4, 3);
    CHECK((field1d_from_json(to_json(h)) - h).coeffs().cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("forms round trip") {
    const FoldedVolumeForm f = certify_folded(TwoForm{fx::modulated_sin()}, fx::two_circles());
    const FormFile back = form_from_json(to_json(f));
    REQUIRE(back.folded.has_value());
    CHECK(back.folded->coef()(0.3, 0.7) == Approx(f(0.3, 0.7)).epsilon(1e-14));
    CHECK(back.folded->critical().circles() == f.critical().circles());

    const BmNambuForm theta = single_circle_form(1.0, 0.2, 0.3);
    const FormFile bm = form_from_json(to_json(theta));
    REQUIRE(bm.bm.has_value());
    CHECK(to_json(*bm.bm) == to_json(theta));
  }

  TEST_CASE("maps round trip") {
    Eigen::ArrayXXd dx = Eigen::ArrayXXd::Random(8, 8) * 0.01;
    Eigen::ArrayXXd dy = Eigen::ArrayXXd::Random(8, 8) * 0.01;
    const DiscreteMap m(dx, dy);
    const DiscreteMap back = map_from_json(to_json(m));
    CHECK((back.displacement_x() - dx).abs().maxCoeff() == 0.0);
    CHECK((back.displacement_y() - dy).abs().maxCoeff() == 0.0);
  }

  TEST_CASE("malformed input") {
    auto kind_of = [](const Json& j) {
      try {
        form_from_json(j);
      } catch (const Error& e) {
        return e.kind();
      }
      return ErrorKind::kInternalConsistency;
    };
    CHECK(kind_of(Json::parse(R"({"type":"folded"})")) == ErrorKind::kMalformedInput);
    CHECK(kind_of(Json::parse(R"({"type":"cube"})")) == ErrorKind::kMalformedInput);
    CHECK(kind_of(Json::parse(R"([1,2,3])")) == ErrorKind::kMalformedInput);
    CHECK_THROWS_AS(map_from_json(Json::parse(R"({"N":2,"dx":[0,0,0],"dy":[0,0,0,0]})")), Error);
  }

  TEST_CASE("compat report is deterministic") {
    const BmNambuForm a = single_circle_form(1.0, 0.2, 0.3);
    const BmNambuForm b = single_circle_form(1.0, -0.1, 0.0);
    ExperimentConfig cfg;
    cfg.eps = {0.1};
    const std::string first = to_json(compat_experiment(a, b, cfg)).dump();
    const std::string second = to_json(compat_experiment(a, b, cfg)).dump();
    CHECK(first == second);
    const std::string csv = compat_csv(compat_experiment(a, b, cfg));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  }
}
