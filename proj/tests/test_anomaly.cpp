#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "regdet/anomaly.hpp"
#include "regdet/error.hpp"
#include "regdet/green.hpp"
#include "regdet/special.hpp"
#include "regdet/zeta.hpp"

using namespace regdet;

TEST_SUITE("anomaly") {
  TEST_CASE("no mass shift means no correction") {
    const auto r = verify_thm2(make_sphere(1.0), 1.0, 0.0);
    CHECK(r.rel_residual < 1e-12);
    CHECK(r.factor("det2") == 1.0);
    CHECK(r.factor("exp_cf_term") == 1.0);
    CHECK(r.pass);
  }

  TEST_CASE("mass-shift identity on the headline instances") {
    const auto s = verify_thm2(make_sphere(1.0), 1.0, 1.0);
    CHECK(s.rel_residual < 1e-6);
    CHECK(s.pass);
    CHECK(s.rhs == doctest::Approx(s.factor("det_zeta_m0") * s.factor("det2") * s.factor("exp_cf_term")).epsilon(1e-14));
    CHECK(s.rel_residual == doctest::Approx(std::abs(s.lhs / s.rhs - 1.0)).epsilon(1e-3).scale(1e-15));
    const auto t = verify_thm2(make_torus(1.0, 1.0), 1.0, 2.0);
    CHECK(t.rel_residual < 1e-6);
    CHECK(t.pass);
    CHECK(t.error_budget < 1e-8);
  }

  TEST_CASE("mass-shift identity across the grid") {
    for (const auto& m : {make_sphere(1.0), make_torus(1.0, 1.0), make_torus(1.0, 2.0)}) {
      for (double m0 : {0.5, 1.0, 4.0}) {
        for (double m1 : {0.0, 1.0, 2.0}) {
          const auto r = verify_thm2(m, m0, m1);
          CAPTURE(describe(m));
          CAPTURE(m0);
          CAPTURE(m1);
          CHECK(r.pass);
          CHECK(r.rel_residual < 1e-8);
        }
      }
    }
  }

  TEST_CASE("mass shifts compose") {
    for (const auto& m : {make_sphere(1.0), make_torus(1.0, 2.0)}) {
      const auto ab = verify_thm2(m, 1.0, 0.7);
      const auto bc = verify_thm2(m, 1.7, 1.3);
      const auto one_shot = verify_thm2(m, 1.0, 2.0);
      auto correction = [](const AnomalyReport& r) { return r.factor("det2") * r.factor("exp_cf_term"); };
      const double chained = correction(ab) * correction(bc);
      CHECK(std::abs(chained / correction(one_shot) - 1.0) <
            ab.error_budget + bc.error_budget + one_shot.error_budget + 1e-12);
    }
  }

  TEST_CASE("mass-shift prefactor") {
    const auto s = make_sphere(1.0);
    CHECK(thm1_prefactor(s, 4.0 * std::exp(-kEulerGamma), 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    // A / 4pi = 1 on the unit sphere, so the exponent at m0 = 4 is gamma itself.
    CHECK(thm1_prefactor(s, 4.0, 1.0) == doctest::Approx(std::exp(kEulerGamma)).epsilon(1e-15));
    CHECK(thm1_prefactor(s, 4.0, 1.0) == doctest::Approx(1.78107).epsilon(1e-5));
    CHECK(thm1_prefactor(s, 0.3, 0.0) == 1.0);
    for (const auto& m : {make_sphere(0.8), make_torus(1.0, 2.0)}) {
      for (double m0 : {0.2, 1.0, 3.0}) {
        const double m1 = 1.7;
        CHECK(thm1_prefactor(m, m0, m1) == doctest::Approx(std::exp(m1 * gamma0(m0) * m.area / 2.0)).epsilon(1e-12));
      }
    }
    CHECK_THROWS_AS(thm1_prefactor(s, 0.0, 1.0), InvalidArgument);
  }

  TEST_CASE("phase-space residue") {
    CHECK(residue_phase_space(make_sphere(1.0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(residue_phase_space(make_torus(1.0, 2.0)) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
    for (const auto& m : {make_sphere(1.0), make_torus(1.0, 1.0), make_torus(1.0, 2.0)}) {
      const double fit = mainlemma_fit(m, 1.0, default_laurent_grid()).residue;
      CHECK(std::abs(fit - residue_phase_space(m)) < 1e-4);
      CHECK(std::abs(fit - m.weyl_density()) < 1e-4);
    }
  }

  TEST_CASE("polynomial extrapolation is exact on polynomials") {
    const std::vector<double> h{0.04, 0.01, 0.0025};
    std::vector<double> y;
    for (double x : h) y.push_back(3.0 - 2.0 * x + 5.0 * x * x);
    CHECK(extrapolate_to_zero(h, y) == doctest::Approx(3.0).epsilon(1e-13));
  }

  TEST_CASE("massless checks on the unit sphere") {
    const std::vector<double> seq{0.2, 0.1, 0.05};
    const auto r = verify_massless(make_sphere(1.0), 1.0, seq);
    REQUIRE(r.checks.size() == 3);
    CHECK(r.checks[0].pass);
    CHECK(r.checks[0].value == doctest::Approx(oracle::kSphereDetPrime).epsilon(1e-4));
    CHECK(r.checks[1].pass);
    CHECK(r.checks[1].rel_error < 1e-12);
    REQUIRE(!r.notes.empty());
    CHECK(r.notes[0].rfind("NOTE", 0) == 0);
    // The unhalved factor misses by exp(sigma gamma0 A / 2) - 1, far from zero.
    CHECK(prefactor_identity_residual(make_sphere(1.0), 1.0, 0.2, false) > 0.1);
  }

  TEST_CASE("massless continuity slope on the square torus") {
    const std::vector<double> seq{0.2, 0.1, 0.05};
    const auto r = verify_massless(make_torus(1.0, 1.0), 2.0, seq);
    CHECK(r.checks[2].pass);
    CHECK(r.checks[2].rel_error < 1e-2);
    CHECK(r.checks[2].reference == doctest::Approx(oracle::kSquareTorusFinitePartM2).epsilon(1e-3));
    CHECK(r.pass);
  }

  TEST_CASE("prefactor identity on random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> m0(0.01, 5.0), sigma(0.01, 5.0);
    for (const auto& m : {make_sphere(1.0), make_torus(1.0, 2.0)}) {
      for (int i = 0; i < 10; ++i) CHECK(prefactor_identity_residual(m, sigma(rng), m0(rng)) < 1e-12);
    }
  }

  TEST_CASE("massless preconditions") {
    const auto s = make_sphere(1.0);
    CHECK_THROWS_AS(verify_massless(s, 1.0, std::vector<double>{0.2, 0.1}), InvalidArgument);
    CHECK_THROWS_AS(verify_massless(s, 1.0, std::vector<double>{0.1, 0.2, 0.05}), InvalidArgument);
    CHECK_THROWS_AS(verify_massless(s, 0.0, std::vector<double>{0.2, 0.1, 0.05}), InvalidArgument);
    CHECK_THROWS_AS(verify_thm2(s, 0.0, 1.0), InvalidArgument);
  }
}
