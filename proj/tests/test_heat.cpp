#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "regdet/error.hpp"
#include "regdet/heat.hpp"
#include "regdet/special.hpp"

using namespace regdet;

TEST_SUITE("heat") {
  TEST_CASE("unit sphere trace at t = 1") {
    const auto r = heat_trace(make_sphere(1.0), 0.0, 1.0, 1e-12);
    CHECK(r.value == doctest::Approx(oracle::kSphereHeatT1).epsilon(1e-13));
    CHECK(r.error_bound < 1e-9);
    CHECK(r.tolerance_met);
    CHECK(r.method == "direct");
  }

  TEST_CASE("large t leaves the zero mode") {
    CHECK(heat_trace(make_sphere(1.0), 0.0, 60.0).value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(heat_trace(make_torus(1.0, 1.0), 0.0, 10.0).value == doctest::Approx(1.0).epsilon(1e-15));
  }

  TEST_CASE("square torus at small t is pure Weyl term") {
    const auto t = make_torus(1.0, 1.0);
    const auto r = heat_trace(t, 0.0, 0.01);
    CHECK(r.method == "image-sum");
    CHECK(std::abs(4.0 * kPi * 0.01 * r.value / t.area - 1.0) < 1e-10);
  }

  TEST_CASE("mass enters as an overall exponential") {
    const auto s = make_sphere(1.0);
    CHECK(heat_trace(s, 2.0, 0.3).value ==
          doctest::Approx(std::exp(-0.6) * heat_trace(s, 0.0, 0.3).value).epsilon(1e-14));
  }

  TEST_CASE("torus direct and image forms agree at t = 0.05") {
    for (const auto& m : {make_torus(1.0, 1.0), make_torus(1.0, 2.0)}) {
      const double d = heat_trace(m, 0.0, 0.05, 1e-14, HeatTraceMethod::Direct).value;
      const double p = heat_trace(m, 0.0, 0.05, 1e-14, HeatTraceMethod::ImageSum).value;
      CHECK(std::abs(d - p) < 1e-10);
    }
    CHECK_THROWS_AS(heat_trace(make_sphere(1.0), 0.0, 0.05, 1e-12, HeatTraceMethod::ImageSum), InvalidArgument);
  }

  TEST_CASE("heat trace preconditions") {
    const auto s = make_sphere(1.0);
    CHECK_THROWS_AS(heat_trace(s, 0.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(heat_trace(s, -1.0, 1.0), InvalidArgument);
    CHECK_THROWS_AS(heat_trace(s, 0.0, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS(heat_trace(s, 0.0, 1.0, 1e-2), InvalidArgument);
  }

  TEST_CASE("heat coefficients") {
    const auto c = heat_coeffs(make_sphere(1.0), 1.0);
    CHECK(c.a_minus1 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(c.a_0 == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    const auto t = heat_coeffs(make_torus(1.0, 1.0), 0.0);
    CHECK(t.a_minus1 == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-15));
    CHECK(t.a_0 == 0.0);
    for (const auto& m : {make_sphere(0.7), make_torus(1.0, 2.0)}) {
      CHECK(heat_coeffs(m, 2.0).a_0 - heat_coeffs(m, 0.0).a_0 ==
            doctest::Approx(-2.0 * m.area / (4.0 * kPi)).epsilon(1e-14));
    }
  }

  TEST_CASE("trace is positive, decreasing and log-convex") {
    for (const auto& m : {make_sphere(1.0), make_torus(1.0, 2.0)}) {
      std::vector<double> logs;
      double prev = INFINITY;
      for (int i = 0; i < 50; ++i) {
        const double t = 0.01 * std::pow(1.15, i);
        const double v = heat_trace(m, 0.5, t).value;
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
        logs.push_back(std::log(v));
      }
      // Equal steps in ln t are not equal steps in t; compare slopes instead.
      for (int i = 1; i + 1 < 50; ++i) {
        const double t0 = 0.01 * std::pow(1.15, i - 1), t1 = 0.01 * std::pow(1.15, i), t2 = 0.01 * std::pow(1.15, i + 1);
        const double s1 = (logs[i] - logs[i - 1]) / (t1 - t0);
        const double s2 = (logs[i + 1] - logs[i]) / (t2 - t1);
        CHECK(s2 >= s1 - 1e-9 * std::abs(s1));
      }
    }
  }

  TEST_CASE("remainder after the constant term is O(t) on a dyadic grid") {
    // Direct summation, independent of the small-t expansion used internally.
    const auto s = make_sphere(1.0);
    std::vector<double> ratio;
    for (int j = 3; j <= 12; ++j) {
      const double t = std::ldexp(1.0, -j);
      const double theta = heat_trace(s, 0.0, t, 1e-15).value;
      ratio.push_back((theta - 1.0 / t - 1.0 / 3.0) / t);
    }
    for (double r : ratio) CHECK(std::abs(r) < 1.0);
    // Pure power series: (ratio - 1/15) / t tends to 4/315, no t ln t drift.
    for (int j = 9; j <= 12; ++j) {
      const double t = std::ldexp(1.0, -j);
      CHECK((ratio[j - 3] - 1.0 / 15.0) / t == doctest::Approx(4.0 / 315.0).epsilon(2e-2));
    }
    for (const auto& m : {make_torus(1.0, 1.0), make_torus(1.0, 2.0)}) {
      for (int j = 4; j <= 12; ++j) {
        const double t = std::ldexp(1.0, -j) * 0.1;
        const LaplaceHeatTrace theta(m);
        CHECK(std::abs(theta.remainder(t) / t) < 1e-6);
      }
    }
  }

  TEST_CASE("sphere expansion matches direct summation across the switch") {
    const LaplaceHeatTrace theta(make_sphere(1.0));
    for (double t : {0.05, 0.15, 0.199, 0.201, 0.3}) {
      const double direct = heat_trace(make_sphere(1.0), 0.0, t, 1e-15).value;
      CHECK(theta.full(t) == doctest::Approx(direct).epsilon(1e-14));
    }
    const LaplaceHeatTrace big(make_sphere(3.0));
    CHECK(big.full(0.9) == doctest::Approx(heat_trace(make_sphere(3.0), 0.0, 0.9, 1e-15).value).epsilon(1e-14));
  }

  TEST_CASE("constant-term fit gives chi / 6") {
    const std::vector<double> grid{0.01, 0.015, 0.02, 0.025, 0.03, 0.04, 0.05, 0.06};
    CHECK(heat_constant_fit(make_sphere(1.0), grid) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(std::abs(heat_constant_fit(make_torus(1.0, 1.0), std::vector<double>{0.002, 0.003, 0.004, 0.005, 0.006})) <
          1e-8);
  }

  TEST_CASE("regularized heat integral against closed forms") {
    const auto s = heat_integral(make_sphere(1.0), 1.0);
    CHECK(s.value == doctest::Approx(oracle::kSphereFinitePartM1).epsilon(1e-11));
    CHECK(s.abs_error_bound <= 1e-8);
    CHECK(std::abs(s.value - oracle::kSphereFinitePartM1) <= s.abs_error_bound + 1e-13);
    CHECK(heat_integral(make_sphere(1.0), 2.0).value == doctest::Approx(oracle::kSphereFinitePartM2).epsilon(1e-11));
    CHECK(heat_integral(make_sphere(1.0), 4.0).value == doctest::Approx(oracle::kSphereFinitePartM4).epsilon(1e-11));
    CHECK(heat_integral(make_torus(1.0, 1.0), 1.0).value ==
          doctest::Approx(oracle::kSquareTorusFinitePartM1).epsilon(1e-11));
    CHECK(heat_integral(make_torus(1.0, 1.0), 2.0).value ==
          doctest::Approx(oracle::kSquareTorusFinitePartM2).epsilon(1e-11));
    CHECK(heat_integral(make_torus(1.0, 2.0), 1.0).value ==
          doctest::Approx(oracle::kOblongTorusFinitePartM1).epsilon(1e-11));
  }

  TEST_CASE("heat integral does not depend on the split points") {
    for (const auto& m : {make_sphere(1.0), make_torus(1.0, 2.0)}) {
      const auto base = heat_integral(m, 1.0);
      const auto& p = base.quadrature_profile;
      for (double f : {0.5, 2.0}) {
        HeatIntegralOptions o{p.t_lo * f, p.t_split * f, p.t_hi * f};
        const auto moved = heat_integral(m, 1.0, 1e-10, o);
        CHECK(std::abs(moved.value - base.value) <=
              moved.abs_error_bound + base.abs_error_bound + 1e-13 * std::abs(base.value));
      }
    }
  }

  TEST_CASE("heat integral preconditions") {
    try {
      heat_integral(make_sphere(1.0), 0.0);
      FAIL("expected rejection");
    } catch (const InvalidArgument& e) {
      CHECK(e.parameter() == "m2");
      CHECK(std::string(e.what()).find("massless") != std::string::npos);
    }
    CHECK_THROWS_AS(heat_integral(make_sphere(1.0), 1.0, 1e-3), InvalidArgument);
  }
}
