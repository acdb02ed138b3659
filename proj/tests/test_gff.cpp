#include <doctest.h>

#include <cmath>
#include <vector>

#include "regdet/error.hpp"
#include "regdet/gff.hpp"
#include "regdet/green.hpp"
#include "regdet/summation.hpp"

using namespace regdet;

TEST_SUITE("gff") {
  TEST_CASE("mode set flattens multiplicities") {
    const auto modes = make_modes(make_sphere(1.0), 42.0);
    CHECK(modes.size() == 49);
    CHECK(modes.lines.size() == 7);
    CHECK_THROWS_AS(make_modes(make_sphere(1.0), 1.0), InvalidArgument);
  }

  TEST_CASE("per-mode variance matches 1 / (m^2 + lambda)") {
    const auto modes = make_modes(make_sphere(1.0), 6.0);
    const std::size_t n = 100000;
    const auto samples = sample_fields(modes, 1.0, 123, n);
    for (std::size_t k = 0; k < modes.size(); ++k) {
      double s2 = 0.0, s4 = 0.0;
      for (const auto& s : samples) {
        const double p2 = s.phi[k] * s.phi[k];
        s2 += p2;
        s4 += p2 * p2;
      }
      const double mean = s2 / n;
      const double se = std::sqrt((s4 / n - mean * mean) / n);
      CHECK(std::abs(mean - 1.0 / (1.0 + modes.eigenvalues[k])) < 4.0 * se);
    }
  }

  TEST_CASE("sampling is reproducible and independent of worker count") {
    const auto modes = make_modes(make_torus(1.0, 1.0), 80.0);
    const unsigned saved = worker_count();
    set_worker_count(1);
    const auto a = sample_fields(modes, 2.0, 99, 5000, 1000);
    set_worker_count(4);
    const auto b = sample_fields(modes, 2.0, 99, 5000, 1000);
    set_worker_count(saved);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].phi == b[i].phi);
      CHECK(a[i].chunk == i / 1000);
      CHECK(a[i].index == i);
    }
    const auto c = sample_fields(modes, 2.0, 100, 10, 1000);
    CHECK(c[0].phi != a[0].phi);
  }

  TEST_CASE("massless sampling is refused") {
    const auto modes = make_modes(make_sphere(1.0), 6.0);
    CHECK_THROWS_AS(sample_fields(modes, 0.0, 1, 10), InvalidArgument);
  }

  TEST_CASE("Wick-ordered mass term") {
    const auto modes = make_modes(make_sphere(1.0), 2.0);
    FieldSample zero;
    zero.phi.assign(modes.size(), 0.0);
    // Only the zero mode: W_C = -1 / m0^2.
    const double w = wick_mass_term(modes, zero, 1.0, WickOrdering::C);
    CHECK(w == doctest::Approx(-1.0 - 3.0 / 3.0).epsilon(1e-15));
    const double shift = wick_c0_shift(modes.model, 1.0);
    CHECK(shift == doctest::Approx(modes.model.area * cf_mean(modes.model, 1.0).cf_mean).epsilon(1e-15));
    CHECK(wick_mass_term(modes, zero, 1.0, WickOrdering::C0) - w == doctest::Approx(shift).epsilon(1e-14));
  }

  TEST_CASE("Wick term has mean zero under its own measure") {
    const auto modes = make_modes(make_sphere(1.0), 20.0);
    const std::size_t n = 50000;
    const auto samples = sample_fields(modes, 1.0, 5, n);
    double s = 0.0, s2 = 0.0;
    for (const auto& x : samples) {
      const double w = wick_mass_term(modes, x, 1.0, WickOrdering::C);
      s += w;
      s2 += w * w;
    }
    const double mean = s / n;
    const double se = std::sqrt((s2 / n - mean * mean) / n);
    CHECK(std::abs(mean) < 4.0 * se);
  }

  TEST_CASE("heat-smoothed Wick term") {
    const auto modes = make_modes(make_sphere(1.0), 42.0);
    const auto samples = sample_fields(modes, 1.0, 17, 100);
    for (const auto& x : samples) {
      CHECK(smoothed_wick(modes, x, 1.0, 0.0) == doctest::Approx(wick_mass_term(modes, x, 1.0, WickOrdering::C)).epsilon(1e-14));
      CHECK(smoothed_wick(modes, x, 1.0, 1e3) == doctest::Approx(x.phi[0] * x.phi[0] - 1.0).epsilon(1e-14));
      double spread = 0.0;
      for (std::size_t k = 0; k < modes.size(); ++k) spread += std::abs(x.phi[k] * x.phi[k] - 1.0 / (1.0 + modes.eigenvalues[k]));
      const double t = 1e-4;
      CHECK(std::abs(smoothed_wick(modes, x, 1.0, t) - smoothed_wick(modes, x, 1.0, 0.0)) <= 2.0 * t * 42.0 * spread + 1e-15);
    }
    CHECK_THROWS_AS(smoothed_wick(modes, samples[0], 1.0, -1.0), InvalidArgument);
  }

  TEST_CASE("measure identity without a mass shift is exact") {
    const auto r = verify_measure_identity(make_sphere(1.0), 1.0, 0.0, 42.0, 1000, 3);
    CHECK(r.estimate.mean == 1.0);
    CHECK(r.estimate.target == 1.0);
    CHECK(r.estimate.z_score == 0.0);
  }

  TEST_CASE("measure identity by Monte Carlo, small run") {
    const auto r = verify_measure_identity(make_sphere(1.0), 1.0, 1.0, 42.0, 200000, 2024);
    CHECK(r.modes == 49);
    CHECK(std::abs(r.estimate.z_score) < 3.0);
    CHECK(r.target_mismatch < 1e-12);
    CHECK(std::abs(r.reweighted_variance[0].mean - 0.5) < 4.0 * r.reweighted_variance[0].std_error);
    CHECK(r.reweighted_variance[0].target == 0.5);
  }

  TEST_CASE("measure identity estimate depends only on seed and chunk size") {
    const unsigned saved = worker_count();
    set_worker_count(1);
    const auto a = verify_measure_identity(make_torus(1.0, 1.0), 1.0, 0.8, 80.0, 20000, 77, 1024);
    set_worker_count(3);
    const auto b = verify_measure_identity(make_torus(1.0, 1.0), 1.0, 0.8, 80.0, 20000, 77, 1024);
    set_worker_count(saved);
    CHECK(a.estimate.mean == b.estimate.mean);
    CHECK(a.estimate.std_error == b.estimate.std_error);
  }
}
