#include <doctest.h>

#include <cmath>
#include <numbers>

#include "generators.hpp"
#include "leafcurrent/quadrature.hpp"

using namespace leafcurrent;

TEST_SUITE("quadrature") {
  TEST_CASE("finite and semi-infinite integrals of elementary functions") {
    const QuadratureSpec q;
    CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, q).value ==
          doctest::Approx(2.0).epsilon(1e-12));
    const QuadResult g = integrate([](double x) { return std::exp(-x * x); }, 0.0, kInfinity, q);
    CHECK(g.ok());
    CHECK(g.value == doctest::Approx(std::sqrt(std::numbers::pi) / 2).epsilon(1e-10));
    CHECK(integrate([](double x) { return 1.0 / (1.0 + x * x); }, 0.0, kInfinity, q).value ==
          doctest::Approx(std::numbers::pi / 2).epsilon(1e-10));
  }

  TEST_CASE("empty and reversed intervals integrate to zero") {
    const QuadratureSpec q;
    CHECK(integrate([](double) { return 1.0; }, 1.0, 1.0, q).value == 0.0);
    CHECK(integrate([](double) { return 1.0; }, 2.0, 1.0, q).value == 0.0);
  }

  TEST_CASE("property: pieces add up to the whole, duplicates skipped") {
    gen::Rng rng(11);
    const QuadratureSpec q;
    for (int k = 0; k < 50; ++k) {
      const double c = rng.uniform(0.1, 5.0);
      const double lo = rng.uniform(-2.0, 0.0), hi = rng.uniform(0.5, 3.0);
      const double mid = rng.uniform(lo, hi);
      auto f = [c](double x) { return std::exp(-c * x * x); };
      const double pts[] = {lo, mid, mid, hi};
      const QuadResult whole = integrate(f, lo, hi, q);
      const QuadResult pieces = integrate_pieces(f, pts, q);
      INFO("seed 11 draw " << k);
      CHECK(pieces.ok());
      CHECK(pieces.value == doctest::Approx(whole.value).epsilon(1e-11));
      // Closed form through erf.
      const double exact =
          std::sqrt(std::numbers::pi / c) / 2 * (std::erf(std::sqrt(c) * hi) - std::erf(std::sqrt(c) * lo));
      CHECK(pieces.value == doctest::Approx(exact).epsilon(1e-10));
    }
  }

  TEST_CASE("a subdivision-starved integral reports failure with its partial value") {
    QuadratureSpec q;
    q.max_subdivisions = 2;
    q.tol_rel = 1e-14;
    q.tol_abs = 1e-300;
    const QuadResult r = integrate([](double x) { return std::sin(50.0 * x) * std::sin(50.0 * x); }, 0.0, 10.0, q);
    CHECK_FALSE(r.ok());
    CHECK_THROWS_AS(require_converged(r, "starved"), QuadratureFailure);
    try {
      require_converged(r, "starved");
    } catch (const QuadratureFailure& e) {
      CHECK(e.partial().value == r.value);
    }
  }

  TEST_CASE("spec validation and nesting") {
    QuadratureSpec q;
    CHECK_NOTHROW(q.validate());
    q.tol_rel = -1.0;
    CHECK_THROWS_AS(q.validate(), std::invalid_argument);
    const QuadratureSpec inner = QuadratureSpec{}.inner();
    CHECK(inner.tol_rel == doctest::Approx(1e-9));
    CHECK(QuadratureSpec{}.inner(1e-9).tol_rel >= 1e-13);
    CHECK(QuadratureSpec{}.scaled(0.1).tol_abs == doctest::Approx(1e-13));
  }

  TEST_CASE("nested error tracker keeps the worst relative error above the floor") {
    NestedErrorTracker t(1e-10);
    t.record({1.0, 1e-9, QuadStatus::Ok});
    t.record({2.0, 1e-7, QuadStatus::Ok});
    t.record({1e-12, 1e-12, QuadStatus::Ok});  // at the floor: ignored
    CHECK(t.worst_relative() == doctest::Approx(5e-8));
    CHECK(t.failures() == 0);
    t.record({1.0, 1.0, QuadStatus::MaxSubdivisions});
    CHECK(t.failures() == 1);
    CHECK(t.calls() == 4);
  }
}
