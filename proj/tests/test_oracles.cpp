#include <doctest.h>

#include "oracles.hpp"

TEST_SUITE("oracles") {
  TEST_CASE("Per coefficients of small cases") {
    const auto p = oracle::per_coefficients(2, 2, 0);  // c^2 + c
    REQUIRE(p.size() == 3);
    CHECK(p[0] == 0);
    CHECK(p[1] == 1);
    CHECK(p[2] == 1);
    const auto r = oracle::companion_roots(p);
    CHECK(std::abs(r[0]) < 1e-15);
    CHECK(std::abs(r[1] + 1.0) < 1e-12);
  }

  TEST_CASE("contour index of a linear map") {
    const std::vector<oracle::cplx> lin{0.0, 3.0};
    CHECK(std::abs(oracle::contour_index(lin, 0.0, 0.5) - 0.5) < 1e-12);
  }

  TEST_CASE("resultant count for the first center system") {
    // s = 0 and c^3/3 - c^3/2 = c: c = 0 or c^2 = -6.
    const auto r = oracle::centers_resultant(1, 1);
    CHECK(r.distinct == 3);
  }

  TEST_CASE("extended-precision Green function of z^2") {
    const std::vector<oracle::cplx> sq{0.0, 0.0, 1.0};
    CHECK(oracle::green_mpfr(sq, 10.0) == doctest::Approx(std::log(10.0)).epsilon(1e-14));
    CHECK(oracle::green_mpfr(sq, 0.5) == 0.0);
  }

  TEST_CASE("Green identity quadrature recovers a point mass") {
    auto lg = [](oracle::cplx z) { return std::log(std::abs(z)); };
    const double v = oracle::green_identity_bump(+lg, 0.1, 0.5, 32, 8, 4096);
    CHECK(v == doctest::Approx((1 - 0.04) * (1 - 0.04)).epsilon(1e-4));
  }
}
