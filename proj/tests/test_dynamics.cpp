#include <doctest.h>

#include <random>

#include "bifurlab/dynamics.hpp"
#include "bifurlab/error.hpp"
#include "oracles.hpp"

using namespace bifurlab;

namespace {

cplx random_point(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  return {u(rng), u(rng)};
}

MarkedPolynomial random_poly(std::mt19937_64& rng, int d, double radius) {
  std::vector<cplx> c;
  for (int i = 0; i < d - 2; ++i) c.push_back(random_point(rng, radius));
  return MarkedPolynomial(d, c, random_point(rng, radius));
}

}  // namespace

TEST_SUITE("dynamics") {
  TEST_CASE("derivative vanishes exactly at the marked critical points") {
    std::mt19937_64 rng(7);
    for (int d = 2; d <= 5; ++d) {
      const auto p = random_poly(rng, d, 2.0);
      for (cplx c : p.critical_points()) CHECK(std::abs(p.derivative(c)) < 1e-12);
      // Leading coefficient is 1/d, so P' is monic.
      CHECK(std::abs(p.coeffs().back() - 1.0 / d) < 1e-15);
      CHECK(std::abs(p(0.0) - std::pow(p.a(), d)) < 1e-12);
    }
  }

  TEST_CASE("coefficients agree with the antiderivative of the critical product") {
    std::mt19937_64 rng(8);
    const auto p = random_poly(rng, 4, 1.5);
    std::vector<cplx> roots{0.0};
    for (cplx c : p.crit_params()) roots.push_back(c);
    const auto prime = expand_roots(roots);
    for (std::size_t j = 1; j < p.coeffs().size(); ++j) {
      CHECK(std::abs(p.coeffs()[j] - prime[j - 1] / static_cast<double>(j)) < 1e-13);
    }
  }

  TEST_CASE("invalid degree is rejected") {
    CHECK_THROWS_AS(MarkedPolynomial(1, {}, 0.0), Error);
    CHECK_THROWS_AS(MarkedPolynomial(3, {}, 0.0), Error);
  }

  TEST_CASE("escape radius makes orbits grow") {
    std::mt19937_64 rng(9);
    for (int d = 2; d <= 4; ++d) {
      const auto p = random_poly(rng, d, 3.0);
      const double R = p.escape_radius();
      for (int i = 0; i < 200; ++i) {
        const cplx z = std::polar(R * (1.0 + i * 0.01), 0.37 * i);
        CHECK(std::abs(p(z)) > std::abs(z));
      }
    }
  }

  TEST_CASE("green_value matches the high-precision oracle") {
    std::mt19937_64 rng(10);
    for (int d = 2; d <= 4; ++d) {
      for (int t = 0; t < 40; ++t) {
        const auto p = random_poly(rng, d, 1.5);
        const cplx z = random_point(rng, 3.0);
        const auto g = green_value(p, z, 1e-12);
        if (g.status == GreenStatus::kUndecided) continue;
        const double ref = oracle::green_mpfr(p.coeffs(), z);
        CHECK(std::abs(g.value - ref) <= g.error_bound + 1e-12);
        CHECK(g.error_bound <= 1e-12);
      }
    }
  }

  TEST_CASE("green function of z^2/2 is log|z/2|") {
    const MarkedPolynomial q(2, {}, 0.0);
    const auto g = green_value(q, 1e6, 1e-13);
    CHECK(g.escaped());
    CHECK(g.value == doctest::Approx(std::log(1e6) - std::log(2.0)).epsilon(1e-13));
    const auto inside = green_value(q, 0.5, 1e-12);
    CHECK(inside.bounded());
    CHECK(inside.value == 0.0);
  }

  TEST_CASE("Boettcher coordinate conjugates P to z^d and has modulus exp(g)") {
    std::mt19937_64 rng(11);
    for (int d = 2; d <= 3; ++d) {
      for (int t = 0; t < 20; ++t) {
        const auto p = random_poly(rng, d, 1.0);
        const cplx z = std::polar(p.bottcher_radius() * 1.5, 6.28 * t / 20.0);
        const cplx phi = bottcher_value(p, z, 1e-12);
        const cplx phi2 = bottcher_value(p, p(z), 1e-12);
        CHECK(std::abs(phi2 - std::pow(phi, d)) / std::abs(std::pow(phi, d)) < 1e-9);
        const auto g = green_value(p, z, 1e-13);
        CHECK(std::log(std::abs(phi)) == doctest::Approx(g.value).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("Boettcher coordinate of z^2/2 is z/2") {
    const MarkedPolynomial q(2, {}, 0.0);
    const cplx phi = bottcher_value(q, cplx(3.0, 4.0), 1e-12);
    CHECK(std::abs(phi - cplx(1.5, 2.0)) < 1e-10);
  }

  TEST_CASE("Boettcher coordinate throws inside the filled Julia set") {
    const MarkedPolynomial q(2, {}, 0.0);
    CHECK_THROWS_AS(bottcher_value(q, 0.1, 1e-12), Error);
  }

  TEST_CASE("holomorphic index agrees with the contour integral") {
    std::mt19937_64 rng(12);
    for (int t = 0; t < 10; ++t) {
      const auto p = random_poly(rng, 3, 1.0);
      // Fixed points by Newton on P(z) - z from a few starts.
      for (int s = 0; s < 3; ++s) {
        cplx z = std::polar(2.0, 2.1 * s + 0.3 * t);
        for (int it = 0; it < 100; ++it) z -= (p(z) - z) / (p.derivative(z) - 1.0);
        if (std::abs(p(z) - z) > 1e-12) continue;
        const double mult = std::abs(p.derivative(z) - 1.0);
        if (mult < 1e-3) continue;
        const cplx idx = holomorphic_index(p, z);
        CHECK(std::abs(idx - 1.0 / (p.derivative(z) - 1.0)) < 1e-9);
        const double radius = std::min(0.1, 0.2 * mult / 10.0);
        CHECK(std::abs(idx - oracle::contour_index(p.coeffs(), z, radius)) < 1e-8);
      }
    }
  }

  TEST_CASE("holomorphic index of the multiplier-one fixed point") {
    const std::vector<cplx> douady{0.0, 1.0, 0.5, 1.0};
    CHECK(std::abs(holomorphic_index(douady, 0.0) - cplx(-4.0)) < 1e-12);
    CHECK(std::abs(oracle::contour_index(douady, 0.0, 0.1) - cplx(-4.0)) < 1e-10);
    CHECK_THROWS_AS(holomorphic_index(douady, 0.5), Error);
  }

  TEST_CASE("a priori constants") {
    CHECK(coefficient_constant(2) == doctest::Approx(1.5));
    CHECK(growth_constant(2) == doctest::Approx(std::log(8.0) + std::log(1.5)));
    CHECK(compactness_radius() == 8.0);
    CHECK(perturbation_bound(3, 0.01) < perturbation_bound(3, 0.1));
  }

  TEST_CASE("iterate records escape") {
    const MarkedPolynomial q(2, {}, 2.0);
    const auto orbit = iterate(q, 0.0, 50, q.escape_radius());
    REQUIRE(orbit.escaped_at.has_value());
    CHECK(orbit.points.front() == cplx(0.0));
    CHECK(std::abs(orbit.points.back()) > q.escape_radius());
  }
}
