#include <doctest.h>

#include <random>

#include "bifurlab/error.hpp"
#include "bifurlab//rays.hpp"
#include "oracles.hpp"

using namespace bifurlab;

namespace {

CriticalPortrait portrait(std::vector<std::vector<std::pair<long, long>>> sets) {
  CriticalPortrait out;
  for (auto& s : sets) {
    AngleSet a;
    for (auto [p, q] : s) a.push_back(Angle::exact(p, q));
    out.sets.push_back(a);
  }
  return out;
}

CriticalPortrait negated(const CriticalPortrait& t) {
  CriticalPortrait out;
  for (const auto& s : t.sets) {
    AngleSet a;
    for (const Angle& x : s) a.push_back(Angle::exact(-x.rational()));
    out.sets.push_back(a);
  }
  return out;
}

}  // namespace

TEST_SUITE("rays") {
  TEST_CASE("rays of z^2/2 are radial") {
    const MarkedPolynomial q(2, {}, 0.0);
    const auto ray = trace_dynamical_ray(q, Angle::exact(0, 1), 4.0, 0.01, 30);
    CHECK_FALSE(ray.truncated);
    REQUIRE(ray.points.size() == 30);
    for (const auto& pt : ray.points) {
      CHECK(std::abs(pt.point - 2.0 * std::exp(pt.r)) < 1e-9 * std::exp(pt.r));
    }
    const auto left = trace_dynamical_ray(q, Angle::exact(1, 2), 2.0, 0.1, 10);
    for (const auto& pt : left.points) {
      CHECK(pt.point.real() < 0);
      CHECK(std::abs(pt.point.imag()) < 1e-9);
    }
  }

  TEST_CASE("rays lie on their equipotentials and map to the image ray") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    const MarkedPolynomial p(3, {cplx(u(rng), u(rng))}, cplx(u(rng), u(rng)));
    const Angle alpha = Angle::exact(2, 13);
    const auto ray = trace_dynamical_ray(p, alpha, 3.0, 0.02, 40);
    const auto image = trace_dynamical_ray(p, alpha.times(3), 9.0, 0.06, 40);
    CHECK_FALSE(ray.truncated);
    for (const auto& pt : ray.points) {
      const double g = oracle::green_mpfr(p.coeffs(), pt.point);
      CHECK(g == doctest::Approx(pt.r).epsilon(1e-8));
    }
    const auto defect = doubling_defect(p, ray, image);
    REQUIRE(defect.has_value());
    CHECK(*defect <= 1e-8);
  }

  TEST_CASE("rays of distinct angles stay apart near a critical point") {
    // The two preimages of angle 0 under tripling nearest 1/3 apart.
    const MarkedPolynomial p(3, {cplx(0.3, 0.1)}, cplx(0.5, 0.2));
    const auto r1 = trace_dynamical_ray(p, Angle::exact(1, 9), 2.0, 0.05, 20);
    const auto r2 = trace_dynamical_ray(p, Angle::exact(4, 9), 2.0, 0.05, 20);
    CHECK(std::abs(r1.points.back().point - r2.points.back().point) > 1e-3);
  }

  TEST_CASE("quadratic Goldberg solution for Theta = {0, 1/2} is real positive") {
    const auto g = goldberg_solve(portrait({{{0, 1}, {1, 2}}}), 0.3, 2, 1e-12);
    REQUIRE(g.converged);
    CHECK(std::abs(g.point.a.imag()) < 1e-12);
    CHECK(g.point.a.real() > 0);
    // The critical value a^2 lies on the parameter ray of angle 0 in the
    // conjugate quadratic family.
    const cplx c = to_unicritical(g.point);
    CHECK(oracle::mandelbrot_potential(c) == doctest::Approx(2 * 0.3).epsilon(1e-9));
  }

  TEST_CASE("Goldberg solutions match critical Green values and arguments") {
    for (int d = 2; d <= 3; ++d) {
      for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto theta = sample_cb0(d, seed);
        const double r = 0.05 + 0.1 * static_cast<double>(seed);
        const auto g = goldberg_solve(theta, r, d, 1e-12);
        REQUIRE(g.converged);
        const auto poly = g.point.polynomial();
        const auto crit = poly.critical_points();
        for (int i = 0; i < d - 1; ++i) {
          CHECK(oracle::green_mpfr(poly.coeffs(), crit[i]) == doctest::Approx(r).epsilon(1e-9));
          const cplx v = poly(crit[i]);
          const cplx phi = bottcher_value(poly, v, 1e-12);
          const double arg = std::arg(phi) / kTwoPi;
          double want = theta.sets[i][0].times(d).value();
          double diff = std::remainder(arg - want, 1.0);
          CHECK(std::abs(diff) < 1e-8);
        }
      }
    }
  }

  TEST_CASE("complex conjugation symmetry") {
    const auto t = portrait({{{1, 9}, {4, 9}}, {{5, 9}, {8, 9}}});
    const auto g = goldberg_solve(t, 0.4, 3, 1e-12);
    const auto h = goldberg_solve(negated(t), 0.4, 3, 1e-12);
    REQUIRE(g.converged);
    REQUIRE(h.converged);
    ParamPoint conj = g.point;
    for (auto& c : conj.c) c = std::conj(c);
    conj.a = std::conj(conj.a);
    CHECK(are_equivalent(conj, h.point, 1e-9));
  }

  TEST_CASE("Goldberg solutions depend continuously on the angles") {
    const auto t1 = portrait({{{1, 10}, {3, 5}}});
    const auto t2 = portrait({{{1001, 10000}, {6001, 10000}}});
    const auto g1 = goldberg_solve(t1, 0.2, 2, 1e-12);
    const auto g2 = goldberg_solve(t2, 0.2, 2, 1e-12);
    CHECK(std::abs(g1.point.a - g2.point.a) < 0.01);
  }

  TEST_CASE("inputs outside the supported range are rejected") {
    CHECK_THROWS_AS(goldberg_solve(sample_cb0(4, 1), 0.5, 4, 1e-10), Error);
    CHECK_THROWS_AS(goldberg_solve(portrait({{{0, 1}, {1, 3}}}), 0.5, 2, 1e-10), Error);
    CHECK_THROWS_AS(goldberg_solve(sample_cb0(2, 1), -1.0, 2, 1e-10), Error);
  }

  TEST_CASE("schedule") {
    const auto s = geometric_schedule(1.0, 0.01, 0.5);
    CHECK(s.front() == 1.0);
    CHECK(s.back() <= 0.01);
    CHECK(s.size() == 8);
  }
}
