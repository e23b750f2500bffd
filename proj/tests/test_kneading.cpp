#include <doctest.h>

#include <random>

#include "bifurlab/error.hpp"
#include "bifurlab//kneading.hpp"
#include "oracles.hpp"

using namespace bifurlab;

namespace {

std::string digits_of(const KneadingResult& r) {
  std::string s;
  for (int x : r.digits) s += static_cast<char>('0' + x);
  return s;
}

bool covered(const CylinderCover& cover, const mpq_class& x) {
  for (const Arc& a : cover.intervals)
    if (x > a.lo && x < a.hi) return true;
  return false;
}

}  // namespace

TEST_SUITE("kneading") {
  TEST_CASE("hand-computed itineraries") {
    // 1/7 under tripling: 3/7, 2/7, 6/7, 4/7, 5/7, 1/7; arc (1/7, 10/21).
    const auto r = kneading(Angle::exact(1, 7), 3, 1, 8);
    CHECK(digits_of(r) == "00111");
    REQUIRE(r.boundary_hit_at.has_value());
    CHECK(*r.boundary_hit_at == 6);
    // 1/4 under tripling: 3/4, 1/4; 3/4 is outside (1/4, 7/12).
    const auto q = kneading(Angle::exact(1, 4), 3, 1, 8);
    CHECK(digits_of(q) == "1");
    CHECK(*q.boundary_hit_at == 2);
    // 0.1 = 1/10: 3/10 and 9/10, then 7/10, 1/10 in (1/10, 13/30).
    const auto t = kneading(Angle::exact(1, 10), 3, 1, 3);
    CHECK(digits_of(t) == "011");
    CHECK_FALSE(t.boundary_hit_at.has_value());
  }

  TEST_CASE("itineraries agree with direct rational iteration") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> den(2, 5000);
    for (int i = 0; i < 10000; ++i) {
      const long q = den(rng);
      const long p = std::uniform_int_distribution<long>(0, q - 1)(rng);
      mpq_class a(p, q);
      a.canonicalize();
      for (auto [d, k] : {std::pair{3, 1}, {4, 1}, {5, 2}}) {
        const auto lib = kneading(Angle::exact(a), d, k, 12);
        const auto ref = oracle::kneading_direct(a, d, k, 12);
        CHECK(digits_of(lib) == ref.first);
        CHECK(lib.boundary_hit_at.value_or(0) == ref.second);
      }
    }
  }

  TEST_CASE("cylinder covers contain exactly the angles with that itinerary") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> den(2, 100000);
    int tested = 0;
    for (int i = 0; i < 10000; ++i) {
      const long q = den(rng);
      const long p = std::uniform_int_distribution<long>(0, q - 1)(rng);
      mpq_class a(p, q);
      a.canonicalize();
      const auto ref = oracle::kneading_direct(a, 3, 1, 6);
      if (ref.second != 0) continue;
      ++tested;
      CHECK(covered(cylinder_cover(ref.first, 3, 1), a));
      std::string other = ref.first;
      other[5] = other[5] == '0' ? '1' : '0';
      CHECK_FALSE(covered(cylinder_cover(other, 3, 1), a));
    }
    CHECK(tested > 9000);
  }

  TEST_CASE("first-level covers") {
    const auto c0 = cylinder_cover("0", 3, 1);
    // 2 alpha mod 1 in (0, 1/3): alpha in (0, 1/6) or (1/2, 2/3).
    REQUIRE(c0.count == 2);
    CHECK(c0.intervals[0].lo == 0);
    CHECK(c0.intervals[0].hi == mpq_class(1, 6));
    CHECK(c0.intervals[1].lo == mpq_class(1, 2));
    CHECK(c0.intervals[1].hi == mpq_class(2, 3));
    CHECK(cylinder_cover("", 3, 1).count == 1);
  }

  TEST_CASE("argument checks") {
    CHECK_THROWS_AS(cylinder_cover("01", 2, 1), Error);
    CHECK_THROWS_AS(cylinder_cover("02", 3, 1), Error);
    CHECK_THROWS_AS(cylinder_cover(std::string(20, '0'), 3, 1), Error);
    CHECK_THROWS_AS(kneading(Angle::real(0.3), 3, 1, 4), Error);
  }

  TEST_CASE("counting report at small depth") {
    const auto rep = verify_counting_bound(3, 1, 6);
    CHECK(rep.recursion_ok);
    CHECK(rep.lengths_ok);
    CHECK(rep.levels.size() == 6);
    // Level-n covers partition the circle up to finitely many points.
    for (const auto& L : rep.levels) CHECK(L.total_length == 1);
  }
}
