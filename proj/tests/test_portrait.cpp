#include <doctest.h>

#include "bifurlab/error.hpp"
#include "bifurlab/portrait.hpp"

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

}  // namespace

TEST_SUITE("portrait") {
  TEST_CASE("angle arithmetic is exact modulo one") {
    const Angle a = Angle::parse("5/6");
    CHECK(a.is_exact());
    CHECK(a.times(2) == Angle::exact(2, 3));
    CHECK(a.plus(mpq_class(1, 3)) == Angle::exact(1, 6));
    CHECK(Angle::exact(-1, 4) == Angle::exact(3, 4));
    CHECK(Angle::parse("0.25").value() == 0.25);
    CHECK_FALSE(Angle::parse("0.25").is_exact());
    CHECK(Angle::exact(2, 4).to_string() == "1/2");
    CHECK_THROWS_AS(Angle::parse("1/0"), Error);
  }

  TEST_CASE("quadratic portraits") {
    const auto ok = validate_portrait(portrait({{{1, 6}, {2, 3}}}), 2);
    CHECK(ok.valid);
    CHECK(ok.in_cb0);
    const auto bad = validate_portrait(portrait({{{0, 1}, {1, 3}}}), 2);
    CHECK_FALSE(bad.valid);
    CHECK_FALSE(bad.same_image);
  }

  TEST_CASE("cubic portraits: unlinked versus linked") {
    const auto ok = validate_portrait(portrait({{{0, 1}, {1, 3}}, {{1, 2}, {5, 6}}}), 3);
    CHECK(ok.valid);
    CHECK(ok.in_cb0);
    CHECK(ok.union_size == 4);
    const auto linked = validate_portrait(portrait({{{0, 1}, {1, 3}}, {{1, 6}, {1, 2}}}), 3);
    CHECK_FALSE(linked.valid);
    CHECK_FALSE(linked.unlinked);
    // A double critical point: both marked points share one triple.
    const auto dbl = validate_portrait(portrait({{{0, 1}, {1, 3}, {2, 3}}, {{0, 1}, {1, 3}, {2, 3}}}), 3);
    CHECK(dbl.valid);
    CHECK_FALSE(dbl.in_cb0);
  }

  TEST_CASE("unlinked predicate") {
    const AngleSet a{Angle::exact(0, 1), Angle::exact(1, 2)};
    CHECK(is_unlinked(a, {Angle::exact(1, 8), Angle::exact(3, 8)}));
    CHECK_FALSE(is_unlinked(a, {Angle::exact(1, 8), Angle::exact(5, 8)}));
  }

  TEST_CASE("sampler is deterministic and lands in Cb0") {
    for (int d = 2; d <= 4; ++d) {
      for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto t = sample_cb0(d, seed);
        CHECK(t.sets.size() == static_cast<std::size_t>(d - 1));
        CHECK(validate_portrait(t, d).in_cb0);
        CHECK(t.to_json() == sample_cb0(d, seed).to_json());
      }
    }
  }

  TEST_CASE("acceptance rate is stable across seeds") {
    const double r1 = cb0_acceptance_rate(3, 1, 100000);
    const double r2 = cb0_acceptance_rate(3, 2, 100000);
    CHECK(std::abs(r1 - r2) < 0.02 * r1);
  }

  TEST_CASE("JSON round trip") {
    const auto t = portrait({{{0, 1}, {1, 3}}, {{1, 2}, {5, 6}}});
    const auto back = CriticalPortrait::from_json(t.to_json());
    CHECK(back.to_json() == t.to_json());
  }

  TEST_CASE("leaf action is a left action") {
    const LeafPoint x{portrait({{{1, 6}, {2, 3}}}), mpq_class(1, 2)};
    const LeafElement u1{mpq_class(2), mpq_class(1, 5)};
    const LeafElement u2{mpq_class(1, 3), mpq_class(-3, 7)};
    const auto lhs = leaf_action(leaf_compose(u1, u2), x);
    const auto rhs = leaf_action(u1, leaf_action(u2, x));
    CHECK(lhs.r == rhs.r);
    CHECK(lhs.theta.to_json() == rhs.theta.to_json());
    const auto moved = leaf_action(LeafElement{mpq_class(1), mpq_class(1)}, x);
    // Shifting by r t = 1/2 swaps the two angles of {1/6, 2/3}.
    CHECK(normalized(moved.theta.sets[0]) == normalized(x.theta.sets[0]));
    CHECK(moved.r == x.r);
  }

  TEST_CASE("gluing and preperiodicity") {
    const auto glued = portrait_glue(portrait({{{0, 1}, {1, 3}}, {{1, 3}, {2, 3}}}));
    CHECK(glued.sets[0].size() == 3);
    CHECK(glued.sets[1].size() == 3);
    CHECK(strictly_preperiodic(Angle::exact(1, 6), 2));
    CHECK_FALSE(strictly_preperiodic(Angle::exact(1, 3), 2));
    CHECK_FALSE(misiurewicz_portrait(portrait({{{1, 6}, {2, 3}}}), 2));
    CHECK(misiurewicz_portrait(portrait({{{1, 12}, {7, 12}}}), 2));
  }
}
