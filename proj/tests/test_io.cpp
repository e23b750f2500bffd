#include <doctest.h>

#include <sstream>

#include "bifurlab/error.hpp"
#include "bifurlab//field_io.hpp"

using namespace bifurlab;

TEST_SUITE("io") {
  TEST_CASE("measure JSON lines round trip") {
    EmpiricalMeasure mu({{cplx(0.1, -0.2), 0.5}, {cplx(1e-300, 3.0), 0.125}});
    std::stringstream ss;
    write_measure_jsonl(ss, mu);
    const auto back = read_measure_jsonl(ss);
    REQUIRE(back.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(back.atoms()[i].point == mu.atoms()[i].point);
      CHECK(back.atoms()[i].weight == mu.atoms()[i].weight);
    }
  }

  TEST_CASE("malformed measure lines are rejected") {
    std::stringstream ss("{\"re\": 1, \"im\": 0}\n");
    CHECK_THROWS_AS(read_measure_jsonl(ss), Error);
  }

  TEST_CASE("binary grid round trip is exact") {
    GridField f{GridSpec{-1.5, 0.5, -1.0, 1.0, 3, 2}, {0.1, 0.2, std::nan(""), -4.0, 1e300, 0.0}};
    std::stringstream ss;
    write_grid_binary(ss, f);
    CHECK(ss.str().size() == 4 * 8 + 2 * 8 + 6 * 8);
    const auto back = read_grid_binary(ss);
    CHECK(back.grid.nx == 3);
    CHECK(back.grid.ny == 2);
    CHECK(back.grid.x0 == -1.5);
    CHECK(std::isnan(back.values[2]));
    CHECK(back.values[4] == 1e300);
    CHECK(back.flagged_count() == 1);
  }

  TEST_CASE("truncated grid is an IO error") {
    GridField f{GridSpec{0, 1, 0, 1, 2, 2}, {1, 2, 3, 4}};
    std::stringstream ss;
    write_grid_binary(ss, f);
    std::string s = ss.str();
    s.resize(s.size() - 3);
    std::stringstream cut(s);
    try {
      read_grid_binary(cut);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kIo);
    }
  }

  TEST_CASE("PGM layout") {
    GridField f{GridSpec{0, 1, 0, 1, 2, 2}, {0.0, 1.0, 2.0, 3.0}};
    std::stringstream ss;
    write_pgm(ss, f, GrayMap{0.0, 3.0});
    std::string magic, comment;
    std::getline(ss, magic);
    std::getline(ss, comment);
    CHECK(magic == "P5");
    CHECK(comment.rfind("# value = 0 + 3 * gray / 255", 0) == 0);
    int w, h, maxv;
    ss >> w >> h >> maxv;
    ss.get();
    CHECK(w == 2);
    CHECK(h == 2);
    CHECK(maxv == 255);
    unsigned char px[4];
    ss.read(reinterpret_cast<char*>(px), 4);
    // Top row is y1, which holds the values 2 and 3.
    CHECK(px[0] == 170);
    CHECK(px[1] == 255);
    CHECK(px[2] == 0);
    CHECK(px[3] == 85);
  }

  TEST_CASE("automatic gray map spans the finite values") {
    GridField f{GridSpec{0, 1, 0, 1, 2, 2}, {-1.0, std::nan(""), 4.0, 2.0}};
    const auto m = auto_gray_map(f);
    CHECK(m.lo == -1.0);
    CHECK(m.hi == 4.0);
  }
}
