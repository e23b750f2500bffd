#include "bifurlab/field_io.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "bifurlab/error.hpp"

namespace bifurlab {

namespace {

template <class T>
void put_le(std::ostream& os, T value) {
  static_assert(sizeof(T) == 8);
  std::uint64_t bits;
  std::memcpy(&bits, &value, 8);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(bits >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), 8);
}

template <class T>
T get_le(std::istream& is) {
  unsigned char buf[8];
  if (!is.read(reinterpret_cast<char*>(buf), 8)) fail(ErrorKind::kIo, "truncated grid file");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  T value;
  std::memcpy(&value, &bits, 8);
  return value;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::kIo, "cannot open " + path + " for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::kIo, "cannot open " + path);
  return is;
}

}  // namespace

void write_measure_jsonl(std::ostream& os, const EmpiricalMeasure& mu) {
  for (const Atom& a : mu.atoms()) {
    nlohmann::json j{{"re", a.point.real()}, {"im", a.point.imag()}, {"weight", a.weight}};
    os << j.dump() << '\n';
  }
}

EmpiricalMeasure read_measure_jsonl(std::istream& is) {
  EmpiricalMeasure mu;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      mu.add({j.at("re").get<double>(), j.at("im").get<double>()}, j.at("weight").get<double>());
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::kIo, "bad measure line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return mu;
}

void write_grid_binary(std::ostream& os, const GridField& field) {
  const GridSpec& g = field.grid;
  require(field.values.size() == g.size(), "field does not match its grid");
  put_le(os, g.x0);
  put_le(os, g.x1);
  put_le(os, g.y0);
  put_le(os, g.y1);
  put_le(os, g.nx);
  put_le(os, g.ny);
  for (double v : field.values) put_le(os, v);
  if (!os) fail(ErrorKind::kIo, "grid write failed");
}

GridField read_grid_binary(std::istream& is) {
  GridField f;
  f.grid.x0 = get_le<double>(is);
  f.grid.x1 = get_le<double>(is);
  f.grid.y0 = get_le<double>(is);
  f.grid.y1 = get_le<double>(is);
  f.grid.nx = get_le<std::int64_t>(is);
  f.grid.ny = get_le<std::int64_t>(is);
  if (f.grid.nx < 2 || f.grid.ny < 2 || f.grid.nx > (1 << 20) || f.grid.ny > (1 << 20)) {
    fail(ErrorKind::kIo, "grid header has an invalid resolution");
  }
  f.values.resize(f.grid.size());
  for (double& v : f.values) v = get_le<double>(is);
  return f;
}

GrayMap auto_gray_map(const GridField& field) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : field.values) {
    if (!std::isfinite(v)) continue;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo <= hi)) return {};
  if (hi == lo) hi = lo + 1.0;
  return {lo, hi};
}

void write_pgm(std::ostream& os, const GridField& field, const GrayMap& map) {
  const GridSpec& g = field.grid;
  require(map.hi > map.lo, "gray map needs hi > lo");
  require(field.values.size() == g.size(), "field does not match its grid");
  std::ostringstream comment;
  comment << std::setprecision(17) << "# value = " << map.lo << " + " << (map.hi - map.lo)
          << " * gray / 255; non-finite -> 0; rows y1 to y0; x in [" << g.x0 << ", " << g.x1
          << "], y in [" << g.y0 << ", " << g.y1 << "]";
  os << "P5\n" << comment.str() << '\n' << g.nx << ' ' << g.ny << "\n255\n";
  std::string row(static_cast<std::size_t>(g.nx), '\0');
  for (std::int64_t j = g.ny - 1; j >= 0; --j) {
    for (std::int64_t i = 0; i < g.nx; ++i) {
      const double v = field.at(i, j);
      int gray = 0;
      if (std::isfinite(v)) {
        gray = static_cast<int>(std::lround(255.0 * (v - map.lo) / (map.hi - map.lo)));
        gray = std::clamp(gray, 0, 255);
      }
      row[i] = static_cast<char>(gray);
    }
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
  if (!os) fail(ErrorKind::kIo, "pgm write failed");
}

void save_grid_binary(const std::string& path, const GridField& field) {
  auto os = open_out(path);
  write_grid_binary(os, field);
}

GridField load_grid_binary(const std::string& path) {
  auto is = open_in(path);
  return read_grid_binary(is);
}

void save_pgm(const std::string& path, const GridField& field, const GrayMap& map) {
  auto os = open_out(path);
  write_pgm(os, field, map);
}

void save_measure_jsonl(const std::string& path, const EmpiricalMeasure& mu) {
  auto os = open_out(path);
  write_measure_jsonl(os, mu);
}

EmpiricalMeasure load_measure_jsonl(const std::string& path) {
  auto is = open_in(path);
  return read_measure_jsonl(is);
}

}  // namespace bifurlab
