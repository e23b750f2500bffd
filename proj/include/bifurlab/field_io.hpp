#pragma once

#include <iosfwd>
#include <string>

#include "bifurlab/measure.hpp"

namespace bifurlab {

/// One atom per line: {"re": .., "im": .., "weight": ..}.
void write_measure_jsonl(std::ostream& os, const EmpiricalMeasure& mu);
EmpiricalMeasure read_measure_jsonl(std::istream& is);

/// Little-endian layout: float64 x0, x1, y0, y1; int64 nx, ny; then nx*ny
/// float64 values row by row (rows of constant y, y0 first).
void write_grid_binary(std::ostream& os, const GridField& field);
GridField read_grid_binary(std::istream& is);

/// Affine value-to-gray map: gray = round(255 (v - lo) / (hi - lo)), clamped.
struct GrayMap {
  double lo = 0.0;
  double hi = 1.0;
};
GrayMap auto_gray_map(const GridField& field);

/// 8-bit binary PGM. Line 2 is a comment recording the value map; the top
/// image row is y1.
void write_pgm(std::ostream& os, const GridField& field, const GrayMap& map);

void save_grid_binary(const std::string& path, const GridField& field);
GridField load_grid_binary(const std::string& path);
void save_pgm(const std::string& path, const GridField& field, const GrayMap& map);
void save_measure_jsonl(const std::string& path, const EmpiricalMeasure& mu);
EmpiricalMeasure load_measure_jsonl(const std::string& path);

}  // namespace bifurlab
