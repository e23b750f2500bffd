#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "bifurlab/portrait.hpp"

namespace bifurlab {

struct KneadingResult {
  std::vector<int> digits;
  /// Step j at which d^j alpha landed on alpha or alpha + k/d.
  std::optional<int> boundary_hit_at;
};

/// Digit j (j = 1..n) is 0 iff d^j alpha lies in the open arc
/// (alpha, alpha + k/d), 1 iff it lies in the complementary open arc.
KneadingResult kneading(const Angle& alpha, int d, int k, int n);

/// Open arc (lo, hi) of R/Z with 0 <= lo < hi <= 1.
struct Arc {
  mpq_class lo;
  mpq_class hi;
};

struct CylinderCover {
  std::string word;
  std::vector<Arc> intervals;
  std::size_t count = 0;
};

/// Default cap on the word length for cylinder_cover.
inline constexpr int kCylinderWordCap = 16;

/// Arcs of alpha whose kneading digits start with the word. Digit j
/// constrains (d^j - 1) alpha mod 1 to (0, k/d) or to (k/d, 1).
CylinderCover cylinder_cover(const std::string& word, int d, int k,
                             int word_cap = kCylinderWordCap);

/// Children of a cover after appending one digit.
CylinderCover refine(const CylinderCover& parent, int digit, int d, int k);

struct CountingLevel {
  int n = 0;
  std::size_t max_count = 0;
  std::string max_count_word;
  mpq_class max_length;
  std::string max_length_word;
  mpq_class total_length;
  double bound = 0.0;  // C n (d-k)^n
};

struct CountingReport {
  int d = 3;
  int k = 1;
  double constant = 0.0;  // C fitted at n = 1
  std::vector<CountingLevel> levels;
  bool counts_ok = true;
  bool lengths_ok = true;
  bool recursion_ok = true;
  /// Children with count(w e) > (d-k) count(w) + 1; informational only.
  std::size_t single_step_excess = 0;
  /// Box-counting slope of log(max count) against n log d over the upper
  /// half of the levels.
  double dimension_estimate = 0.0;
  double dimension_target = 0.0;  // log(d-k)/log d
  bool dimension_ok = true;
  std::string offending_word;
  bool ok() const { return counts_ok && lengths_ok && recursion_ok && dimension_ok; }
};

CountingReport verify_counting_bound(int d, int k, int n_max);

/// CSV with columns word,lo,hi (exact "p/q").
std::string cover_csv(const CylinderCover& cover);

}  // namespace bifurlab
