#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "bifurlab/types.hpp"

namespace bifurlab {

/// Element of R/Z, either an exact reduced fraction p/q with 0 <= p < q or a
/// double in [0, 1).
class Angle {
 public:
  Angle() : exact_(true), q_(0) {}
  static Angle exact(const mpq_class& q);
  static Angle exact(long p, long q);
  static Angle real(double x);
  /// "p/q" or a decimal number.
  static Angle parse(const std::string& text);

  bool is_exact() const { return exact_; }
  const mpq_class& rational() const;
  double value() const;

  Angle times(long d) const;
  Angle plus(const Angle& other) const;
  Angle plus(const mpq_class& t) const;
  Angle plus(double t) const;

  std::string to_string() const;

  /// Exact equality when both are exact; otherwise equality of doubles.
  friend bool operator==(const Angle& a, const Angle& b);
  /// Order of representatives in [0, 1).
  friend bool operator<(const Angle& a, const Angle& b);

 private:
  bool exact_;
  mpq_class q_;
  double x_ = 0.0;
};

using AngleSet = std::vector<Angle>;

/// {alpha, alpha + k/d} with k/d the circular distance between the two.
struct PortraitPair {
  Angle alpha;
  Angle alpha_prime;
};

/// (theta_1, ..., theta_{d-1}); theta_i is attached to the i-th marked
/// critical point (0, c_1, ..., c_{d-2}).
struct CriticalPortrait {
  std::vector<AngleSet> sets;

  bool is_exact() const;
  std::string to_json() const;
  static CriticalPortrait from_json(const std::string& text);
};

/// Sorted copy without duplicates.
AngleSet normalized(AngleSet s);

/// theta2 lies in a single component of the circle minus theta1.
bool is_unlinked(const AngleSet& t1, const AngleSet& t2);

struct PortraitVerdict {
  bool valid = false;
  bool same_image = true;        // d alpha constant within each set
  bool equal_or_disjoint = true;
  bool cardinality = true;       // Card(union) = d + N - 1
  bool unlinked = true;
  bool in_cb0 = false;           // d-1 pairwise disjoint, unlinked pairs
  int distinct_sets = 0;
  int union_size = 0;
  std::string detail;
};

/// Checks the four defining conditions exactly (floats only when the input
/// contains floats).
PortraitVerdict validate_portrait(const CriticalPortrait& theta, int d);

/// d-1 independent pairs, each drawn by choosing a component k (weight 1, or
/// 1/2 for k = d/2) and a uniform alpha = m / (2^31 - 1), accepted when
/// pairwise disjoint and unlinked.
CriticalPortrait sample_cb0(int d, std::uint64_t seed, int max_attempts = 1000000);

/// Fraction of accepted draws in the rejection sampler over the given number
/// of attempts.
double cb0_acceptance_rate(int d, std::uint64_t seed, int attempts);

/// (s + i t) . (Theta, r) = (Theta + r t, s r), exact on rationals.
struct LeafPoint {
  CriticalPortrait theta;
  mpq_class r;
};
struct LeafElement {
  mpq_class s;  // > 0
  mpq_class t;
};
LeafPoint leaf_action(const LeafElement& u, const LeafPoint& x);
/// (s1 + i t1) * (s2 + i t2) = (s1 + i t1) s2 + i t2.
LeafElement leaf_compose(const LeafElement& u1, const LeafElement& u2);
/// Floating version for complex u with Re u > 0.
std::pair<CriticalPortrait, double> leaf_action(cplx u, const CriticalPortrait& theta,
                                                double r);

/// Replaces every theta_i by the union of the chain of sets meeting it.
CriticalPortrait portrait_glue(const CriticalPortrait& theta);

/// True iff every angle is strictly preperiodic under multiplication by d.
bool misiurewicz_portrait(const CriticalPortrait& theta, int d);
bool strictly_preperiodic(const Angle& a, int d);

}  // namespace bifurlab
