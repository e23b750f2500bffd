#pragma once

#include <span>
#include <vector>

#include "bifurlab/dynamics.hpp"

namespace bifurlab {

/// A point (c, a) of the parameter cover C^{d-1}.
struct ParamPoint {
  int d = 2;
  std::vector<cplx> c;
  cplx a = 0.0;

  MarkedPolynomial polynomial() const { return MarkedPolynomial(d, c, a); }
  /// max{|a|, |c_k|}
  double param_bound() const;
};

enum class LocusStatus { kEscaping, kBoundedCertified, kUndecided };

const char* to_string(LocusStatus status);

struct LocusVerdict {
  LocusStatus status = LocusStatus::kUndecided;
  std::vector<GreenValue> per_critical;
  /// Decided by the a-priori bound alone, without iterating.
  bool a_priori = false;
};

/// True iff some (d-1)-th root of unity z has z c_i(p) = c_i(q) and
/// z a(p)^d = a(q)^d, each within tol.
bool are_equivalent(const ParamPoint& p, const ParamPoint& q, double tol);

/// G(c,a) = max_k g(c_k). The status is escaped if the maximum is certified
/// positive, bounded-certified if all critical orbits are, undecided otherwise;
/// the error bound always encloses the true value.
GreenValue big_green(const ParamPoint& p, double tol, const GreenOptions& options = {});

LocusVerdict locus_test(const ParamPoint& p, int budget, double tol);

/// log d + sum_k g(c_k). Throws kUndecided when a critical Green value is
/// not enclosed within tol.
double lyapunov(const ParamPoint& p, double tol, const GreenOptions& options = {});

/// z^d + c is conjugate to P_{(0..0), a} with a^d = d^{1/(d-1)} c; the
/// principal d-th root is returned.
ParamPoint from_unicritical(int d, cplx c);
/// Inverse of from_unicritical; requires all c_k = 0.
cplx to_unicritical(const ParamPoint& p);

/// Affine conjugacy w = lambda (z - z0) bringing a polynomial with the given
/// coefficients into marked form, with the critical point z0 sent to 0.
struct MarkedConjugacy {
  ParamPoint point;
  cplx lambda;
  cplx z0;
};
MarkedConjugacy to_marked(std::span<const cplx> coeffs);

}  // namespace bifurlab
