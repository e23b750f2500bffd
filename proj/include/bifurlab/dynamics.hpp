#pragma once

#include <optional>
#include <span>
#include <vector>

#include "bifurlab/types.hpp"

namespace bifurlab {

/// Degree-d polynomial with its d-1 critical points marked:
///   P(z) = z^d/d + sum_{j=2}^{d-1} (-1)^{d-j} s_{d-j}(c) z^j/j + a^d,
/// where s_i are the elementary symmetric sums of c = (c_1..c_{d-2}).
/// P'(z) = z (z-c_1)...(z-c_{d-2}), so the critical points are 0, c_1, ...
class MarkedPolynomial {
 public:
  MarkedPolynomial(int degree, std::vector<cplx> crit_params, cplx a);

  int degree() const { return degree_; }
  const std::vector<cplx>& crit_params() const { return crit_params_; }
  cplx a() const { return a_; }
  /// Monomial coefficients, constant term first.
  const std::vector<cplx>& coeffs() const { return coeffs_; }

  /// (0, c_1, ..., c_{d-2}).
  std::vector<cplx> critical_points() const;

  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;

  /// A = max{|c_k|, |a|}.
  double param_bound() const { return param_bound_; }
  /// sum c_k / (d-1); the Boettcher coordinate is ~ d^{-1/(d-1)} (z - delta).
  cplx delta() const;
  /// Radius R beyond which orbits escape monotonically and
  /// |d P(w)/w^d - 1| <= 1/2.
  double escape_radius() const { return escape_radius_; }
  /// 3^{1/(d-1)} R: every point outside this radius lies in the Boettcher
  /// domain {g > G}.
  double bottcher_radius() const;

 private:
  int degree_;
  std::vector<cplx> crit_params_;
  cplx a_;
  std::vector<cplx> coeffs_;
  double param_bound_;
  double escape_radius_;
};

MarkedPolynomial build_polynomial(int d, std::span<const cplx> crit_params,
                                  cplx a);

cplx evaluate(const MarkedPolynomial& p, cplx z);

/// Coefficients of prod (z - r_i), constant term first.
std::vector<cplx> expand_roots(std::span<const cplx> roots);

/// Horner evaluation of an arbitrary coefficient list (constant first).
cplx horner(std::span<const cplx> coeffs, cplx z);

struct OrbitRecord {
  cplx start;
  std::vector<cplx> points;  // points[0] == start
  std::optional<int> escaped_at;
  double escape_radius = 0.0;
};

OrbitRecord iterate(const MarkedPolynomial& p, cplx z, int n_max,
                    double escape_radius);

enum class GreenStatus { kEscaped, kBoundedCertified, kUndecided };

const char* to_string(GreenStatus status);

struct GreenValue {
  double value = 0.0;
  double error_bound = 0.0;
  int iterations_used = 0;
  GreenStatus status = GreenStatus::kUndecided;

  bool escaped() const { return status == GreenStatus::kEscaped; }
  bool bounded() const { return status == GreenStatus::kBoundedCertified; }
};

struct GreenOptions {
  int budget = 4000;
  /// Attempt attracting-cycle certification when the orbit never escapes.
  bool certify_bounded = true;
};

/// Green function g_P(z) with a certified tail bound.
GreenValue green_value(const MarkedPolynomial& p, cplx z, double tol,
                       const GreenOptions& options = {});

/// Boettcher coordinate phi_P(z); z must satisfy g_P(z) > G(P).
/// Throws kDomainError near the filled Julia set and kStepRefinementNeeded
/// when the branch cannot be resolved.
cplx bottcher_value(const MarkedPolynomial& p, cplx z, double tol);

/// Residue of 1/(P(z) - z) at the fixed point z0 of the polynomial with the
/// given monomial coefficients (constant first).
cplx holomorphic_index(std::span<const cplx> coeffs, cplx z0,
                       double fixed_tol = 1e-10);
cplx holomorphic_index(const MarkedPolynomial& p, cplx z0,
                       double fixed_tol = 1e-10);

/// |P(z)| <= C_d |z|^d whenever |z| >= A.
double coefficient_constant(int d);
/// Upper bound for |d P(w)/w^d - 1| in terms of rho = A/|w|.
double perturbation_bound(int d, double rho);
/// Bound on |G(c,a) - log+ max{|a|,|c_k|}| derived from the escape lemmas:
/// log 8 + log(C_d)/(d-1).
double growth_constant(int d);
/// Every parameter of the connectedness locus has max{|a|,|c_k|} <= 8.
double compactness_radius();

}  // namespace bifurlab
