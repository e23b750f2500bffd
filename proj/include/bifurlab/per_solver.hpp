#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bifurlab/exact_poly.hpp"
#include "bifurlab/parameter_space.hpp"

namespace bifurlab {

/// c -> f_c^n(0) - f_c^k(0) in the unicritical family f_c(z) = z^d + c.
struct PerPolynomial {
  int d = 2;
  int n = 1;
  int k = 0;
  /// Exact integer coefficients; empty when the degree exceeded the
  /// coefficient budget and only the orbit recursion is available.
  IntPoly coeffs;

  long long degree() const;
  bool has_coeffs() const { return !coeffs.empty(); }
};

inline constexpr long long kDefaultCoefficientBudget = 2048;

/// Throws kResourceLimit when the degree exceeds coefficient_budget.
PerPolynomial per_poly(int d, int n, int k,
                       long long coefficient_budget = kDefaultCoefficientBudget);
/// Same polynomial, represented only through the orbit recursion.
PerPolynomial per_poly_implicit(int d, int n, int k);

/// f_c^j(0) for j = 0..n together with the derivative in c and a running
/// rounding-error bound for the last value.
struct OrbitEval {
  cplx value;
  cplx deriv;
  double noise;
};
OrbitEval critical_orbit(int d, int n, cplx c);

/// Point of the unicritical parameter ray of angle theta at potential rho,
/// found by continuation from rho = 5.
cplx parameter_ray_point(int d, double theta, double rho);

/// Per(n,k) evaluated at c by the orbit recursion.
cplx evaluate_per(const PerPolynomial& p, cplx c);

struct Root {
  cplx value;
  int multiplicity = 1;
  double residual = 0.0;   // |f^n(0) - f^k(0)| at the root
  double condition = 0.0;  // rounding-error scale of that evaluation
};

struct RootSet {
  std::vector<Root> roots;
  double residual_bound = 0.0;
  long long degree = 0;
  /// False when the iteration budget ran out or the multiplicity structure
  /// disagrees with the modular square-free decomposition.
  bool complete = true;
  /// Degrees of the square-free factors (entry i: multiplicity i+1) as
  /// computed modulo primes; empty if not computed.
  std::vector<int> modular_profile;
  std::string note;

  long long total_multiplicity() const;
};

enum class SeedMode {
  /// Equally spaced external angles on a parameter equipotential close to the
  /// connectedness locus (the roots accumulate on harmonic measure).
  kEquipotential,
  /// Circle of radius 1.25 * 2^{1/(d-1)} with a random phase.
  kCircle,
};

struct SolveOptions {
  std::uint64_t seed = 1;
  SeedMode seed_mode = SeedMode::kEquipotential;
  int max_sweeps = 800;
  /// Largest degree for which the modular square-free check is run.
  long long modular_check_budget = 1 << 16;
};

RootSet solve_roots(const PerPolynomial& p, double tol, const SolveOptions& options = {});

/// Modular square-free profile of Per(n,k), agreeing over two primes.
std::vector<int> per_squarefree_profile(int d, int n, int k);

RootSet strict_preper_roots(int d, int n, int k, double tol,
                            const SolveOptions& options = {});

enum class MisiurewiczKind { kMisiurewicz, kCriticallyFiniteHyperbolic, kNotDetected };

const char* to_string(MisiurewiczKind kind);

struct CriticalOrbitClass {
  bool detected = false;
  int preperiod = 0;
  int period = 0;
  cplx multiplier = 0.0;
};

struct MisiurewiczRecord {
  MisiurewiczKind kind = MisiurewiczKind::kNotDetected;
  std::vector<CriticalOrbitClass> per_critical;
};

MisiurewiczRecord misiurewicz_classify(const ParamPoint& p, double tol, int budget = 64);
MisiurewiczRecord misiurewicz_classify_unicritical(int d, cplx c, double tol, int budget = 64);

struct CentersResult {
  /// Solutions on the cover, (c_1, a).
  std::vector<ParamPoint> points;
  /// Distinct solutions in (c_1, s = a^3).
  std::vector<std::pair<cplx, cplx>> cs_solutions;
  long long bezout_bound = 0;
  int starts_used = 0;
  bool complete = true;
  double max_residual = 0.0;
};

struct CentersOptions {
  std::uint64_t seed = 12345;
  int batch = 400;
  int max_starts = 200000;
  int min_starts = 4000;
  double dedupe_tol = 1e-7;
  int max_n = 3;
};

/// Residuals (P^{n0}(0), P^{n1}(c_1) - c_1) of the cubic system at (c_1, s).
std::pair<cplx, cplx> centers_residual(int n0, int n1, cplx c1, cplx s);

/// Solutions of P^{n0}(0) = 0, P^{n1}(c_1) = c_1 for d = 3.
CentersResult centers_2d(int d, int n0, int n1, double tol,
                         const CentersOptions& options = {});

}  // namespace bifurlab
