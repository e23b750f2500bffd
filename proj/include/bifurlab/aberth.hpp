#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bifurlab/types.hpp"

namespace bifurlab {

/// One evaluation of a polynomial for the simultaneous iteration.
struct NewtonEval {
  cplx ratio;           // p(z) / p'(z)
  double value_abs;     // |p(z)|, +inf when it overflows
  double noise;         // rounding-error estimate for |p(z)|
};

using NewtonEvaluator = std::function<NewtonEval(cplx)>;

struct AberthOptions {
  int max_sweeps = 600;
  double start_radius = 0.0;  // 0: Cauchy-type bound from the coefficients
  cplx start_center = 0.0;
  std::uint64_t seed = 1;
  /// Explicit starting points; overrides the circle when non-empty.
  std::vector<cplx> initial;
  /// Relative size of a Newton correction at which a root counts as settled.
  double step_tol = 4e-16;
};

struct AberthResult {
  std::vector<cplx> roots;
  std::vector<char> converged;
  int sweeps = 0;
  bool all_converged = false;
};

/// Ehrlich-Aberth iteration (Jacobi sweeps, converged roots frozen) for a
/// polynomial of the given degree available only through an evaluator.
AberthResult aberth(int degree, const NewtonEvaluator& eval,
                    const AberthOptions& options);

/// Horner evaluation with derivative and running error bound.
NewtonEval horner_newton(std::span<const cplx> coeffs, cplx z);

/// All roots of a polynomial with monomial coefficients (constant first).
AberthResult polynomial_roots(std::span<const cplx> coeffs,
                              AberthOptions options = {});

}  // namespace bifurlab
