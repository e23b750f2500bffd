#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bifurlab/parameter_space.hpp"
#include "bifurlab/per_solver.hpp"
#include "bifurlab/portrait.hpp"

namespace bifurlab {

struct RayPoint {
  double r = 0.0;
  cplx point;
  Angle angle;
};

struct RayTrace {
  std::vector<RayPoint> points;
  /// Newton stagnated at the minimum step; points end at the last good one.
  bool truncated = false;
};

/// Follows the external ray of the given angle from potential r_start down to
/// r_stop, sampling `steps` potentials in geometric progression. Each point
/// solves phi_P(z) = exp(rho + 2 pi i angle) through P^m(z) = phi_P^{-1}(...)
/// with m chosen so that the far approximation of phi_P is exact to double
/// precision.
RayTrace trace_dynamical_ray(const MarkedPolynomial& p, const Angle& angle, double r_start,
                             double r_stop, int steps);

/// Largest |P(z(rho)) - w(d rho)| over samples of `ray` whose potential times
/// d matches a sample of `image_ray` (the ray of angle d * angle). Returns
/// nullopt when no potentials match.
std::optional<double> doubling_defect(const MarkedPolynomial& p, const RayTrace& ray,
                                      const RayTrace& image_ray);

struct GoldbergOptions {
  double seed_potential = 8.0;
  /// Ratio between consecutive continuation potentials.
  double ratio = 0.7;
  int max_refinements = 4;
  bool verify_branch = true;
};

struct GoldbergResult {
  ParamPoint point;
  bool converged = false;
  /// max_i |log phi(v_i) - (d r + 2 pi i d alpha_i)| from the Newton equations.
  double residual = 0.0;
  /// Green values of the critical points, in marked order.
  std::vector<double> critical_green;
  std::vector<std::string> trace;
};

/// Parameter (c, a) with critical Green values r and critical value arguments
/// d * theta_i, for theta in Cb_0 and d in {2, 3}.
GoldbergResult goldberg_solve(const CriticalPortrait& theta, double r, int d, double tol,
                              const GoldbergOptions& options = {});

struct StretchPoint {
  double r;
  ParamPoint point;
};

struct StretchResult {
  std::vector<StretchPoint> path;
  bool landed = false;
  /// Sum of the parameter increments over the last 8 schedule points.
  double tail = 0.0;
  ParamPoint landing;
  bool misiurewicz_combinatorics = false;
  std::optional<MisiurewiczRecord> classification;
  std::vector<std::string> trace;
};

/// Geometric schedule r_j = r0 * q^j down to r_min.
std::vector<double> geometric_schedule(double r0, double r_min, double ratio);

StretchResult stretch_ray(const CriticalPortrait& theta, int d,
                          const std::vector<double>& schedule, double tol,
                          const GoldbergOptions& options = {});

/// Rays as CSV rows r,re,im.
std::string ray_csv(const RayTrace& ray);

}  // namespace bifurlab
