#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bifurlab/parameter_space.hpp"
#include "bifurlab/per_solver.hpp"

namespace bifurlab {

struct Atom {
  cplx point;
  double weight;
};

/// Finite weighted point cloud with positive weights.
class EmpiricalMeasure {
 public:
  EmpiricalMeasure() = default;
  explicit EmpiricalMeasure(std::vector<Atom> atoms);

  void add(cplx point, double weight);
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  double total_mass() const;
  /// sum_i w_i f(x_i), pairwise summed.
  double integrate(const std::function<double(cplx)>& f) const;
  /// Logarithmic potential sum_i w_i log|z - x_i|.
  double log_potential(cplx z) const;

 private:
  std::vector<Atom> atoms_;
};

/// d^n + d^{(1-e)k}; e = 1 for polynomial families.
double cvg_normalization(int d, int n, int k, int e = 1);

/// One atom per root with weight multiplicity / normalization.
EmpiricalMeasure empirical_from_roots(const RootSet& roots, double normalization);

/// Nodes x0 + i dx, y0 + j dy with both end points included.
struct GridSpec {
  double x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  std::int64_t nx = 2, ny = 2;

  static GridSpec square(cplx center, double half_width, std::int64_t n);
  double dx() const { return (x1 - x0) / static_cast<double>(nx - 1); }
  double dy() const { return (y1 - y0) / static_cast<double>(ny - 1); }
  cplx node(std::int64_t i, std::int64_t j) const { return {x0 + i * dx(), y0 + j * dy()}; }
  std::size_t size() const { return static_cast<std::size_t>(nx * ny); }
  void validate() const;
};

/// Real samples on a GridSpec, row-major with rows of constant y. Non-finite
/// entries mark flagged atoms.
struct GridField {
  GridSpec grid;
  std::vector<double> values;

  double& at(std::int64_t i, std::int64_t j) { return values[j * grid.nx + i]; }
  double at(std::int64_t i, std::int64_t j) const { return values[j * grid.nx + i]; }
  std::size_t flagged_count() const;
  /// Largest |value| over finite entries.
  double sup_abs() const;
};

GridField sample_field(const GridSpec& grid, const std::function<double(cplx)>& f);

/// g_c(c) for f_c(z) = z^d + c: the potential of the harmonic measure of the
/// connectedness locus (mass 1). Orbits that have not escaped after budget
/// steps contribute 0.
double unicritical_potential(int d, cplx c, int budget = 2000);

/// G sampled on the d = 2 parameter line a (c-vector empty).
GridField marked_potential_grid(int d, const GridSpec& grid, int budget = 2000);

/// h_n(c) = d^{-n} (log|f^n(0) - f^k(0)| - log max{|f^n(0)|, 1}) for
/// f_c(z) = z^d + c, carried in log-magnitude form once the orbit is large.
double convergence_gap_value(int d, int n, int k, cplx c);
GridField convergence_gap(int d, int n, int k, const GridSpec& grid);

struct PotentialGap {
  double sup = 0.0;
  std::size_t excluded = 0;
};

/// sup over grid nodes of |u_mu - G|. Nodes within exclusion_radius of an atom
/// (exact coincidence when 0) or with non-finite reference are skipped.
PotentialGap potential_compare(const EmpiricalMeasure& measure, const GridField& reference,
                               double exclusion_radius = 0.0);

/// phi(z) = (1 - |z - z0|^2 / rho^2)^2 inside the disk, 0 outside.
struct Bump {
  cplx center;
  double radius;

  double operator()(cplx z) const;
  double sup() const { return 1.0; }
  double sup_gradient() const;
  /// Laplacian as a function of the distance to the center.
  double laplacian(double r) const;
};

double pair(const EmpiricalMeasure& mu, const Bump& phi);

std::vector<double> test_function_discrepancy(const EmpiricalMeasure& mu,
                                              const EmpiricalMeasure& reference,
                                              std::span<const Bump> phis);
/// Reference given as a density on grid nodes (cell area dx dy).
std::vector<double> test_function_discrepancy(const EmpiricalMeasure& mu,
                                              const GridField& reference_density,
                                              std::span<const Bump> phis);

struct GreenIdentityOptions {
  int radial_panels = 24;
  int gauss_points = 8;
  int angles = 2048;
};

/// (1/2pi) * integral of potential * Laplacian(phi) over the bump disk, in polar
/// coordinates: the pairing of phi with the Riesz measure of the potential.
double green_identity_pairing(const std::function<double(cplx)>& potential, const Bump& phi,
                              const GreenIdentityOptions& options = {});

struct LaplacianMeasure {
  EmpiricalMeasure cells;
  /// Sum of clipped negative cell masses (a discretization-quality metric).
  double negative_mass = 0.0;
  std::size_t negative_cells = 0;
  /// Mass of the kept (positive) cells.
  double total_mass = 0.0;
  /// Sum of all cell masses before clipping; by the discrete divergence
  /// theorem this is the boundary flux of the field over 2 pi.
  double signed_mass = 0.0;
  bool resolution_warning = false;
};

/// 5-point discrete Laplacian over 2 pi on interior nodes, as cell masses.
/// Values below -negative_tol are clipped and reported.
LaplacianMeasure laplacian_measure(const GridField& field, double negative_tol = 1e-12);

/// Signed 5-point Laplacian over 2 pi per unit area on interior nodes; the
/// border is NaN.
GridField laplacian_density(const GridField& field);

/// laplacian_measure of max{G, r}. Warns when r is below the largest
/// potential jump between neighbouring nodes.
LaplacianMeasure monge_ampere_regularized(const GridField& green, double r);

}  // namespace bifurlab
