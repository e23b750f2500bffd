#include "bifurlab/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bifurlab/error.hpp"
#include "bifurlab/parallel.hpp"

namespace bifurlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

cplx ipow(cplx z, int d) {
  cplx r = z;
  for (int i = 1; i < d; ++i) r *= z;
  return r;
}

// Pairwise sum of w_i log|z - x_i| without a scratch buffer.
double log_potential_tree(const Atom* a, std::size_t n, cplx z) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i].weight * std::log(std::abs(z - a[i].point));
    return s;
  }
  const std::size_t h = n / 2;
  return log_potential_tree(a, h, z) + log_potential_tree(a + h, n - h, z);
}

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double step = p1 / dp;
      t -= step;
      if (std::abs(step) < 1e-16) break;
    }
    x[i] = t;
    w[i] = 2.0 / ((1.0 - t * t) * dp * dp);
  }
}

}  // namespace

EmpiricalMeasure::EmpiricalMeasure(std::vector<Atom> atoms) {
  for (const Atom& a : atoms) require(a.weight > 0, "atom weights must be positive");
  atoms_ = std::move(atoms);
}

void EmpiricalMeasure::add(cplx point, double weight) {
  require(weight > 0, "atom weights must be positive");
  atoms_.push_back({point, weight});
}

double EmpiricalMeasure::total_mass() const {
  std::vector<double> w(atoms_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = atoms_[i].weight;
  return pairwise_sum(w);
}

double EmpiricalMeasure::integrate(const std::function<double(cplx)>& f) const {
  std::vector<double> terms(atoms_.size());
  for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = atoms_[i].weight * f(atoms_[i].point);
  return pairwise_sum(terms);
}

double EmpiricalMeasure::log_potential(cplx z) const {
  return log_potential_tree(atoms_.data(), atoms_.size(), z);
}

double cvg_normalization(int d, int n, int k, int e) {
  require(d >= 2 && n >= 0 && k >= 0, "invalid (d, n, k)");
  return std::pow(static_cast<double>(d), n) + std::pow(static_cast<double>(d), (1 - e) * k);
}

EmpiricalMeasure empirical_from_roots(const RootSet& roots, double normalization) {
  require(normalization > 0, "normalization must be positive");
  EmpiricalMeasure mu;
  for (const Root& r : roots.roots) mu.add(r.value, r.multiplicity / normalization);
  return mu;
}

GridSpec GridSpec::square(cplx center, double half_width, std::int64_t n) {
  return {center.real() - half_width, center.real() + half_width,
          center.imag() - half_width, center.imag() + half_width, n, n};
}

void GridSpec::validate() const {
  require(nx >= 2 && ny >= 2, "grid resolution must be at least 2 per axis");
  require(x1 > x0 && y1 > y0, "grid bounds must be increasing");
}

std::size_t GridField::flagged_count() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); }));
}

double GridField::sup_abs() const {
  double s = 0.0;
  for (double v : values) {
    if (std::isfinite(v)) s = std::max(s, std::abs(v));
  }
  return s;
}

GridField sample_field(const GridSpec& grid, const std::function<double(cplx)>& f) {
  grid.validate();
  GridField out{grid, std::vector<double>(grid.size())};
  parallel_for(static_cast<std::size_t>(grid.ny), [&](std::size_t j) {
    for (std::int64_t i = 0; i < grid.nx; ++i) {
      out.values[j * grid.nx + i] = f(grid.node(i, static_cast<std::int64_t>(j)));
    }
  });
  return out;
}

double unicritical_potential(int d, cplx c, int budget) {
  require(d >= 2, "degree must be at least 2");
  // Stop once |c / z^d| < 1e-16 so that d^{-m} log|z_m| is accurate.
  const double stop = 1e16 * std::max(1.0, std::abs(c));
  cplx z = c;
  double scale = 1.0;
  for (int m = 0; m <= budget; ++m) {
    const double n2 = std::norm(z);
    if (n2 > stop) return std::max(0.0, 0.5 * scale * std::log(n2));
    z = ipow(z, d) + c;
    scale /= d;
  }
  return 0.0;
}

GridField marked_potential_grid(int d, const GridSpec& grid, int budget) {
  require(d == 2, "parameter grids are one complex dimensional only for d = 2");
  const GreenOptions opts{.budget = budget, .certify_bounded = false};
  return sample_field(grid, [&](cplx a) {
    return big_green(ParamPoint{d, {}, a}, 1e-13, opts).value;
  });
}

double convergence_gap_value(int d, int n, int k, cplx c) {
  require(d >= 2 && k >= 0 && n > k, "need n > k >= 0");
  constexpr double kBig = 1e50;
  cplx z = 0.0, zk = 0.0;
  bool big = false, k_big = false;
  double L = 0.0, Lk = 0.0;
  for (int j = 1; j <= n; ++j) {
    if (!big) {
      z = ipow(z, d) + c;
      if (std::abs(z) > kBig) {
        big = true;
        L = std::log(std::abs(z));
      }
    } else {
      // log|z^d + c| = d log|z| + log|1 + c z^{-d}|, the last term below 1e-100
      L *= d;
    }
    if (j == k) {
      zk = z;
      k_big = big;
      Lk = L;
    }
  }
  const double scale = std::pow(static_cast<double>(d), -n);
  if (!big) {
    const double diff = std::abs(z - zk);
    if (diff == 0.0) return -kInf;
    return scale * (std::log(diff) - std::max(std::log(std::abs(z)), 0.0));
  }
  // Here log|f^n - f^k| - log|f^n| = log|1 - f^k/f^n| with
  // |f^k/f^n| <= exp(log|f^k| - L) < 1e-50, so h_n vanishes to double precision.
  const double lk = k_big ? Lk : (zk == cplx(0.0) ? -kInf : std::log(std::abs(zk)));
  const double ratio = std::exp(lk - L);
  return scale * (-ratio);
}

GridField convergence_gap(int d, int n, int k, const GridSpec& grid) {
  require(d >= 2 && k >= 0 && n > k, "need n > k >= 0");
  return sample_field(grid, [&](cplx c) { return convergence_gap_value(d, n, k, c); });
}

PotentialGap potential_compare(const EmpiricalMeasure& measure, const GridField& reference,
                               double exclusion_radius) {
  const GridSpec& g = reference.grid;
  g.validate();
  require(reference.values.size() == g.size(), "reference field does not match its grid");
  require(exclusion_radius >= 0, "exclusion radius must be nonnegative");
  const auto& atoms = measure.atoms();
  std::vector<double> gap(g.size(), -1.0);
  parallel_for(static_cast<std::size_t>(g.ny), [&](std::size_t j) {
    for (std::int64_t i = 0; i < g.nx; ++i) {
      const std::size_t idx = j * g.nx + i;
      const double ref = reference.values[idx];
      if (!std::isfinite(ref)) continue;
      const cplx z = g.node(i, static_cast<std::int64_t>(j));
      bool skip = false;
      for (const Atom& a : atoms) {
        if (std::abs(z - a.point) <= exclusion_radius) {
          skip = true;
          break;
        }
      }
      if (skip) continue;
      gap[idx] = std::abs(log_potential_tree(atoms.data(), atoms.size(), z) - ref);
    }
  });
  PotentialGap out;
  for (double v : gap) {
    if (v < 0) {
      ++out.excluded;
    } else {
      out.sup = std::max(out.sup, v);
    }
  }
  return out;
}

double Bump::operator()(cplx z) const {
  const double u = std::norm(z - center) / (radius * radius);
  return u < 1.0 ? (1.0 - u) * (1.0 - u) : 0.0;
}

double Bump::sup_gradient() const { return 8.0 / (3.0 * std::sqrt(3.0) * radius); }

double Bump::laplacian(double r) const {
  if (r >= radius) return 0.0;
  const double p2 = radius * radius;
  return -8.0 / p2 + 16.0 * r * r / (p2 * p2);
}

double pair(const EmpiricalMeasure& mu, const Bump& phi) {
  return mu.integrate([&](cplx z) { return phi(z); });
}

std::vector<double> test_function_discrepancy(const EmpiricalMeasure& mu,
                                              const EmpiricalMeasure& reference,
                                              std::span<const Bump> phis) {
  std::vector<double> out;
  for (const Bump& phi : phis) out.push_back(std::abs(pair(mu, phi) - pair(reference, phi)));
  return out;
}

std::vector<double> test_function_discrepancy(const EmpiricalMeasure& mu,
                                              const GridField& reference_density,
                                              std::span<const Bump> phis) {
  const GridSpec& g = reference_density.grid;
  g.validate();
  const double area = g.dx() * g.dy();
  std::vector<double> out;
  std::vector<double> terms(g.size());
  for (const Bump& phi : phis) {
    for (std::int64_t j = 0; j < g.ny; ++j) {
      for (std::int64_t i = 0; i < g.nx; ++i) {
        const std::size_t idx = j * g.nx + i;
        const double v = reference_density.values[idx];
        terms[idx] = std::isfinite(v) ? v * phi(g.node(i, j)) * area : 0.0;
      }
    }
    out.push_back(std::abs(pair(mu, phi) - pairwise_sum(terms)));
  }
  return out;
}

double green_identity_pairing(const std::function<double(cplx)>& potential, const Bump& phi,
                              const GreenIdentityOptions& options) {
  require(options.radial_panels >= 1 && options.gauss_points >= 1 && options.angles >= 4,
          "quadrature sizes too small");
  std::vector<double> gx, gw;
  gauss_legendre(options.gauss_points, gx, gw);
  const int nr = options.radial_panels * options.gauss_points;
  std::vector<double> terms(nr);
  parallel_for(static_cast<std::size_t>(nr), [&](std::size_t idx) {
    const int panel = static_cast<int>(idx) / options.gauss_points;
    const int q = static_cast<int>(idx) % options.gauss_points;
    const double a = phi.radius * panel / options.radial_panels;
    const double b = phi.radius * (panel + 1) / options.radial_panels;
    const double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
    std::vector<double> ring(options.angles);
    for (int t = 0; t < options.angles; ++t) {
      ring[t] = potential(phi.center + std::polar(r, kTwoPi * (t + 0.5) / options.angles));
    }
    const double mean = pairwise_sum(ring) / options.angles;
    // (1/2pi) * (2pi r mean) * Laplacian(phi)(r) * dr
    terms[idx] = 0.5 * (b - a) * gw[q] * phi.laplacian(r) * r * mean;
  });
  return pairwise_sum(terms);
}

LaplacianMeasure laplacian_measure(const GridField& field, double negative_tol) {
  const GridSpec& g = field.grid;
  g.validate();
  require(g.nx >= 3 && g.ny >= 3, "laplacian needs at least 3 nodes per axis");
  require(std::abs(g.dx() - g.dy()) <= 1e-9 * std::max(g.dx(), g.dy()),
          "laplacian_measure requires square cells");
  require(field.values.size() == g.size(), "field does not match its grid");
  for (double v : field.values) require(std::isfinite(v), "field has non-finite values");

  std::vector<double> mass(g.size(), 0.0);
  parallel_for(static_cast<std::size_t>(g.ny - 2), [&](std::size_t jj) {
    const std::int64_t j = static_cast<std::int64_t>(jj) + 1;
    for (std::int64_t i = 1; i + 1 < g.nx; ++i) {
      const double lap = field.at(i + 1, j) + field.at(i - 1, j) + field.at(i, j + 1) +
                         field.at(i, j - 1) - 4.0 * field.at(i, j);
      mass[j * g.nx + i] = lap / kTwoPi;
    }
  });

  LaplacianMeasure out;
  std::vector<double> negatives, all;
  all.reserve(static_cast<std::size_t>((g.nx - 2) * (g.ny - 2)));
  for (std::int64_t j = 1; j + 1 < g.ny; ++j) {
    for (std::int64_t i = 1; i + 1 < g.nx; ++i) {
      const double m = mass[j * g.nx + i];
      all.push_back(m);
      if (m > 0) {
        out.cells.add(g.node(i, j), m);
      } else if (m < -negative_tol) {
        negatives.push_back(m);
      }
    }
  }
  out.negative_cells = negatives.size();
  out.negative_mass = pairwise_sum(negatives);
  out.total_mass = out.cells.total_mass();
  out.signed_mass = pairwise_sum(all);
  return out;
}

GridField laplacian_density(const GridField& field) {
  const GridSpec& g = field.grid;
  g.validate();
  require(g.nx >= 3 && g.ny >= 3, "laplacian needs at least 3 nodes per axis");
  require(field.values.size() == g.size(), "field does not match its grid");
  GridField out{g, std::vector<double>(g.size(), std::numeric_limits<double>::quiet_NaN())};
  const double hx = 1.0 / (g.dx() * g.dx()), hy = 1.0 / (g.dy() * g.dy());
  parallel_for(static_cast<std::size_t>(g.ny - 2), [&](std::size_t jj) {
    const std::int64_t j = static_cast<std::int64_t>(jj) + 1;
    for (std::int64_t i = 1; i + 1 < g.nx; ++i) {
      const double f = field.at(i, j);
      const double lap = (field.at(i + 1, j) + field.at(i - 1, j) - 2 * f) * hx +
                         (field.at(i, j + 1) + field.at(i, j - 1) - 2 * f) * hy;
      out.at(i, j) = lap / kTwoPi;
    }
  });
  return out;
}

LaplacianMeasure monge_ampere_regularized(const GridField& green, double r) {
  require(r > 0, "regularization level must be positive");
  GridField lifted = green;
  for (double& v : lifted.values) v = std::max(v, r);
  double jump = 0.0;
  const GridSpec& g = green.grid;
  for (std::int64_t j = 0; j < g.ny; ++j) {
    for (std::int64_t i = 0; i < g.nx; ++i) {
      if (i + 1 < g.nx) jump = std::max(jump, std::abs(green.at(i + 1, j) - green.at(i, j)));
      if (j + 1 < g.ny) jump = std::max(jump, std::abs(green.at(i, j + 1) - green.at(i, j)));
    }
  }
  LaplacianMeasure out = laplacian_measure(lifted);
  out.resolution_warning = r < jump;
  return out;
}

}  // namespace bifurlab
