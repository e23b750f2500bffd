#include "bifurlab/aberth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "bifurlab/error.hpp"

namespace bifurlab {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

NewtonEval horner_newton(std::span<const cplx> coeffs, cplx z) {
  cplx p = 0.0, dp = 0.0;
  double err = 0.0;
  const double az = std::abs(z);
  for (std::size_t k = coeffs.size(); k-- > 0;) {
    dp = dp * z + p;
    p = p * z + coeffs[k];
    err = err * az + std::abs(p);
  }
  NewtonEval ev;
  ev.ratio = (std::abs(dp) > 0) ? p / dp : cplx(0.0);
  ev.value_abs = std::abs(p);
  ev.noise = 2 * kEps * err;
  return ev;
}

AberthResult aberth(int degree, const NewtonEvaluator& eval,
                    const AberthOptions& options) {
  require(degree >= 1, "degree must be positive");
  AberthResult res;
  const std::size_t n = degree;
  res.roots.resize(n);
  res.converged.assign(n, 0);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double phase = kTwoPi * unif(rng);
  const double radius = options.start_radius > 0 ? options.start_radius : 1.0;
  if (!options.initial.empty()) {
    require(options.initial.size() == n, "initial guesses do not match the degree");
    res.roots = options.initial;
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      res.roots[i] = options.start_center +
                     std::polar(radius, phase + kTwoPi * (i + 0.5) / n);
    }
  }
  if (n == 1) {
    for (int it = 0; it < 200; ++it) {
      NewtonEval ev = eval(res.roots[0]);
      res.roots[0] -= ev.ratio;
      if (std::abs(ev.ratio) <= options.step_tol * (1 + std::abs(res.roots[0]))) {
        res.converged[0] = 1;
        break;
      }
    }
    res.all_converged = res.converged[0];
    return res;
  }

  // Split storage keeps the O(n^2) interaction sum vectorizable.
  std::vector<double> re(n), im(n);
  std::vector<cplx> next(n);
  std::vector<std::size_t> active(n);
  for (std::size_t i = 0; i < n; ++i) active[i] = i;

  for (int sweep = 0; sweep < options.max_sweeps && !active.empty(); ++sweep) {
    res.sweeps = sweep + 1;
    for (std::size_t i = 0; i < n; ++i) {
      re[i] = res.roots[i].real();
      im[i] = res.roots[i].imag();
    }
    std::vector<std::size_t> still;
    still.reserve(active.size());
    for (std::size_t i : active) {
      const cplx z = res.roots[i];
      NewtonEval ev = eval(z);
      if (ev.value_abs == 0.0) {
        res.converged[i] = 1;
        next[i] = z;
        continue;
      }
      double sr = 0.0, si = 0.0;
      const double zr = z.real(), zi = z.imag();
      for (std::size_t j = 0; j < n; ++j) {
        double dr = zr - re[j], di = zi - im[j];
        double q = dr * dr + di * di;
        double inv = (q > 0.0) ? 1.0 / q : 0.0;
        sr += dr * inv;
        si -= di * inv;
      }
      const cplx s(sr, si);
      const cplx nr = ev.ratio;
      const cplx step = nr / (1.0 - nr * s);
      const cplx znew = z - step;
      next[i] = std::isfinite(znew.real()) && std::isfinite(znew.imag()) ? znew : z;
      const bool tiny = std::abs(step) <= options.step_tol * (1.0 + std::abs(z));
      const bool at_noise = ev.value_abs <= ev.noise;
      if (tiny || at_noise) {
        res.converged[i] = 1;
      } else {
        still.push_back(i);
      }
    }
    for (std::size_t i : active) res.roots[i] = next[i];
    active.swap(still);
  }
  res.all_converged = active.empty();
  return res;
}

AberthResult polynomial_roots(std::span<const cplx> coeffs, AberthOptions options) {
  std::size_t deg = coeffs.size();
  while (deg > 0 && coeffs[deg - 1] == cplx(0.0)) --deg;
  require(deg >= 2, "polynomial must have positive degree");
  std::span<const cplx> c = coeffs.first(deg);
  if (options.start_radius <= 0) {
    // Fujiwara-type bound on the root moduli.
    double bound = 0.0;
    const double lead = std::abs(c[deg - 1]);
    for (std::size_t k = 0; k + 1 < deg; ++k) {
      bound = std::max(bound, std::pow(std::abs(c[k]) / lead, 1.0 / (deg - 1 - k)));
    }
    options.start_radius = std::max(2.0 * bound, 1e-3);
  }
  std::vector<cplx> copy(c.begin(), c.end());
  return aberth(static_cast<int>(deg - 1),
                [copy](cplx z) { return horner_newton(copy, z); }, options);
}

}  // namespace bifurlab
