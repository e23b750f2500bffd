#include "bifurlab/per_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "bifurlab/aberth.hpp"
#include "bifurlab/error.hpp"

namespace bifurlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

long long ipow_ll(long long b, int e) {
  long long r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

void check_indices(int d, int n, int k) {
  require(d >= 2, "degree must be at least 2");
  require(n > k && k >= 0, "need n > k >= 0");
  require(static_cast<double>(n - 1) * std::log(d) < std::log(1e9), "degree too large");
}

cplx pow_int(cplx z, int e) {
  cplx r = 1.0;
  for (int i = 0; i < e; ++i) r *= z;
  return r;
}

// Newton data for F(c) = f_c^A(0) - omega f_c^B(0) with B < A.
NewtonEval factor_newton(int d, int A, int B, cplx omega, cplx c) {
  cplx z = 0.0, dz = 0.0, zb = 0.0, dzb = 0.0;
  double err = 0.0, errb = 0.0;
  for (int j = 0; j < A; ++j) {
    if (j == B) {
      zb = z;
      dzb = dz;
      errb = err;
    }
    if (std::abs(z) > 1e60) {
      // Past escape f^{j+1} ~ (f^j)^d, so the Newton ratio shrinks by d per step.
      NewtonEval ev;
      ev.ratio = (z / dz) / std::pow(static_cast<double>(d), A - j);
      ev.value_abs = std::numeric_limits<double>::infinity();
      ev.noise = 0.0;
      return ev;
    }
    cplx zd1 = pow_int(z, d - 1);
    cplx znew = zd1 * z + c;
    double azd1 = std::abs(zd1);
    err = d * azd1 * err + kEps * (d * azd1 * std::abs(z) + std::abs(znew));
    dz = static_cast<double>(d) * zd1 * dz + 1.0;
    z = znew;
  }
  cplx f = z - omega * zb;
  cplx df = dz - omega * dzb;
  NewtonEval ev;
  ev.ratio = (std::abs(df) > 0) ? f / df : cplx(0.0);
  ev.value_abs = std::abs(f);
  ev.noise = 4 * (err + std::abs(omega) * errb);
  return ev;
}

struct Factor {
  int A;
  int B;
  cplx omega;
  int multiplicity;
};

// f^n - f^k = prod_{w^d = 1} (f^{n-1} - w f^{k-1}); peeling the w = 1 factor
// k times leaves (f^{n-k})^d times the factors f^{n-i} - w f^{k-i}, w != 1.
std::vector<Factor> per_factors(int d, int n, int k) {
  if (k == 0) return {{n, 0, 0.0, 1}};
  std::vector<Factor> out{{n - k, 0, 0.0, d}};
  for (int i = 1; i <= k - 1; ++i) {
    for (int m = 1; m < d; ++m) {
      out.push_back({n - i, k - i, std::polar(1.0, kTwoPi * m / d), 1});
    }
  }
  return out;
}

double unicritical_radius(int d) { return std::pow(2.0, 1.0 / (d - 1)); }

std::vector<cplx> equipotential_seeds(int d, long long count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double shift = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double rho = 2.0 / static_cast<double>(count);
  std::vector<cplx> out(count);
  for (long long j = 0; j < count; ++j) {
    out[j] = parameter_ray_point(d, (j + shift) / static_cast<double>(count), rho);
  }
  return out;
}

}  // namespace

cplx parameter_ray_point(int d, double theta, double rho_target) {
  require(rho_target > 0, "potential must be positive");
  // Phi_M(c)^{d^m} ~ f_c^m(c) once d^m rho is moderately large.
  double rho = std::max(5.0, rho_target);
  cplx c = std::polar(std::exp(rho), kTwoPi * theta);
  const double shrink = std::pow(0.5, 0.25);
  while (true) {
    int m = 0;
    double dm = 1.0;
    while (dm * rho < 10.0) {
      dm *= d;
      ++m;
    }
    const double ang = theta * dm - std::floor(theta * dm);
    const cplx target = std::polar(std::exp(dm * rho), kTwoPi * ang);
    for (int it = 0; it < 12; ++it) {
      cplx z = c, dz = 1.0;
      for (int j = 0; j < m; ++j) {
        cplx zd1 = pow_int(z, d - 1);
        dz = static_cast<double>(d) * zd1 * dz + 1.0;
        z = zd1 * z + c;
      }
      cplx step = (z - target) / dz;
      c -= step;
      if (std::abs(step) < 1e-14 * std::abs(c)) break;
    }
    if (rho <= rho_target) break;
    rho = std::max(rho_target, rho * shrink);
  }
  return c;
}

long long PerPolynomial::degree() const { return ipow_ll(d, n - 1); }

long long RootSet::total_multiplicity() const {
  long long s = 0;
  for (const Root& r : roots) s += r.multiplicity;
  return s;
}

PerPolynomial per_poly(int d, int n, int k, long long coefficient_budget) {
  check_indices(d, n, k);
  PerPolynomial out = per_poly_implicit(d, n, k);
  if (out.degree() > coefficient_budget) {
    fail(ErrorKind::kResourceLimit, "Per polynomial degree exceeds the coefficient budget");
  }
  const IntPoly c{0, 1};
  IntPoly pj;  // p_0 = 0
  IntPoly pk;
  for (int j = 0; j < n; ++j) {
    if (j == k) pk = pj;
    IntPoly pw{1};
    for (int e = 0; e < d; ++e) pw = int_mul(pw, pj);
    if (pj.empty()) pw.clear();
    pj = int_sub(pw, IntPoly{0, -1});
  }
  out.coeffs = int_sub(pj, pk);
  return out;
}

PerPolynomial per_poly_implicit(int d, int n, int k) {
  check_indices(d, n, k);
  PerPolynomial out;
  out.d = d;
  out.n = n;
  out.k = k;
  return out;
}

OrbitEval critical_orbit(int d, int n, cplx c) {
  cplx z = 0.0, dz = 0.0;
  double err = 0.0;
  for (int j = 0; j < n; ++j) {
    cplx zd1 = pow_int(z, d - 1);
    cplx znew = zd1 * z + c;
    double azd1 = std::abs(zd1);
    err = d * azd1 * err + kEps * (d * azd1 * std::abs(z) + std::abs(znew));
    dz = static_cast<double>(d) * zd1 * dz + 1.0;
    z = znew;
  }
  return {z, dz, err};
}

cplx evaluate_per(const PerPolynomial& p, cplx c) {
  return critical_orbit(p.d, p.n, c).value - critical_orbit(p.d, p.k, c).value;
}

std::vector<int> per_squarefree_profile(int d, int n, int k) {
  check_indices(d, n, k);
  std::vector<int> agreed;
  const auto& primes = modp::ntt_primes();
  for (int t = 0; t < 2; ++t) {
    const modp::Prime pr = primes[t];
    modp::Poly pj;
    modp::Poly pk;
    for (int j = 0; j < n; ++j) {
      if (j == k) pk = pj;
      modp::Poly pw{1};
      for (int e = 0; e < d; ++e) pw = modp::mul(pw, pj, pr);
      if (pj.empty()) pw.clear();
      if (pw.size() < 2) pw.resize(2, 0);
      pw[1] = (pw[1] + 1) % pr.p;
      modp::trim(pw);
      pj = std::move(pw);
    }
    std::vector<int> prof = modp::squarefree_profile(modp::sub(pj, pk, pr.p), pr.p);
    if (t == 0) {
      agreed = prof;
    } else if (prof != agreed) {
      fail(ErrorKind::kUndecided, "square-free profiles disagree between primes");
    }
  }
  return agreed;
}

RootSet solve_roots(const PerPolynomial& p, double tol, const SolveOptions& options) {
  require(tol > 0, "tolerance must be positive");
  const int d = p.d;
  RootSet out;
  out.degree = p.degree();

  std::vector<Root> candidates;
  std::uint64_t seed = options.seed;
  for (const Factor& f : per_factors(d, p.n, p.k)) {
    const long long deg = ipow_ll(d, f.A - 1);
    auto eval = [&](cplx c) { return factor_newton(d, f.A, f.B, f.omega, c); };
    std::vector<cplx> roots;
    if (deg == 1) {
      // f^1 - w f^0 = c.
      roots.push_back(0.0);
    } else {
      AberthOptions ao;
      ao.seed = seed++;
      ao.max_sweeps = options.max_sweeps;
      ao.start_radius = 1.25 * unicritical_radius(d);
      if (options.seed_mode == SeedMode::kEquipotential) {
        ao.initial = equipotential_seeds(d, deg, ao.seed);
      }
      AberthResult ar = aberth(static_cast<int>(deg), eval, ao);
      if (!ar.all_converged) {
        out.complete = false;
        out.note = "simultaneous iteration hit its sweep budget";
      }
      roots = std::move(ar.roots);
    }
    for (cplx r : roots) {
      for (int it = 0; it < 3; ++it) {
        NewtonEval ev = eval(r);
        if (ev.value_abs <= ev.noise) break;
        r -= ev.ratio;
      }
      candidates.push_back({r, f.multiplicity, 0.0, 0.0});
    }
  }

  // Coincident roots of different factors add up their multiplicities.
  if (p.k > 0) {
    std::sort(candidates.begin(), candidates.end(),
              [](const Root& x, const Root& y) { return x.value.real() < y.value.real(); });
    std::vector<Root> merged;
    std::vector<char> used(candidates.size(), 0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      if (used[i]) continue;
      Root r = candidates[i];
      const double mtol = 1e-7 * (1.0 + std::abs(r.value));
      for (std::size_t j = i + 1; j < candidates.size(); ++j) {
        if (candidates[j].value.real() - r.value.real() > mtol) break;
        if (!used[j] && std::abs(candidates[j].value - r.value) <= mtol) {
          used[j] = 1;
          r.multiplicity += candidates[j].multiplicity;
        }
      }
      merged.push_back(r);
    }
    candidates = std::move(merged);
  }

  for (Root& r : candidates) {
    OrbitEval a = critical_orbit(d, p.n, r.value);
    OrbitEval b = critical_orbit(d, p.k, r.value);
    r.residual = std::abs(a.value - b.value);
    r.condition = (a.noise + b.noise) / kEps;
    out.residual_bound = std::max(out.residual_bound, r.residual);
    if (r.residual > tol * std::max(r.condition, 1.0)) {
      out.complete = false;
      out.note = "residual above tolerance times condition estimate";
    }
  }
  out.roots = std::move(candidates);

  if (out.degree <= options.modular_check_budget) {
    out.modular_profile = per_squarefree_profile(d, p.n, p.k);
    std::map<int, int> counted;
    for (const Root& r : out.roots) counted[r.multiplicity]++;
    std::map<int, int> expected;
    for (std::size_t i = 0; i < out.modular_profile.size(); ++i) {
      if (out.modular_profile[i] > 0) expected[static_cast<int>(i) + 1] = out.modular_profile[i];
    }
    if (counted != expected) {
      out.complete = false;
      out.note = "multiplicities disagree with the square-free decomposition";
    }
  }
  return out;
}

RootSet strict_preper_roots(int d, int n, int k, double tol, const SolveOptions& options) {
  require(k >= 1, "strictly preperiodic roots need k >= 1");
  RootSet all = solve_roots(per_poly_implicit(d, n, k), tol, options);
  RootSet out = all;
  out.roots.clear();
  out.residual_bound = 0.0;
  for (const Root& r : all.roots) {
    NewtonEval ev = factor_newton(d, k, 0, 0.0, r.value);
    const bool periodic_k = ev.value_abs <= std::max(ev.noise, 1e3 * tol) ||
                            std::abs(ev.ratio) <= 1e-9 * (1.0 + std::abs(r.value));
    if (periodic_k) continue;
    out.roots.push_back(r);
    out.residual_bound = std::max(out.residual_bound, r.residual);
  }
  out.degree = out.total_multiplicity();
  return out;
}

const char* to_string(MisiurewiczKind kind) {
  switch (kind) {
    case MisiurewiczKind::kMisiurewicz: return "misiurewicz";
    case MisiurewiczKind::kCriticallyFiniteHyperbolic: return "critically-finite-hyperbolic";
    case MisiurewiczKind::kNotDetected: return "not-detected";
  }
  return "?";
}

MisiurewiczRecord misiurewicz_classify(const ParamPoint& p, double tol, int budget) {
  require(tol > 0 && budget >= 1, "invalid tolerance or budget");
  const MarkedPolynomial poly = p.polynomial();
  MisiurewiczRecord rec;
  bool all_strict = true, all_periodic = true, all_detected = true, all_repelling = true;
  for (cplx crit : poly.critical_points()) {
    std::vector<cplx> orbit{crit};
    for (int j = 0; j < budget; ++j) {
      if (std::abs(orbit.back()) > poly.escape_radius()) break;
      orbit.push_back(poly(orbit.back()));
    }
    CriticalOrbitClass cls;
    const int len = static_cast<int>(orbit.size()) - 1;
    for (int total = 1; total <= len && !cls.detected; ++total) {
      for (int q = 1; q <= total; ++q) {
        const int l = total - q;
        if (std::abs(orbit[l + q] - orbit[l]) <= tol * (1.0 + std::abs(orbit[l]))) {
          cls.detected = true;
          cls.preperiod = l;
          cls.period = q;
          cplx m = 1.0;
          for (int j = l; j < l + q; ++j) m *= poly.derivative(orbit[j]);
          cls.multiplier = m;
          break;
        }
      }
    }
    all_detected = all_detected && cls.detected;
    all_strict = all_strict && cls.detected && cls.preperiod > 0;
    all_periodic = all_periodic && cls.detected && cls.preperiod == 0;
    all_repelling = all_repelling && std::abs(cls.multiplier) > 1.0 + tol;
    rec.per_critical.push_back(cls);
  }
  if (all_detected && all_strict && all_repelling) {
    rec.kind = MisiurewiczKind::kMisiurewicz;
  } else if (all_detected && all_periodic) {
    rec.kind = MisiurewiczKind::kCriticallyFiniteHyperbolic;
  }
  return rec;
}

MisiurewiczRecord misiurewicz_classify_unicritical(int d, cplx c, double tol, int budget) {
  return misiurewicz_classify(from_unicritical(d, c), tol, budget);
}

namespace {

// P(z) = z^3/3 - c z^2/2 + s, with forward derivatives in c and s.
struct Jet {
  cplx v, dc, ds;
};

Jet cubic_step(const Jet& z, cplx c, cplx s) {
  const cplx z2 = z.v * z.v;
  const cplx dp = z2 - c * z.v;  // P'(z)
  return {z2 * z.v / 3.0 - c * z2 / 2.0 + s, dp * z.dc - z2 / 2.0, dp * z.ds + 1.0};
}

struct CubicSystem {
  cplx f1, f2;
  cplx j11, j12, j21, j22;
};

CubicSystem cubic_system(int n0, int n1, cplx c, cplx s) {
  Jet z{0.0, 0.0, 0.0};
  for (int j = 0; j < n0; ++j) z = cubic_step(z, c, s);
  Jet w{c, 1.0, 0.0};
  for (int j = 0; j < n1; ++j) w = cubic_step(w, c, s);
  return {z.v, w.v - c, z.dc, z.ds, w.dc - 1.0, w.ds};
}

}  // namespace

std::pair<cplx, cplx> centers_residual(int n0, int n1, cplx c1, cplx s) {
  CubicSystem sys = cubic_system(n0, n1, c1, s);
  return {sys.f1, sys.f2};
}

CentersResult centers_2d(int d, int n0, int n1, double tol, const CentersOptions& options) {
  require(d == 3, "centers_2d supports d = 3 only");
  require(n0 >= 1 && n1 >= 1 && n0 <= options.max_n && n1 <= options.max_n,
          "n0, n1 outside the configured cap");
  CentersResult out;
  out.bezout_bound = ipow_ll(3, n0 + n1 - 1);

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto disk = [&](double radius) {
    return std::polar(radius * std::sqrt(unif(rng)), kTwoPi * unif(rng));
  };
  auto norm = [](const CubicSystem& s) { return std::hypot(std::abs(s.f1), std::abs(s.f2)); };

  int quiet_batches = 0;
  bool last_batch_found = true;
  while (out.starts_used < options.max_starts) {
    int found_in_batch = 0;
    for (int b = 0; b < options.batch; ++b, ++out.starts_used) {
      cplx c = disk(4.0), s = disk(30.0);
      CubicSystem sys = cubic_system(n0, n1, c, s);
      double r = norm(sys);
      bool ok = false;
      for (int it = 0; it < 200; ++it) {
        cplx det = sys.j11 * sys.j22 - sys.j12 * sys.j21;
        if (std::abs(det) == 0.0) break;
        cplx dc = (sys.f1 * sys.j22 - sys.f2 * sys.j12) / det;
        cplx ds = (sys.j11 * sys.f2 - sys.j21 * sys.f1) / det;
        double lam = 1.0;
        CubicSystem trial;
        double rt = 0.0;
        for (int h = 0; h < 30; ++h, lam *= 0.5) {
          trial = cubic_system(n0, n1, c - lam * dc, s - lam * ds);
          rt = norm(trial);
          if (std::isfinite(rt) && rt < r) break;
        }
        if (!(std::isfinite(rt) && rt < r)) break;
        c -= lam * dc;
        s -= lam * ds;
        sys = trial;
        r = rt;
        const double step = std::abs(lam * dc) + std::abs(lam * ds);
        if (lam == 1.0 && step <= 1e-15 * (1 + std::abs(c) + std::abs(s))) {
          ok = true;
          break;
        }
        if (std::abs(c) > 64 || std::abs(s) > 4096) break;
      }
      if (!ok && r > tol * 1e-3) continue;
      bool dup = false;
      for (const auto& [c0, s0] : out.cs_solutions) {
        if (std::abs(c0 - c) + std::abs(s0 - s) <=
            options.dedupe_tol * (1 + std::abs(c) + std::abs(s))) {
          dup = true;
          break;
        }
      }
      if (!dup) {
        out.cs_solutions.emplace_back(c, s);
        ++found_in_batch;
      }
    }
    last_batch_found = found_in_batch > 0;
    quiet_batches = last_batch_found ? 0 : quiet_batches + 1;
    if (out.starts_used >= options.min_starts && quiet_batches >= 3) break;
  }
  out.complete = !last_batch_found;

  for (const auto& [c, s] : out.cs_solutions) {
    auto [r1, r2] = centers_residual(n0, n1, c, s);
    out.max_residual = std::max({out.max_residual, std::abs(r1), std::abs(r2)});
    if (std::abs(s) <= 1e-10) {
      out.points.push_back({3, {c}, 0.0});
    } else {
      const cplx root = std::exp(std::log(s) / 3.0);
      for (int m = 0; m < 3; ++m) {
        out.points.push_back({3, {c}, root * std::polar(1.0, kTwoPi * m / 3)});
      }
    }
  }
  return out;
}

}  // namespace bifurlab
