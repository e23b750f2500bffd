#include "bifurlab/rays.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bifurlab/error.hpp"

namespace bifurlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double lambda_of(int d) { return std::pow(static_cast<double>(d), -1.0 / (d - 1)); }

// frac(d^m * alpha), exact for exact angles.
double scaled_phase(const Angle& a, int d, int m) {
  if (a.is_exact()) {
    mpz_class dm;
    mpz_ui_pow_ui(dm.get_mpz_t(), d, m);
    return Angle::exact(a.rational() * dm).value();
  }
  long double x = a.value();
  for (int i = 0; i < m; ++i) {
    x *= d;
    x -= std::floor(x);
  }
  return static_cast<double>(x);
}

// Far potential at which phi(w) = lambda (w - delta) holds to double precision:
// the next term is O(A^2 / w^2) relative.
double far_potential(double A) { return 20.0 + std::log1p(A); }

// Smallest m >= 0 with d^m * g >= far_potential.
int level_for(double g, int d, double A) {
  const double need = far_potential(A);
  int m = 0;
  double x = g;
  while (x < need) {
    x *= d;
    ++m;
    require(m < 4000, "potential too small for the far approximation");
  }
  return m;
}

// log of the far inverse Boettcher map at potential G and phase theta.
cplx far_target(int d, double G, double theta, cplx delta) {
  const cplx T = std::exp(cplx(G, kTwoPi * theta));
  return T / lambda_of(d) + delta;
}

// ---------------------------------------------------------------- rays

// Solves phi(z) = exp(rho + 2 pi i angle) by Newton from z. On success also
// returns dz/drho, which the level-m equation gives as d^m (P^m(z) - delta) /
// (P^m)'(z).
bool ray_newton(const MarkedPolynomial& p, cplx& z, double rho, const Angle& angle,
                cplx* tangent = nullptr) {
  const int d = p.degree();
  const int m = level_for(rho, d, p.param_bound());
  const double dm = std::pow(static_cast<double>(d), m);
  const cplx target = far_target(d, rho * dm, scaled_phase(angle, d, m), p.delta());
  cplx x = z;
  double last = kInf;
  cplx w, dw;
  bool done = false;
  for (int it = 0; it < 60 && !done; ++it) {
    w = x;
    dw = 1.0;
    for (int j = 0; j < m; ++j) {
      dw *= p.derivative(w);
      w = p(w);
    }
    if (!std::isfinite(std::abs(w)) || std::abs(dw) == 0.0) return false;
    const cplx F = std::log(w / target);
    const cplx step = F / (dw / w);
    x -= step;
    if (!std::isfinite(std::abs(x))) return false;
    done = std::abs(step) <= 1e-15 * (1.0 + std::abs(x)) || std::abs(F) < 1e-15;
    last = std::abs(F);
  }
  // Near a critical point the equation is ill-conditioned and Newton wanders
  // at rounding level.
  if (!done && last >= 1e-11) return false;
  z = x;
  if (tangent) *tangent = dm * (w - p.delta()) / dw;
  return true;
}

// ---------------------------------------------------------------- Goldberg

// Marked polynomial in the unknowns x = (c_1, ..., c_{d-2}, s), s = a^d, with
// the derivatives of P with respect to each unknown.
struct Family {
  int d;
  std::vector<cplx> c;
  cplx s;
  std::vector<cplx> coef;                 // P, constant first
  std::vector<cplx> dcoef;                // P'
  std::vector<std::vector<cplx>> dparam;  // dP/dc_k

  Family(int d_, const std::vector<cplx>& x) : d(d_) {
    c.assign(x.begin(), x.end() - 1);
    s = x.back();
    std::vector<cplx> roots{0.0};
    roots.insert(roots.end(), c.begin(), c.end());
    std::vector<cplx> q = expand_roots(roots);  // P' = z prod (z - c_i)
    dcoef = q;
    coef.assign(d + 1, 0.0);
    coef[0] = s;
    for (std::size_t j = 0; j < q.size(); ++j) coef[j + 1] = q[j] / static_cast<double>(j + 1);
    for (std::size_t k = 0; k < c.size(); ++k) {
      std::vector<cplx> rr{0.0};
      for (std::size_t i = 0; i < c.size(); ++i) {
        if (i != k) rr.push_back(c[i]);
      }
      std::vector<cplx> r = expand_roots(rr);
      std::vector<cplx> dp(d + 1, 0.0);
      for (std::size_t j = 0; j < r.size(); ++j) dp[j + 1] = -r[j] / static_cast<double>(j + 1);
      dparam.push_back(std::move(dp));
    }
  }

  cplx P(cplx z) const { return horner(coef, z); }
  cplx dP(cplx z) const { return horner(dcoef, z); }
  cplx delta() const {
    cplx t = 0.0;
    for (cplx ci : c) t += ci;
    return t / static_cast<double>(d - 1);
  }
  double bound() const {
    double A = std::pow(std::abs(s), 1.0 / d);
    for (cplx ci : c) A = std::max(A, std::abs(ci));
    return A;
  }
  std::vector<cplx> critical_points() const {
    std::vector<cplx> pts{0.0};
    pts.insert(pts.end(), c.begin(), c.end());
    return pts;
  }
};

cplx principal_root(cplx s, int d) {
  if (s == cplx(0.0)) return 0.0;
  return std::polar(std::pow(std::abs(s), 1.0 / d), std::arg(s) / d);
}

ParamPoint to_point(int d, const std::vector<cplx>& x, std::optional<cplx> near = {}) {
  ParamPoint p;
  p.d = d;
  p.c.assign(x.begin(), x.end() - 1);
  cplx a = principal_root(x.back(), d);
  if (near) {
    cplx best = a;
    for (int j = 1; j < d; ++j) {
      cplx cand = a * std::polar(1.0, kTwoPi * j / d);
      if (std::abs(cand - *near) < std::abs(best - *near)) best = cand;
    }
    a = best;
  }
  p.a = a;
  return p;
}

// Solves A y = b for a small dense complex system by Gaussian elimination.
bool solve_small(std::vector<std::vector<cplx>> A, std::vector<cplx>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    }
    if (std::abs(A[piv][col]) == 0.0) return false;
    std::swap(A[piv], A[col]);
    std::swap(b[piv], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      cplx f = A[r][col] / A[col][col];
      for (std::size_t k = col; k < n; ++k) A[r][k] -= f * A[col][k];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t col = n; col-- > 0;) {
    for (std::size_t k = col + 1; k < n; ++k) b[col] -= A[col][k] * b[k];
    b[col] /= A[col][col];
  }
  return true;
}

struct Equations {
  int d;
  std::vector<Angle> alpha;  // one angle of theta_i per critical point
};

// F_i = log(P^m(v_i) / Psi(exp(d^m (d r + 2 pi i d alpha_i)))) and its
// Jacobian; returns max |F_i| / d^m, or +inf on overflow.
double evaluate(const Equations& eq, const std::vector<cplx>& x, double r,
                std::vector<cplx>& F, std::vector<std::vector<cplx>>& J) {
  const int d = eq.d;
  const std::size_t n = x.size();
  Family fam(d, x);
  const int m = level_for(d * r, d, fam.bound());
  const double dm = std::pow(static_cast<double>(d), m);
  const cplx delta = fam.delta();
  F.assign(n, 0.0);
  J.assign(n, std::vector<cplx>(n, 0.0));
  const auto crit = fam.critical_points();
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cplx w = fam.P(crit[i]);
    std::vector<cplx> dw(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) dw[k] = horner(fam.dparam[k], crit[i]);
    dw[n - 1] = 1.0;
    for (int j = 0; j < m; ++j) {
      const cplx dp = fam.dP(w);
      for (std::size_t k = 0; k + 1 < n; ++k) dw[k] = dp * dw[k] + horner(fam.dparam[k], w);
      dw[n - 1] = dp * dw[n - 1] + 1.0;
      w = fam.P(w);
    }
    if (!std::isfinite(std::abs(w))) return kInf;
    const double theta = scaled_phase(eq.alpha[i], d, m + 1);
    const cplx target = far_target(d, dm * d * r, theta, delta);
    F[i] = std::log(w / target);
    for (std::size_t k = 0; k < n; ++k) {
      const double ddelta = (k + 1 < n) ? 1.0 / (d - 1) : 0.0;
      J[i][k] = dw[k] / w - ddelta / target;
    }
    worst = std::max(worst, std::abs(F[i]) / dm);
  }
  return worst;
}

// Damped Newton; on success x holds the solution and the scaled residual is
// returned through `residual`.
bool newton(const Equations& eq, std::vector<cplx>& x, double r, double& residual) {
  std::vector<cplx> F;
  std::vector<std::vector<cplx>> J;
  double res = evaluate(eq, x, r, F, J);
  if (!std::isfinite(res)) return false;
  for (int it = 0; it < 60; ++it) {
    std::vector<cplx> step = F;
    if (!solve_small(J, step)) return false;
    double scale = 0.0, size = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      scale = std::max(scale, std::abs(x[k]));
      size = std::max(size, std::abs(step[k]));
    }
    double t = 1.0;
    bool moved = false;
    for (int h = 0; h < 30; ++h, t *= 0.5) {
      std::vector<cplx> trial = x;
      for (std::size_t k = 0; k < x.size(); ++k) trial[k] -= t * step[k];
      std::vector<cplx> F2;
      std::vector<std::vector<cplx>> J2;
      double res2 = evaluate(eq, trial, r, F2, J2);
      double n1 = 0.0, n2 = 0.0;
      for (std::size_t k = 0; k < F.size(); ++k) {
        n1 = std::max(n1, std::abs(F[k]));
        n2 = std::max(n2, std::abs(F2[k]));
      }
      if (std::isfinite(res2) && (n2 < n1 || n2 < 1e-12)) {
        x = trial;
        F = F2;
        J = J2;
        res = res2;
        moved = true;
        break;
      }
    }
    if (size * t <= 1e-15 * (1.0 + scale) || res < 1e-15) {
      residual = res;
      return true;
    }
    if (!moved) {
      residual = res;
      return res < 1e-10;
    }
  }
  residual = res;
  return res < 1e-10;
}

double circ_dist(double a, double b) {
  double x = std::abs(a - b);
  x -= std::floor(x);
  return std::min(x, 1.0 - x);
}

// How well the rays of theta land on the marked critical points; smaller is
// better. Each ray is followed down to just above the critical level and its
// end is compared against all critical points.
double portrait_mismatch(const MarkedPolynomial& p, const CriticalPortrait& theta, double r) {
  const auto crit = p.critical_points();
  double worst = 0.0;
  for (std::size_t i = 0; i < crit.size(); ++i) {
    for (const Angle& a : theta.sets[i]) {
      const double stop = r * (1.0 + 1e-6);
      RayTrace ray = trace_dynamical_ray(p, a, stop, stop, 1);
      if (ray.points.empty()) return kInf;
      const cplx z = ray.points.back().point;
      double other = kInf;
      for (std::size_t j = 0; j < crit.size(); ++j) {
        if (j != i) other = std::min(other, std::abs(z - crit[j]));
      }
      worst = std::max(worst, std::abs(z - crit[i]) / other);
    }
  }
  return worst;
}

std::vector<std::vector<cplx>> seeds(int d, const Equations& eq, double r0) {
  const double lam = lambda_of(d);
  std::vector<cplx> T;
  for (const Angle& a : eq.alpha) T.push_back(std::exp(cplx(d * r0, kTwoPi * a.times(d).value())));
  std::vector<std::vector<cplx>> out;
  if (d == 2) {
    out.push_back({T[0] / lam});
  } else {
    // lambda (s - c/2) = T_0 and lambda (s - c^3/6 - c/2) = T_1.
    const cplx c3 = 6.0 * (T[0] - T[1]) / lam;
    const cplx c0 = principal_root(c3, 3);
    for (int j = 0; j < 3; ++j) {
      const cplx c = c0 * std::polar(1.0, kTwoPi * j / 3);
      out.push_back({c, T[0] / lam + c / 2.0});
    }
  }
  return out;
}

// Parameter-space scaling of the unknowns at large potential: c ~ e^r, s ~ e^{dr}.
std::vector<cplx> rescale(const std::vector<cplx>& x, int d, double dr) {
  std::vector<cplx> y = x;
  for (std::size_t k = 0; k + 1 < y.size(); ++k) y[k] *= std::exp(dr);
  y.back() *= std::exp(d * dr);
  return y;
}

struct Continuation {
  Equations eq;
  std::vector<cplx> x;
  double r;
  double residual = 0.0;
  std::vector<std::string>* trace;

  // Moves from r to target through log-steps of at most |log ratio|. A step
  // is rejected when the Newton correction is not small next to the step
  // itself: the equations only see the angles modulo d^{-m-1}, and
  // neighbouring branches crowd together near the connectedness locus.
  bool advance(double target, double ratio) {
    const double max_log = std::abs(std::log(ratio));
    int halvings = 0;
    while (r != target) {
      double lr = std::log(target / r);
      double step = std::clamp(lr, -max_log, max_log) * std::pow(0.5, halvings);
      double r_next = (std::abs(step) >= std::abs(lr)) ? target : r * std::exp(step);
      const std::vector<cplx> predicted = predict(r_next);
      std::vector<cplx> trial = predicted;
      double res = 0.0;
      if (newton(eq, trial, r_next, res) &&
          correction(predicted, trial) <= 0.05 * correction(x, trial) + 1e-10) {
        prev_x = x;
        prev_r = r;
        x = trial;
        r = r_next;
        residual = res;
        if (halvings > 0) --halvings;
      } else if (++halvings > 40) {
        if (trace) {
          std::ostringstream os;
          os << "continuation stalled at r = " << r << " toward " << target;
          trace->push_back(os.str());
        }
        return false;
      }
    }
    return true;
  }

  std::vector<cplx> prev_x;
  double prev_r = 0.0;

  // Secant in log r on the scaled unknowns (c e^{-r}, s e^{-dr}), which are
  // nearly constant far from the locus.
  std::vector<cplx> predict(double r_next) const {
    std::vector<cplx> y = rescale(x, eq.d, r_next - r);
    if (prev_x.empty()) return y;
    const double t = std::log(r_next / r) / std::log(r / prev_r);
    const std::vector<cplx> z = rescale(prev_x, eq.d, r_next - prev_r);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] += t * (y[k] - z[k]);
    return y;
  }

  double correction(const std::vector<cplx>& a, const std::vector<cplx>& b) const {
    double A = std::pow(std::abs(b.back()), 1.0 / eq.d);
    for (std::size_t k = 0; k + 1 < b.size(); ++k) A = std::max(A, std::abs(b[k]));
    A = std::max(A, 1e-3);
    double worst = std::abs(a.back() - b.back()) / std::pow(A, eq.d);
    for (std::size_t k = 0; k + 1 < b.size(); ++k) worst = std::max(worst, std::abs(a[k] - b[k]) / A);
    return worst;
  }
};

bool branch_ok(const Equations& eq, const std::vector<cplx>& x, double r, std::string& why) {
  const int d = eq.d;
  const ParamPoint pp = to_point(d, x);
  const MarkedPolynomial poly = pp.polynomial();
  const auto crit = poly.critical_points();
  for (std::size_t i = 0; i < crit.size(); ++i) {
    const cplx v = poly(crit[i]);
    cplx phi;
    try {
      phi = bottcher_value(poly, v, 1e-9);
    } catch (const Error& e) {
      why = std::string("branch check failed: ") + e.what();
      return false;
    }
    const double want = eq.alpha[i].times(d).value();
    double got = std::arg(phi) / kTwoPi;
    if (circ_dist(got, want) > 1e-6 || std::abs(std::log(std::abs(phi)) - d * r) > 1e-6) {
      std::ostringstream os;
      os << "critical value " << i << " has Boettcher argument " << got - std::floor(got)
         << " instead of " << want;
      why = os.str();
      return false;
    }
  }
  return true;
}

std::optional<Continuation> start(const CriticalPortrait& theta, int d, double r0,
                                  std::vector<std::string>& trace) {
  Equations eq{d, {}};
  for (const auto& s : theta.sets) eq.alpha.push_back(s.front());
  double best = kInf;
  std::optional<Continuation> out;
  for (auto& x : seeds(d, eq, r0)) {
    double res = 0.0;
    if (!newton(eq, x, r0, res)) continue;
    double mismatch = 0.0;
    if (d > 2) mismatch = portrait_mismatch(to_point(d, x).polynomial(), theta, r0);
    if (mismatch < best) {
      best = mismatch;
      out = Continuation{eq, x, r0, res, &trace, {}, 0.0};
    }
  }
  if (!out || best > 0.5) {
    std::ostringstream os;
    os << "no seed at r = " << r0 << " matches the portrait (mismatch " << best << ")";
    trace.push_back(os.str());
    return std::nullopt;
  }
  return out;
}

void check_input(const CriticalPortrait& theta, int d) {
  require(d == 2 || d == 3, "goldberg_solve supports d = 2 and d = 3");
  PortraitVerdict v = validate_portrait(theta, d);
  require(v.valid, "invalid critical portrait: " + v.detail);
  require(v.in_cb0, "goldberg_solve needs a portrait in Cb_0");
}

double param_distance(const ParamPoint& p, const ParamPoint& q) {
  double s = std::abs(p.a - q.a);
  for (std::size_t k = 0; k < p.c.size(); ++k) s += std::abs(p.c[k] - q.c[k]);
  return s;
}

}  // namespace

RayTrace trace_dynamical_ray(const MarkedPolynomial& p, const Angle& angle, double r_start,
                             double r_stop, int steps) {
  require(r_start > 0 && r_stop > 0 && r_start >= r_stop, "need r_start >= r_stop > 0");
  require(steps >= 1, "need at least one sample");
  const int d = p.degree();
  RayTrace out;
  // Start where the far approximation is exact and walk down.
  double rho = std::max(r_start, far_potential(p.param_bound()));
  cplx z = far_target(d, rho, angle.value(), p.delta());
  const double sub = std::pow(static_cast<double>(d), -1.0 / 6.0);
  // Euler predictor along the exact tangent; a Newton correction that is
  // large compared to the step means a jump to a neighbouring preimage.
  cplx tangent = z - p.delta();
  auto walk_to = [&](double target) {
    int halvings = 0;
    while (rho > target) {
      double next = std::max({target, rho * sub, rho - 1.0});
      next = rho - (rho - next) * std::pow(0.5, halvings);
      const cplx pred = z + tangent * (next - rho);
      cplx trial = pred, t = tangent;
      // Near a critical point the two preimage rays approach from opposite
      // sides; a swap shows up as a reversed tangent.
      const bool ok = ray_newton(p, trial, next, angle, &t) &&
                      std::abs(trial - pred) <= 0.25 * std::abs(pred - z) + 1e-12 * (1.0 + std::abs(z)) &&
                      std::abs(std::log(t / tangent)) < 0.25;
      if (ok) {
        z = trial;
        tangent = t;
        rho = next;
        if (halvings > 0) --halvings;
      } else if (++halvings > 40) {
        return false;
      }
    }
    return true;
  };
  for (int j = 0; j < steps; ++j) {
    const double target =
        steps == 1 ? r_start : r_start * std::pow(r_stop / r_start, static_cast<double>(j) / (steps - 1));
    if (!walk_to(target) || !ray_newton(p, z, target, angle)) {
      out.truncated = true;
      break;
    }
    out.points.push_back({target, z, angle});
  }
  return out;
}

std::optional<double> doubling_defect(const MarkedPolynomial& p, const RayTrace& ray,
                                      const RayTrace& image_ray) {
  const int d = p.degree();
  std::optional<double> worst;
  for (const auto& pt : ray.points) {
    for (const auto& im : image_ray.points) {
      if (std::abs(im.r - d * pt.r) <= 1e-12 * im.r) {
        double e = std::abs(p(pt.point) - im.point);
        worst = std::max(worst.value_or(0.0), e);
      }
    }
  }
  return worst;
}

GoldbergResult goldberg_solve(const CriticalPortrait& theta, double r, int d, double tol,
                              const GoldbergOptions& options) {
  check_input(theta, d);
  require(r > 0, "potential must be positive");
  require(tol > 0, "tolerance must be positive");
  GoldbergResult out;
  double ratio = options.ratio;
  for (int attempt = 0; attempt <= options.max_refinements; ++attempt, ratio = std::sqrt(ratio)) {
    auto cont = start(theta, d, options.seed_potential, out.trace);
    if (!cont) break;
    if (!cont->advance(r, ratio)) continue;
    std::string why;
    if (options.verify_branch && !branch_ok(cont->eq, cont->x, r, why)) {
      out.trace.push_back(why + "; refining the schedule");
      continue;
    }
    out.point = to_point(d, cont->x);
    out.residual = cont->residual;
    const MarkedPolynomial poly = out.point.polynomial();
    for (cplx c : poly.critical_points()) {
      out.critical_green.push_back(green_value(poly, c, 1e-13, {.budget = 100000, .certify_bounded = false}).value);
    }
    out.converged = out.residual <= tol;
    if (!out.converged) out.trace.push_back("final residual above tolerance");
    return out;
  }
  out.trace.push_back("continuation failed");
  return out;
}

std::vector<double> geometric_schedule(double r0, double r_min, double ratio) {
  require(r0 > 0 && r_min > 0 && r_min <= r0, "need 0 < r_min <= r0");
  require(ratio > 0 && ratio < 1, "ratio must lie in (0, 1)");
  std::vector<double> out;
  for (double r = r0; r > r_min * (1 + 1e-12); r *= ratio) out.push_back(r);
  out.push_back(r_min);
  return out;
}

StretchResult stretch_ray(const CriticalPortrait& theta, int d,
                          const std::vector<double>& schedule, double tol,
                          const GoldbergOptions& options) {
  check_input(theta, d);
  require(!schedule.empty(), "empty schedule");
  require(tol > 0, "tolerance must be positive");
  for (std::size_t j = 0; j < schedule.size(); ++j) {
    require(schedule[j] > 0, "schedule potentials must be positive");
    if (j > 0) require(schedule[j] < schedule[j - 1], "schedule must be decreasing");
  }
  StretchResult out;
  auto cont = start(theta, d, std::max(options.seed_potential, schedule.front()), out.trace);
  if (!cont) return out;
  std::optional<cplx> prev_a;
  for (double r : schedule) {
    if (!cont->advance(r, options.ratio)) {
      out.trace.push_back("stretching stopped before r = " + std::to_string(r));
      break;
    }
    ParamPoint pt = to_point(d, cont->x, prev_a);
    prev_a = pt.a;
    out.path.push_back({r, pt});
  }
  if (options.verify_branch && !out.path.empty()) {
    std::string why;
    // The first schedule point is far from the locus, where the check is cheap
    // and reliable; later points inherit the branch by continuity.
    const double r_check = out.path.front().r;
    auto first = start(theta, d, std::max(options.seed_potential, schedule.front()), out.trace);
    if (first && first->advance(r_check, options.ratio) &&
        !branch_ok(first->eq, first->x, r_check, why)) {
      out.trace.push_back(why);
    }
  }
  const std::size_t n = out.path.size();
  if (n >= 9) {
    double tail = 0.0;
    for (std::size_t j = n - 8; j < n; ++j) tail += param_distance(out.path[j].point, out.path[j - 1].point);
    out.tail = tail;
    out.landed = n == schedule.size() && tail < tol;
  } else {
    out.tail = kInf;
  }
  if (n > 0) out.landing = out.path.back().point;
  out.misiurewicz_combinatorics = theta.is_exact() && misiurewicz_portrait(theta, d);
  if (out.landed && theta.is_exact()) {
    out.classification = misiurewicz_classify(out.landing, 1e-6);
  }
  return out;
}

std::string ray_csv(const RayTrace& ray) {
  std::ostringstream os;
  os.precision(17);
  os << "r,re,im\n";
  for (const auto& p : ray.points) os << p.r << ',' << p.point.real() << ',' << p.point.imag() << '\n';
  return os.str();
}

}  // namespace bifurlab
