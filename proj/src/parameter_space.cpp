#include "bifurlab/parameter_space.hpp"

#include <algorithm>
#include <cmath>

#include "bifurlab/aberth.hpp"
#include "bifurlab/error.hpp"

namespace bifurlab {

double ParamPoint::param_bound() const {
  double m = std::abs(a);
  for (cplx ck : c) m = std::max(m, std::abs(ck));
  return m;
}

const char* to_string(LocusStatus status) {
  switch (status) {
    case LocusStatus::kEscaping: return "escaping";
    case LocusStatus::kBoundedCertified: return "bounded-certified";
    case LocusStatus::kUndecided: return "undecided";
  }
  return "?";
}

bool are_equivalent(const ParamPoint& p, const ParamPoint& q, double tol) {
  require(p.d == q.d && p.c.size() == q.c.size(), "parameters of different degree");
  const int d = p.d;
  cplx ap = 1.0, aq = 1.0;
  for (int i = 0; i < d; ++i) {
    ap *= p.a;
    aq *= q.a;
  }
  for (int m = 0; m < d - 1; ++m) {
    const cplx zeta = std::polar(1.0, kTwoPi * m / (d - 1));
    bool ok = std::abs(zeta * ap - aq) <= tol;
    for (std::size_t i = 0; ok && i < p.c.size(); ++i) {
      ok = std::abs(zeta * p.c[i] - q.c[i]) <= tol;
    }
    if (ok) return true;
  }
  return false;
}

GreenValue big_green(const ParamPoint& p, double tol, const GreenOptions& options) {
  const MarkedPolynomial poly = p.polynomial();
  GreenValue out;
  out.status = GreenStatus::kBoundedCertified;
  double lo = 0.0, hi = 0.0;
  for (cplx crit : poly.critical_points()) {
    GreenValue g = green_value(poly, crit, tol, options);
    out.iterations_used = std::max(out.iterations_used, g.iterations_used);
    lo = std::max(lo, g.value - g.error_bound);
    hi = std::max(hi, g.value + g.error_bound);
    if (g.value > out.value) out.value = g.value;
    if (g.status == GreenStatus::kUndecided &&
        out.status == GreenStatus::kBoundedCertified) {
      out.status = GreenStatus::kUndecided;
    }
    if (g.escaped() && g.value - g.error_bound > 0) out.status = GreenStatus::kEscaped;
  }
  out.error_bound = std::max(out.value - std::max(lo, 0.0), hi - out.value);
  return out;
}

LocusVerdict locus_test(const ParamPoint& p, int budget, double tol) {
  LocusVerdict v;
  if (p.param_bound() > compactness_radius()) {
    v.status = LocusStatus::kEscaping;
    v.a_priori = true;
    return v;
  }
  const MarkedPolynomial poly = p.polynomial();
  bool all_bounded = true;
  bool any_escape = false;
  for (cplx crit : poly.critical_points()) {
    GreenValue g = green_value(poly, crit, tol, {.budget = budget, .certify_bounded = true});
    v.per_critical.push_back(g);
    if (g.escaped() && g.value > g.error_bound) any_escape = true;
    if (!g.bounded()) all_bounded = false;
  }
  v.status = any_escape     ? LocusStatus::kEscaping
             : all_bounded  ? LocusStatus::kBoundedCertified
                            : LocusStatus::kUndecided;
  return v;
}

double lyapunov(const ParamPoint& p, double tol, const GreenOptions& options) {
  const MarkedPolynomial poly = p.polynomial();
  double sum = std::log(static_cast<double>(p.d));
  for (cplx crit : poly.critical_points()) {
    GreenValue g = green_value(poly, crit, tol, options);
    // An undecided orbit still encloses g in [0, error_bound].
    if (g.error_bound > tol) {
      fail(ErrorKind::kUndecided, "critical Green value not enclosed within tolerance");
    }
    sum += g.value;
  }
  return sum;
}

ParamPoint from_unicritical(int d, cplx c) {
  require(d >= 2, "degree must be at least 2");
  const double lambda = std::pow(static_cast<double>(d), 1.0 / (d - 1));
  ParamPoint p;
  p.d = d;
  p.c.assign(d - 2, 0.0);
  cplx s = lambda * c;
  p.a = (s == cplx(0.0)) ? cplx(0.0) : std::exp(std::log(s) / static_cast<double>(d));
  return p;
}

cplx to_unicritical(const ParamPoint& p) {
  for (cplx ck : p.c) require(ck == cplx(0.0), "not a unicritical parameter");
  const double lambda = std::pow(static_cast<double>(p.d), 1.0 / (p.d - 1));
  cplx s = 1.0;
  for (int i = 0; i < p.d; ++i) s *= p.a;
  return s / lambda;
}

MarkedConjugacy to_marked(std::span<const cplx> coeffs) {
  std::size_t n = coeffs.size();
  while (n > 0 && coeffs[n - 1] == cplx(0.0)) --n;
  require(n >= 3, "need degree at least 2");
  const int d = static_cast<int>(n) - 1;
  const cplx lead = coeffs[d];

  std::vector<cplx> deriv(d);
  for (int k = 1; k <= d; ++k) deriv[k - 1] = coeffs[k] * static_cast<double>(k);
  std::vector<cplx> crit;
  if (d == 2) {
    crit.push_back(-deriv[0] / deriv[1]);
  } else {
    AberthResult r = polynomial_roots(deriv);
    require(r.all_converged, "critical points did not converge");
    crit = r.roots;
  }
  const cplx z0 = crit[0];
  const cplx lambda = std::exp(std::log(lead * static_cast<double>(d)) / static_cast<double>(d - 1));

  MarkedConjugacy out;
  out.z0 = z0;
  out.lambda = lambda;
  out.point.d = d;
  for (std::size_t i = 1; i < crit.size(); ++i) out.point.c.push_back(lambda * (crit[i] - z0));
  cplx q0 = horner(coeffs.first(n), z0);
  cplx s = lambda * (q0 - z0);
  out.point.a = (s == cplx(0.0)) ? cplx(0.0) : std::exp(std::log(s) / static_cast<double>(d));
  return out;
}

}  // namespace bifurlab
