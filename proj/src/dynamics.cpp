#include "bifurlab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bifurlab/error.hpp"

namespace bifurlab {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

cplx ipow(cplx z, int n) {
  cplx r = 1.0;
  for (int i = 0; i < n; ++i) r *= z;
  return r;
}

// rho_star(d) solves perturbation_bound(d, rho) = 1/2.
double rho_star(int d) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (perturbation_bound(d, mid) < 0.5) lo = mid; else hi = mid;
  }
  return lo;
}

// Past this modulus one more step of P could overflow a double.
double overflow_guard(int d) {
  return std::min(1e100, std::pow(1e290, 1.0 / d));
}

// d P(w) / w^d evaluated in u = 1/w so that large w never overflows.
cplx normalized_ratio(const MarkedPolynomial& p, cplx w) {
  const auto& c = p.coeffs();
  const int d = p.degree();
  cplx u = 1.0 / w;
  cplx acc = 0.0;
  for (int j = 0; j <= d; ++j) acc = acc * u + c[j];  // sum c_j u^{d-j}
  return acc * static_cast<double>(d);
}

// Midpoint-radius disk arithmetic, used to prove P^p maps a disk into itself.
struct Disk {
  cplx c;
  double r;
};

constexpr double kUlp = std::numeric_limits<double>::epsilon();

Disk operator+(Disk x, Disk y) {
  cplx c = x.c + y.c;
  return {c, x.r + y.r + 2 * kUlp * std::abs(c)};
}

Disk operator*(Disk x, Disk y) {
  cplx c = x.c * y.c;
  double r = std::abs(x.c) * y.r + std::abs(y.c) * x.r + x.r * y.r;
  return {c, r + 4 * kUlp * std::abs(c)};
}

Disk eval_disk(std::span<const cplx> coeffs, Disk z) {
  Disk acc{coeffs.back(), 0.0};
  for (std::size_t k = coeffs.size() - 1; k-- > 0;) {
    acc = acc * z + Disk{coeffs[k], 0.0};
  }
  return acc;
}

// Tries to prove that the tail of the orbit is captured by an attracting
// cycle: refine a cycle point by Newton, check the multiplier, then find a
// disk around it that P^p maps strictly inside itself and that contains an
// orbit point.
bool certify_attracting_cycle(const MarkedPolynomial& p,
                              const std::vector<cplx>& orbit) {
  const int n = static_cast<int>(orbit.size()) - 1;
  if (n < 2) return false;
  const int max_period = std::min(64, n / 2);
  const cplx last = orbit[n];
  for (int period = 1; period <= max_period; ++period) {
    if (std::abs(last - orbit[n - period]) > 1e-7 * (1.0 + std::abs(last))) {
      continue;
    }
    cplx w = last;
    cplx mult = 0.0;
    for (int it = 0; it < 60; ++it) {
      cplx v = w, dv = 1.0;
      for (int k = 0; k < period; ++k) {
        dv *= p.derivative(v);
        v = p(v);
      }
      mult = dv;
      cplx denom = dv - 1.0;
      if (std::abs(denom) == 0.0) break;
      cplx step = (v - w) / denom;
      w -= step;
      if (std::abs(step) <= 4 * kUlp * (1.0 + std::abs(w))) break;
    }
    if (!(std::abs(mult) < 1.0 - 1e-9)) continue;

    double closest = std::numeric_limits<double>::infinity();
    for (int k = n; k >= std::max(0, n - period); --k) {
      closest = std::min(closest, std::abs(orbit[k] - w));
    }
    const auto& coeffs = p.coeffs();
    for (double rad = 0.1 * (1.0 + std::abs(w)); rad > 1e-14 * (1.0 + std::abs(w));
         rad *= 0.3) {
      if (closest >= rad) break;
      Disk img{w, rad};
      for (int k = 0; k < period; ++k) img = eval_disk(coeffs, img);
      if (std::abs(img.c - w) + img.r < rad) return true;
    }
  }
  return false;
}

// Boettcher coordinate by the product formula; valid for |w| >= bottcher
// radius, where each factor d P(w_j)/w_j^d lies in the disk |x - 1| <= 1/2.
cplx bottcher_far(const MarkedPolynomial& p, cplx w) {
  const int d = p.degree();
  const double scale = std::pow(static_cast<double>(d), -1.0 / (d - 1));
  const double guard = overflow_guard(d);
  const cplx w0 = w;
  cplx log_sum = 0.0;
  double weight = 1.0 / d;
  for (int j = 0; j < 2000; ++j) {
    cplx f = normalized_ratio(p, w);
    cplx term = std::log(f) * weight;
    log_sum += term;
    if (std::abs(term) < 1e-19 || std::abs(w) > guard) break;
    w = p(w);
    weight /= d;
  }
  return scale * w0 * std::exp(log_sum);
}

}  // namespace

double coefficient_constant(int d) {
  require(d >= 2, "degree must be at least 2");
  double c = 1.0 + 1.0 / d;
  for (int j = 2; j <= d - 1; ++j) c += binomial(d - 2, j - 2) / j;
  return c;
}

double perturbation_bound(int d, double rho) {
  double s = std::pow(rho, d);
  for (int k = 1; k <= d - 2; ++k) {
    s += binomial(d - 2, k) / (d - k) * std::pow(rho, k);
  }
  return d * s;
}

double growth_constant(int d) {
  return std::log(8.0) + std::log(coefficient_constant(d)) / (d - 1);
}

double compactness_radius() { return 8.0; }

MarkedPolynomial::MarkedPolynomial(int degree, std::vector<cplx> crit_params,
                                   cplx a)
    : degree_(degree), crit_params_(std::move(crit_params)), a_(a) {
  require(degree_ >= 2, "degree must be at least 2");
  require(static_cast<int>(crit_params_.size()) == degree_ - 2,
          "expected d-2 critical parameters");
  bool finite = std::isfinite(a_.real()) && std::isfinite(a_.imag());
  for (cplx c : crit_params_) {
    finite = finite && std::isfinite(c.real()) && std::isfinite(c.imag());
  }
  require(finite, "parameters must be finite");

  // P'(z) = z prod (z - c_i) = sum e_k z^{k+1}, hence P = sum e_k z^{k+2}/(k+2).
  std::vector<cplx> e = expand_roots(crit_params_);
  coeffs_.assign(degree_ + 1, 0.0);
  coeffs_[0] = ipow(a_, degree_);
  for (int j = 2; j <= degree_; ++j) coeffs_[j] = e[j - 2] / static_cast<double>(j);
  coeffs_[degree_] = 1.0 / degree_;

  param_bound_ = std::abs(a_);
  for (cplx c : crit_params_) param_bound_ = std::max(param_bound_, std::abs(c));
  escape_radius_ = std::max(param_bound_ / rho_star(degree_),
                            std::pow(4.0 * degree_, 1.0 / (degree_ - 1)));
}

std::vector<cplx> MarkedPolynomial::critical_points() const {
  std::vector<cplx> pts{0.0};
  pts.insert(pts.end(), crit_params_.begin(), crit_params_.end());
  return pts;
}

cplx MarkedPolynomial::operator()(cplx z) const { return horner(coeffs_, z); }

cplx MarkedPolynomial::derivative(cplx z) const {
  cplx r = z;
  for (cplx c : crit_params_) r *= (z - c);
  return r;
}

cplx MarkedPolynomial::delta() const {
  cplx s = 0.0;
  for (cplx c : crit_params_) s += c;
  return s / static_cast<double>(degree_ - 1);
}

double MarkedPolynomial::bottcher_radius() const {
  return escape_radius_ * std::pow(3.0, 1.0 / (degree_ - 1)) * (1.0 + 1e-12);
}

MarkedPolynomial build_polynomial(int d, std::span<const cplx> crit_params,
                                  cplx a) {
  return MarkedPolynomial(d, {crit_params.begin(), crit_params.end()}, a);
}

cplx evaluate(const MarkedPolynomial& p, cplx z) { return p(z); }

std::vector<cplx> expand_roots(std::span<const cplx> roots) {
  std::vector<cplx> e{1.0};
  for (cplx r : roots) {
    std::vector<cplx> next(e.size() + 1, 0.0);
    for (std::size_t k = 0; k < e.size(); ++k) {
      next[k + 1] += e[k];
      next[k] -= r * e[k];
    }
    e = std::move(next);
  }
  return e;
}

cplx horner(std::span<const cplx> coeffs, cplx z) {
  cplx acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * z + coeffs[k];
  return acc;
}

OrbitRecord iterate(const MarkedPolynomial& p, cplx z, int n_max,
                    double escape_radius) {
  require(n_max >= 0, "n_max must be nonnegative");
  require(escape_radius > 0, "escape radius must be positive");
  OrbitRecord rec;
  rec.start = z;
  rec.escape_radius = escape_radius;
  rec.points.push_back(z);
  if (std::abs(z) > escape_radius) {
    rec.escaped_at = 0;
    return rec;
  }
  for (int j = 1; j <= n_max; ++j) {
    z = p(z);
    rec.points.push_back(z);
    if (std::abs(z) > escape_radius) {
      rec.escaped_at = j;
      break;
    }
  }
  return rec;
}

const char* to_string(GreenStatus status) {
  switch (status) {
    case GreenStatus::kEscaped: return "escaped";
    case GreenStatus::kBoundedCertified: return "bounded-certified";
    case GreenStatus::kUndecided: return "undecided";
  }
  return "?";
}

GreenValue green_value(const MarkedPolynomial& p, cplx z, double tol,
                       const GreenOptions& options) {
  require(tol > 0, "tolerance must be positive");
  const int d = p.degree();
  const double R = p.escape_radius();
  const double A = p.param_bound();
  const double kappa = std::log(static_cast<double>(d)) / (d - 1);
  const double guard = overflow_guard(d);

  std::vector<cplx> orbit;
  if (options.certify_bounded) orbit.push_back(z);
  cplx w = z;
  int n = 0;
  while (std::abs(w) <= R) {
    if (n >= options.budget) {
      GreenValue gv;
      gv.iterations_used = n;
      if (options.certify_bounded && certify_attracting_cycle(p, orbit)) {
        gv.status = GreenStatus::kBoundedCertified;
        return gv;
      }
      // g <= max of g on |w| = R, where |1 + E| <= 3/2.
      double sup = std::log(R) - kappa + std::log(1.5) / (d - 1);
      gv.error_bound = std::pow(static_cast<double>(d), -n) * std::max(sup, 0.0);
      gv.status = GreenStatus::kUndecided;
      return gv;
    }
    w = p(w);
    ++n;
    if (options.certify_bounded) orbit.push_back(w);
  }

  double scale = std::pow(static_cast<double>(d), -n);
  for (;;) {
    double aw = std::abs(w);
    double e = perturbation_bound(d, A / aw);
    double bound = scale * (-std::log1p(-e)) / (d - 1);
    if (bound <= tol || aw > guard) {
      GreenValue gv;
      gv.value = std::max(0.0, scale * (std::log(aw) - kappa));
      gv.error_bound = bound;
      gv.iterations_used = n;
      gv.status = GreenStatus::kEscaped;
      return gv;
    }
    w = p(w);
    ++n;
    scale /= d;
  }
}

namespace {

// Upward gradient flow of g, parametrized by s = log g. Along the flow the
// argument of phi is constant, dz/dg = 1/(d log phi/dz), and
// d log phi/dz ~ d^{-n} w_n'/(w_n - delta) once |w_n| is large.
cplx flow_field(const MarkedPolynomial& p, cplx z, double far) {
  const int d = p.degree();
  const cplx delta = p.delta();
  cplx w = z, dw = 1.0;
  double dn = 1.0;
  for (int n = 0; n < 5000 && std::abs(w) < far; ++n) {
    dw *= p.derivative(w);
    w = p(w);
    dn *= d;
  }
  if (std::abs(dw) == 0.0 || !std::isfinite(std::abs(dw))) {
    fail(ErrorKind::kStepRefinementNeeded, "gradient flow hit a critical point");
  }
  return dn * (w - delta) / dw;
}

// Approximate argument of phi(z) (as a unit complex number) by flowing up the
// external ray until the product formula applies.
cplx flow_argument(const MarkedPolynomial& p, cplx z, double potential) {
  const double RB = p.bottcher_radius();
  const double far = 1e6 * (1.0 + p.param_bound()) + RB;
  auto field = [&](cplx x, double s) { return std::exp(s) * flow_field(p, x, far); };
  auto rk4 = [&](cplx x, double s, double h) {
    cplx k1 = field(x, s);
    cplx k2 = field(x + 0.5 * h * k1, s + 0.5 * h);
    cplx k3 = field(x + 0.5 * h * k2, s + 0.5 * h);
    cplx k4 = field(x + h * k3, s + h);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  double s = std::log(potential);
  double h = 0.05;
  cplx x = z;
  for (int steps = 0; std::abs(x) < RB; ++steps) {
    if (steps > 20000 || h < 1e-9) {
      fail(ErrorKind::kStepRefinementNeeded, "external ray flow did not converge");
    }
    cplx full = rk4(x, s, h);
    cplx half = rk4(rk4(x, s, 0.5 * h), s + 0.5 * h, 0.5 * h);
    double err = std::abs(full - half);
    if (err <= 1e-8 * std::max(std::abs(x), 1e-3)) {
      x = half;
      s += h;
      if (err < 1e-10 * std::max(std::abs(x), 1e-3)) h = std::min(0.5, 2 * h);
    } else {
      h *= 0.5;
    }
  }
  cplx phi = bottcher_far(p, x);
  return phi / std::abs(phi);
}

}  // namespace

cplx bottcher_value(const MarkedPolynomial& p, cplx z, double tol) {
  require(tol > 0, "tolerance must be positive");
  const int d = p.degree();
  const double gtol = std::min(tol, 1e-12);
  GreenValue gz = green_value(p, z, gtol, {.budget = 4000, .certify_bounded = false});
  if (!gz.escaped()) fail(ErrorKind::kDomainError, "point does not escape");

  double big_g = 0.0;
  for (cplx c : p.critical_points()) {
    GreenValue gc = green_value(p, c, gtol, {.budget = 4000, .certify_bounded = false});
    big_g = std::max(big_g, gc.value + gc.error_bound);
  }
  if (gz.value - gz.error_bound <= big_g + tol) {
    fail(ErrorKind::kDomainError, "point is not in the Boettcher domain");
  }

  const double RB = p.bottcher_radius();
  std::vector<cplx> orbit{z};
  while (std::abs(orbit.back()) < RB) orbit.push_back(p(orbit.back()));
  cplx phi = bottcher_far(p, orbit.back());

  // Pull back one level at a time. Each level has d candidate roots; the
  // right one is picked by the argument of phi at that level, obtained by a
  // coarse gradient flow (only an accuracy of pi/(2d) is needed).
  for (std::size_t j = orbit.size() - 1; j-- > 0;) {
    cplx root = std::exp(std::log(phi) / static_cast<double>(d));
    cplx dir = flow_argument(p, orbit[j], gz.value * std::pow(d, j));
    double best = std::numeric_limits<double>::infinity();
    cplx pick = root;
    for (int m = 0; m < d; ++m) {
      cplx cand = root * std::polar(1.0, kTwoPi * m / d);
      double ang = std::abs(std::arg(cand / dir));
      if (ang < best) {
        best = ang;
        pick = cand;
      }
    }
    if (best > std::numbers::pi / (2 * d)) {
      fail(ErrorKind::kStepRefinementNeeded, "Boettcher branch is ambiguous");
    }
    phi = pick;
  }
  return phi;
}

cplx holomorphic_index(std::span<const cplx> coeffs, cplx z0, double fixed_tol) {
  require(!coeffs.empty(), "empty polynomial");
  // Taylor coefficients of Q(w) = P(z0 + w) - (z0 + w).
  std::vector<cplx> b(coeffs.begin(), coeffs.end());
  if (b.size() < 2) b.resize(2, 0.0);
  const std::size_t n = b.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = n - 1; k > i; --k) b[k - 1] += z0 * b[k];
  }
  b[1] -= 1.0;
  b[0] -= z0;
  double scale = 1.0;
  for (cplx c : b) scale = std::max(scale, std::abs(c));
  require(std::abs(b[0]) <= fixed_tol * (1.0 + std::abs(z0)), "z0 is not a fixed point");

  std::size_t m = 1;
  while (m < n && std::abs(b[m]) <= 1e-13 * scale) ++m;
  require(m < n, "P(z) - z vanishes identically");
  // 1/Q = w^{-m}/b_m * 1/(1 + sum_i t_i w^i); the residue is the w^{m-1}
  // coefficient of the inverse series divided by b_m.
  std::vector<cplx> inv(m, 0.0);
  inv[0] = 1.0;
  for (std::size_t j = 1; j < m; ++j) {
    cplx s = 0.0;
    for (std::size_t i = 1; i <= j; ++i) {
      cplx t = (m + i < n) ? b[m + i] / b[m] : cplx(0.0);
      s += t * inv[j - i];
    }
    inv[j] = -s;
  }
  return inv[m - 1] / b[m];
}

cplx holomorphic_index(const MarkedPolynomial& p, cplx z0, double fixed_tol) {
  return holomorphic_index(p.coeffs(), z0, fixed_tol);
}

}  // namespace bifurlab
