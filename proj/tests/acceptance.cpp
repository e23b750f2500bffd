// One line per acceptance criterion: "AC<n> PASS|FAIL <name>: <measurements>".
// Exit status is nonzero when any selected criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>

#include "bifurlab/kneading.hpp"
#include "bifurlab/measure.hpp"
#include "bifurlab/parallel.hpp"
#include "bifurlab/rays.hpp"
#include "oracles.hpp"

using namespace bifurlab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double mandelbrot(cplx c) { return oracle::mandelbrot_potential(c); }

CriticalPortrait quadratic_portrait(long p1, long q1, long p2, long q2) {
  return CriticalPortrait{{{Angle::exact(p1, q1), Angle::exact(p2, q2)}}};
}

// ---------------------------------------------------------------------------

Outcome equidistribution_gap() {
  Clock clock;
  set_thread_count(1);
  const GridSpec grid{-2.5, 1.5, -2.0, 2.0, 512, 512};
  std::vector<double> sups;
  std::string series;
  double oracle_err = 0.0;
  for (int n : {6, 8, 10, 12, 14}) {
    const GridField h = convergence_gap(2, n, 0, grid);
    sups.push_back(h.sup_abs());
    series += fmt(" |h_%d|=%.3e", n, sups.back());
    // Spot check against extended-precision evaluation along a diagonal.
    for (std::int64_t i = 0; i < 512; i += 17) {
      const double v = h.at(i, (i * 7) % 512);
      const double ref = oracle::gap_mpfr(2, n, 0, grid.node(i, (i * 7) % 512));
      if (std::isfinite(v) && std::isfinite(ref)) oracle_err = std::max(oracle_err, std::abs(v - ref));
    }
  }
  set_thread_count(0);
  bool monotone = true;
  for (std::size_t i = 1; i < sups.size(); ++i) monotone = monotone && sups[i] <= 1.1 * sups[i - 1];
  const bool quarter = sups.back() <= sups.front() / 4;
  const double t = clock.seconds();
  return {monotone && quarter && t < 300 && oracle_err < 1e-9,
          series + fmt("; monotone(10%%)=%d, |h_14|<=|h_6|/4: %d, oracle max err %.1e, %.1fs",
                       monotone, quarter, oracle_err, t)};
}

Outcome rate_surrogate() {
  const std::vector<cplx> centers{-1.0, cplx(-0.2, 0.7), 0.3};
  const double radius = 0.5;
  std::vector<double> ref;
  for (cplx c : centers) ref.push_back(oracle::green_identity_bump(&mandelbrot, c, radius, 32, 8, 4096));
  std::vector<double> logn;
  std::vector<std::vector<double>> logdisc(centers.size());
  for (int n = 8; n <= 14; ++n) {
    const RootSet rs = solve_roots(per_poly_implicit(2, n, 0), 1e-10);
    if (!rs.complete) return {false, fmt("root solve incomplete at n=%d", n)};
    const EmpiricalMeasure mu = empirical_from_roots(rs, std::ldexp(1.0, n - 1));
    logn.push_back((n - 1) * std::log(2.0));
    for (std::size_t b = 0; b < centers.size(); ++b) {
      const double disc = std::abs(pair(mu, Bump{centers[b], radius}) - ref[b]);
      logdisc[b].push_back(std::log(disc));
    }
  }
  bool ok = true;
  std::string out = "slopes";
  for (std::size_t b = 0; b < centers.size(); ++b) {
    const double s = slope(logn, logdisc[b]);
    ok = ok && s <= -0.7;
    out += fmt(" %.3f", s);
  }
  return {ok, out + fmt(" (need <= -0.7); references %.9f %.9f %.9f", ref[0], ref[1], ref[2])};
}

Outcome current_mass() {
  Clock clock;
  const GridField g = marked_potential_grid(2, GridSpec::square(0.0, 3.0, 1024));
  const LaplacianMeasure m = laplacian_measure(g);
  const bool ok = std::abs(m.signed_mass - 1.0) <= 0.02;
  return {ok, fmt("signed mass %.6f (clipped positive %.6f, negative %.6f over %zu cells), %.1fs",
                  m.signed_mass, m.total_mass, m.negative_mass, m.negative_cells, clock.seconds())};
}

Outcome green_growth() {
  // Observed maxima from the first run (seed 20240611), rounded up.
  const double frozen[] = {0.0, 0.0, 0.61, 1.00, 1.24};
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> expo(-3.0, 6.0), arg(0.0, kTwoPi);
  auto draw = [&] { return std::polar(std::pow(10.0, expo(rng)), arg(rng)); };
  bool ok = true;
  std::string out;
  for (int d = 2; d <= 4; ++d) {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      ParamPoint p;
      p.d = d;
      for (int k = 0; k < d - 2; ++k) p.c.push_back(draw());
      p.a = draw();
      const GreenValue g = big_green(p, 1e-10);
      const double gap = std::abs(g.value - std::max(0.0, std::log(p.param_bound())));
      worst = std::max(worst, gap + g.error_bound);
    }
    const bool pass = worst <= frozen[d] && frozen[d] <= growth_constant(d);
    ok = ok && pass;
    out += fmt("d=%d max %.4f (frozen %.2f, a priori %.3f)%s", d, worst, frozen[d],
               growth_constant(d), d < 4 ? "; " : "");
  }
  return {ok, out};
}

Outcome multiplicities() {
  Clock clock;
  bool ok = true;
  std::string bad;
  for (int n = 1; n <= 16; ++n) {
    const RootSet rs = solve_roots(per_poly_implicit(2, n, 0), 1e-10);
    const long long want = 1LL << (n - 1);
    if (rs.total_multiplicity() != want || !rs.complete) {
      ok = false;
      bad += fmt(" n=%d:%lld", n, rs.total_multiplicity());
    }
  }
  const RootSet p21 = solve_roots(per_poly(2, 2, 1), 1e-10);
  const bool zero_twice = p21.roots.size() == 1 && std::abs(p21.roots[0].value) < 1e-12 &&
                          p21.roots[0].multiplicity == 2;
  return {ok && zero_twice,
          fmt("Per(n,0) sums 2^(n-1) for n<=16: %s; Per(2,1) = {0}x2: %d; %.1fs",
              ok ? "yes" : ("no," + bad).c_str(), zero_twice, clock.seconds())};
}

Outcome nesting() {
  const RootSet small = solve_roots(per_poly(2, 2, 0), 1e-12);
  bool ok = true;
  std::string out;
  for (int n : {4, 6}) {
    const RootSet big = solve_roots(per_poly_implicit(2, n, 0), 1e-12);
    double worst = 0.0;
    for (const Root& r : small.roots) {
      int covered = 0;
      double nearest = INFINITY;
      for (const Root& s : big.roots) {
        const double dist = std::abs(s.value - r.value);
        nearest = std::min(nearest, dist);
        if (dist <= 1e-8) covered += s.multiplicity;
      }
      worst = std::max(worst, nearest);
      ok = ok && covered >= r.multiplicity;
    }
    out += fmt("Per(2,0) in Per(%d,0): max distance %.1e; ", n, worst);
  }
  return {ok && small.roots.size() == 2, out + fmt("%zu roots of Per(2,0)", small.roots.size())};
}

Outcome goldberg_consistency() {
  Clock clock;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ur(0.05, 1.0);
  bool ok = true;
  std::string out;
  for (int d = 2; d <= 3; ++d) {
    double worst = 0.0;
    int failures = 0;
    for (int i = 0; i < 100; ++i) {
      const CriticalPortrait theta = sample_cb0(d, rng());
      const double r = ur(rng);
      const GoldbergResult g = goldberg_solve(theta, r, d, 1e-12);
      if (!g.converged) {
        ++failures;
        continue;
      }
      const MarkedPolynomial poly = g.point.polynomial();
      const auto crit = poly.critical_points();
      for (int k = 0; k < d - 1; ++k) {
        const double err = std::abs(oracle::green_mpfr(poly.coeffs(), crit[k]) - r);
        worst = std::max(worst, err);
        if (err > 1e-6) ++failures;
      }
    }
    ok = ok && failures == 0;
    out += fmt("d=%d max |g(c_k) - r| %.1e, failures %d; ", d, worst, failures);
  }
  return {ok, out + fmt("%.1fs", clock.seconds())};
}

Outcome landing_pushforward() {
  Clock clock;
  const int samples = 10000;
  const double r = 0.1;
  std::vector<cplx> pts;
  int failures = 0;
  for (int i = 0; i < samples; ++i) {
    const GoldbergResult g = goldberg_solve(sample_cb0(2, 1000 + i), r, 2, 1e-10);
    if (g.converged) {
      pts.push_back(g.point.a);
    } else {
      ++failures;
    }
  }
  const GridField green = marked_potential_grid(2, GridSpec::square(0.0, 3.0, 1024));
  const LaplacianMeasure ref = monge_ampere_regularized(green, r);
  // a and -a give the same polynomial, so each solve contributes both roots.
  const std::vector<Bump> bumps{{cplx(0.0, 2.0), 0.5}, {cplx(1.2, 0.8), 0.5}, {cplx(1.2, 0.0), 0.5}};
  bool ok = failures == 0;
  std::string out;
  for (const Bump& b : bumps) {
    double s = 0, s2 = 0;
    for (cplx a : pts) {
      const double v = 0.5 * (b(a) + b(-a));
      s += v;
      s2 += v * v;
    }
    const double n = static_cast<double>(pts.size());
    const double mean = s / n;
    const double se = std::sqrt(std::max(0.0, s2 / n - mean * mean) / n);
    const double gap = std::abs(mean - pair(ref.cells, b));
    ok = ok && gap < 3 * se;
    out += fmt("bump %g%+gi gap %.2e = %.2f SE; ", b.center.real(), b.center.imag(), gap, gap / se);
  }
  return {ok, out + fmt("%d solve failures, reference mass %.4f, %.1fs", failures, ref.total_mass,
                        clock.seconds())};
}

struct LandingCheck {
  bool pass = false;
  std::string detail;
};

LandingCheck misiurewicz_landing_for(const CriticalPortrait& theta) {
  const double tol = 1e-6;
  const StretchResult coarse = stretch_ray(theta, 2, geometric_schedule(1.0, 1e-7, 0.7), tol);
  const cplx c = to_unicritical(coarse.landing);
  std::string out = fmt("landed %d (tail %.1e) at %.9f%+.9fi", coarse.landed, coarse.tail, c.real(), c.imag());
  if (!coarse.landed) return {false, out};
  const MisiurewiczRecord rec = misiurewicz_classify(coarse.landing, tol);
  out += fmt(", class %s", to_string(rec.kind));
  if (rec.kind != MisiurewiczKind::kMisiurewicz) return {false, out};
  const CriticalOrbitClass& orbit = rec.per_critical[0];
  // The marked critical value a^2 corresponds to c; count orbit steps of
  // z^2 + c from the critical point.
  const int k = orbit.preperiod;
  const int n = k + orbit.period;
  const RootSet roots = strict_preper_roots(2, n, k, 1e-12);
  double nearest = INFINITY;
  for (const Root& root : roots.roots) nearest = std::min(nearest, std::abs(root.value - c));
  const StretchResult fine = stretch_ray(theta, 2, geometric_schedule(1.0, 1e-7, std::sqrt(0.7)), tol);
  const double moved = std::abs(to_unicritical(fine.landing) - c);
  out += fmt(", Per(%d,%d) root at %.1e, refined schedule moves %.1e", n, k, nearest, moved);
  return {fine.landed && nearest < 1e-6 && moved < 1e-6, out};
}

Outcome misiurewicz_landing() {
  Clock clock;
  const LandingCheck main = misiurewicz_landing_for(quadratic_portrait(1, 6, 2, 3));
  const LandingCheck side = misiurewicz_landing_for(quadratic_portrait(1, 12, 7, 12));
  return {main.pass, "{1/6, 2/3}: " + main.detail + "; for comparison {1/12, 7/12}: " +
                         side.detail + (side.pass ? " (passes)" : " (fails)") +
                         fmt("; %.1fs", clock.seconds())};
}

Outcome cylinder_bound() {
  Clock clock;
  const CountingReport rep = verify_counting_bound(3, 1, 10);
  const double t = clock.seconds();
  // Independent check: arc midpoints of the extremal words have that itinerary.
  int mismatches = 0;
  for (const CountingLevel& L : rep.levels) {
    for (const std::string& w : {L.max_count_word, L.max_length_word}) {
      for (const Arc& a : cylinder_cover(w, 3, 1).intervals) {
        const mpq_class mid = (a.lo + a.hi) / 2;
        if (oracle::kneading_direct(mid, 3, 1, L.n).first != w) ++mismatches;
      }
    }
  }
  const CountingLevel& last = rep.levels.back();
  return {rep.ok() && t < 120 && mismatches == 0,
          fmt("C=%.3f, N_10=%zu <= %.0f, max length*3^10=%.3f, dimension %.4f (target %.4f + 0.05), "
              "recursion %d, itinerary mismatches %d, %.1fs",
              rep.constant, last.max_count, last.bound,
              last.max_length.get_d() * std::pow(3.0, 10), rep.dimension_estimate,
              rep.dimension_target, rep.recursion_ok, mismatches, t)};
}

Outcome douady_index() {
  const std::vector<cplx> coeffs{0.0, 1.0, 0.5, 1.0};
  const cplx idx = holomorphic_index(coeffs, 0.0);
  const cplx ref = oracle::contour_index(coeffs, 0.0, 0.1);
  const bool index_ok = std::abs(idx - cplx(-4.0)) <= 1e-12;
  const MarkedConjugacy m = to_marked(coeffs);
  const MarkedPolynomial poly = m.point.polynomial();
  bool crit_ok = true;
  std::string statuses;
  for (cplx crit : poly.critical_points()) {
    const GreenValue g = green_value(poly, crit, 1e-10);
    crit_ok = crit_ok && !g.escaped();
    statuses += std::string(" ") + to_string(g.status);
  }
  const LocusVerdict v = locus_test(m.point, 4000, 1e-10);
  const bool locus_ok = v.status != LocusStatus::kEscaping;
  return {index_ok && crit_ok && locus_ok,
          fmt("index %.15f%+.1ei (contour %.12f), critical points:%s, locus %s", idx.real(),
              idx.imag(), ref.real(), statuses.c_str(), to_string(v.status))};
}

Outcome centers_count() {
  Clock clock;
  bool ok = true;
  std::string out;
  for (auto [n0, n1] : {std::pair{1, 1}, {2, 1}, {2, 2}}) {
    const CentersResult cr = centers_2d(3, n0, n1, 1e-10);
    const oracle::CentersCount want = oracle::centers_resultant(n0, n1);
    double bound = 0.0, residual = 0.0;
    for (const ParamPoint& p : cr.points) bound = std::max(bound, p.param_bound());
    for (auto [c, s] : cr.cs_solutions) {
      auto [r0, r1] = centers_residual(n0, n1, c, s);
      residual = std::max({residual, std::abs(r0), std::abs(r1)});
    }
    const bool pass = cr.complete && bound <= compactness_radius() && residual < 1e-8 &&
                      static_cast<int>(cr.cs_solutions.size()) == want.distinct;
    ok = ok && pass;
    out += fmt("(%d,%d): %zu solutions vs resultant %d, max bound %.3f, residual %.1e; ", n0, n1,
               cr.cs_solutions.size(), want.distinct, bound, residual);
  }
  return {ok, out + fmt("%.1fs", clock.seconds())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-12)")->check(CLI::Range(0, 12));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"equidistribution gap", equidistribution_gap},
      {"rate surrogate", rate_surrogate},
      {"bifurcation current mass", current_mass},
      {"Green growth", green_growth},
      {"multiplicity bookkeeping", multiplicities},
      {"nesting", nesting},
      {"Goldberg self-consistency", goldberg_consistency},
      {"landing pushforward", landing_pushforward},
      {"Misiurewicz landing", misiurewicz_landing},
      {"cylinder bound", cylinder_bound},
      {"Douady index fixture", douady_index},
      {"centers count", centers_count},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("AC%zu %s %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
