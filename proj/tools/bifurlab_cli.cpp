// Command-line front end: one subcommand per experiment, every run writes a
// manifest with the resolved configuration next to its outputs.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bifurlab/error.hpp"
#include "bifurlab/field_io.hpp"
#include "bifurlab/kneading.hpp"
#include "bifurlab/measure.hpp"
#include "bifurlab/parallel.hpp"
#include "bifurlab/per_solver.hpp"
#include "bifurlab/portrait.hpp"
#include "bifurlab/rays.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace bifurlab;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kUndecidedExit = 3, kResourceExit = 4 };

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return kUsage;
    case ErrorKind::kUndecided:
    case ErrorKind::kNotConverged:
    case ErrorKind::kStepRefinementNeeded:
    case ErrorKind::kDomainError:
      return kUndecidedExit;
    case ErrorKind::kResourceLimit:
      return kResourceExit;
    case ErrorKind::kIo:
      return kFailure;
  }
  return kFailure;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

struct Context {
  std::string out_dir = ".";
  std::string prefix;
  int threads = 0;
  CLI::App* sub = nullptr;
  json outputs = json::array();
  json results = json::object();

  fs::path path(const std::string& suffix) {
    fs::create_directories(out_dir);
    fs::path p = fs::path(out_dir) / (prefix + suffix);
    outputs.push_back(p.filename().string());
    return p;
  }

  void write_text(const std::string& suffix, const std::string& text) {
    std::ofstream os(path(suffix), std::ios::binary);
    if (!os) fail(ErrorKind::kIo, "cannot write " + suffix);
    os << text;
  }

  // Every long option of the subcommand with its resolved value.
  json resolved_config() const {
    json cfg = json::object();
    for (const CLI::Option* opt : sub->get_options()) {
      if (opt->get_lnames().empty()) continue;
      const std::string name = opt->get_lnames().front();
      if (name == "help") continue;
      if (opt->count() > 0) {
        const auto& r = opt->results();
        cfg[name] = r.size() == 1 ? json(r.front()) : json(r);
      } else {
        cfg[name] = opt->get_default_str();
      }
    }
    return cfg;
  }

  void write_manifest() {
    json m;
    m["command"] = sub->get_name();
    m["version"] = BIFURLAB_VERSION;
    m["config"] = resolved_config();
    m["threads"] = thread_count();
    m["outputs"] = outputs;
    m["results"] = results;
    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / (prefix + "manifest.json"));
    if (!os) fail(ErrorKind::kIo, "cannot write manifest");
    os << m.dump(2) << '\n';
  }
};

CriticalPortrait parse_portrait(const std::string& text) {
  try {
    return CriticalPortrait::from_json(text);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorKind::kInvalidArgument, std::string("bad portrait: ") + e.what());
  }
}

// ---------------------------------------------------------------- per-roots

struct PerRootsArgs {
  int d = 2, n = 0, k = 0;
  double tol = 1e-12;
  std::uint64_t seed = 1;
};

int run_per_roots(const PerRootsArgs& a, Context& ctx) {
  require(a.n > a.k && a.k >= 0, "need n > k >= 0");
  SolveOptions opt;
  opt.seed = a.seed;
  RootSet roots = solve_roots(per_poly_implicit(a.d, a.n, a.k), a.tol, opt);
  std::ostringstream csv;
  csv << "re,im,multiplicity,residual\n";
  for (const Root& r : roots.roots) {
    csv << fmt(r.value.real()) << ',' << fmt(r.value.imag()) << ',' << r.multiplicity << ','
        << fmt(r.residual) << '\n';
  }
  ctx.write_text("roots.csv", csv.str());
  const double norm = cvg_normalization(a.d, a.n, a.k);
  EmpiricalMeasure mu = empirical_from_roots(roots, norm);
  std::ostringstream js;
  write_measure_jsonl(js, mu);
  ctx.write_text("measure.jsonl", js.str());
  ctx.results["degree"] = roots.degree;
  ctx.results["distinct_roots"] = roots.roots.size();
  ctx.results["total_multiplicity"] = roots.total_multiplicity();
  ctx.results["complete"] = roots.complete;
  ctx.results["normalization"] = norm;
  ctx.results["note"] = roots.note;
  std::cout << "roots: " << roots.roots.size() << " distinct, multiplicity "
            << roots.total_multiplicity() << " of degree " << roots.degree
            << (roots.complete ? "" : " (incomplete)") << '\n';
  return roots.complete ? kOk : kUndecidedExit;
}

// ---------------------------------------------------------------- equidist

struct EquidistArgs {
  std::string criterion = "gap";
  int d = 2, k = 0;
  std::vector<int> ns{6, 8, 10, 12, 14};
  int resolution = 512;
  double half_width = 3.0;
  double tol = 1e-12;
  int budget = 2000;
};

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
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

int run_equidist(const EquidistArgs& a, Context& ctx) {
  require(a.resolution >= 3, "resolution must be at least 3");
  std::ostringstream csv;
  bool pass = true;
  if (a.criterion == "gap") {
    // sup |h_n| over [-2.5, 1.5] x [-2, 2].
    GridSpec grid{-2.5, 1.5, -2.0, 2.0, a.resolution, a.resolution};
    csv << "n,sup_abs_h,flagged\n";
    std::vector<double> sups;
    for (int n : a.ns) {
      GridField h = convergence_gap(a.d, n, a.k, grid);
      sups.push_back(h.sup_abs());
      csv << n << ',' << fmt(h.sup_abs()) << ',' << h.flagged_count() << '\n';
    }
    for (std::size_t i = 1; i < sups.size(); ++i) pass = pass && sups[i] <= 1.1 * sups[i - 1];
    pass = pass && !sups.empty() && sups.back() <= sups.front() / 4;
  } else if (a.criterion == "rate") {
    const std::vector<Bump> bumps{{-1.0, 0.5}, {{-0.2, 0.7}, 0.5}, {0.3, 0.5}};
    std::vector<double> ref;
    for (const Bump& b : bumps) {
      ref.push_back(green_identity_pairing(
          [&](cplx c) { return unicritical_potential(a.d, c, a.budget); }, b,
          {.radial_panels = 32, .gauss_points = 8, .angles = 4096}));
    }
    csv << "n,log_scale";
    for (std::size_t b = 0; b < bumps.size(); ++b) csv << ",discrepancy_" << b;
    csv << '\n';
    std::vector<double> xs;
    std::vector<std::vector<double>> ys(bumps.size());
    for (int n : a.ns) {
      RootSet roots = solve_roots(per_poly_implicit(a.d, n, a.k), a.tol);
      // Probability normalization: the harmonic measure has mass 1.
      EmpiricalMeasure mu = empirical_from_roots(roots, std::pow(a.d, n - 1));
      const double lx = (n - 1) * std::log(static_cast<double>(a.d));
      xs.push_back(lx);
      csv << n << ',' << fmt(lx);
      for (std::size_t b = 0; b < bumps.size(); ++b) {
        const double e = std::abs(pair(mu, bumps[b]) - ref[b]);
        ys[b].push_back(std::log(e));
        csv << ',' << fmt(e);
      }
      csv << '\n';
    }
    json slopes = json::array();
    for (auto& y : ys) {
      const double s = ls_slope(xs, y);
      slopes.push_back(s);
      pass = pass && s <= -0.7;
    }
    ctx.results["slopes"] = slopes;
  } else if (a.criterion == "mass") {
    GridField g = marked_potential_grid(2, GridSpec::square(0.0, a.half_width, a.resolution), a.budget);
    LaplacianMeasure m = laplacian_measure(g);
    csv << "resolution,signed_mass,clipped_mass,negative_mass\n";
    csv << a.resolution << ',' << fmt(m.signed_mass) << ',' << fmt(m.total_mass) << ','
        << fmt(m.negative_mass) << '\n';
    pass = std::abs(m.signed_mass - 1.0) <= 0.02;
  } else {
    fail(ErrorKind::kInvalidArgument, "criterion must be gap, rate or mass");
  }
  ctx.write_text("equidist.csv", csv.str());
  ctx.results["pass"] = pass;
  std::cout << csv.str() << "verdict: " << (pass ? "PASS" : "FAIL") << '\n';
  return kOk;
}

// ---------------------------------------------------------------- render

struct RenderArgs {
  std::string field = "green";
  int d = 2, n = 8, k = 0;
  double center_re = -0.5, center_im = 0.0, half_width = 2.0;
  int resolution = 256;
  int budget = 2000;
  bool auto_map = true;
  double lo = 0.0, hi = 1.0;
  bool save_grid = false;
};

int run_render(const RenderArgs& a, Context& ctx) {
  require(a.resolution >= 3, "resolution must be at least 3");
  const GridSpec grid = GridSpec::square({a.center_re, a.center_im}, a.half_width, a.resolution);
  GridField field;
  if (a.field == "green") {
    field = sample_field(grid, [&](cplx c) { return unicritical_potential(a.d, c, a.budget); });
  } else if (a.field == "marked-green") {
    field = marked_potential_grid(a.d, grid, a.budget);
  } else if (a.field == "gap") {
    field = convergence_gap(a.d, a.n, a.k, grid);
  } else if (a.field == "laplacian") {
    field = laplacian_density(
        sample_field(grid, [&](cplx c) { return unicritical_potential(a.d, c, a.budget); }));
  } else {
    fail(ErrorKind::kInvalidArgument, "field must be green, marked-green, gap or laplacian");
  }
  const GrayMap map = a.auto_map ? auto_gray_map(field) : GrayMap{a.lo, a.hi};
  {
    std::ofstream os(ctx.path(a.field + ".pgm"), std::ios::binary);
    if (!os) fail(ErrorKind::kIo, "cannot write image");
    write_pgm(os, field, map);
  }
  if (a.save_grid) {
    std::ofstream os(ctx.path(a.field + ".grid"), std::ios::binary);
    write_grid_binary(os, field);
  }
  ctx.results["gray_lo"] = map.lo;
  ctx.results["gray_hi"] = map.hi;
  ctx.results["flagged"] = field.flagged_count();
  return kOk;
}

// ---------------------------------------------------------------- stretch / goldberg

struct StretchArgs {
  int d = 2;
  std::string portrait;
  double r0 = 1.0, r_min = 1e-7, ratio = 0.7, tol = 1e-6;
};

json point_json(const ParamPoint& p) {
  json c = json::array();
  for (cplx x : p.c) c.push_back({x.real(), x.imag()});
  json j{{"a", {p.a.real(), p.a.imag()}}, {"c", c}};
  if (p.d >= 2 && p.c.empty()) {
    const cplx u = to_unicritical(p);
    j["unicritical_c"] = {u.real(), u.imag()};
  }
  return j;
}

int run_stretch(const StretchArgs& a, Context& ctx) {
  const CriticalPortrait theta = parse_portrait(a.portrait);
  const auto schedule = geometric_schedule(a.r0, a.r_min, a.ratio);
  StretchResult res = stretch_ray(theta, a.d, schedule, a.tol);
  std::ostringstream csv;
  csv << "r,a_re,a_im";
  for (int k = 1; k <= a.d - 2; ++k) csv << ",c" << k << "_re,c" << k << "_im";
  csv << '\n';
  for (const auto& s : res.path) {
    csv << fmt(s.r) << ',' << fmt(s.point.a.real()) << ',' << fmt(s.point.a.imag());
    for (cplx c : s.point.c) csv << ',' << fmt(c.real()) << ',' << fmt(c.imag());
    csv << '\n';
  }
  ctx.write_text("stretch.csv", csv.str());
  json v{{"landed", res.landed}, {"tail", res.tail}, {"misiurewicz", res.misiurewicz_combinatorics},
         {"trace", res.trace}};
  if (!res.path.empty()) v["landing"] = point_json(res.landing);
  if (res.classification) {
    json per = json::array();
    for (const auto& c : res.classification->per_critical) {
      per.push_back({{"detected", c.detected},
                     {"preperiod", c.preperiod},
                     {"period", c.period},
                     {"multiplier", {c.multiplier.real(), c.multiplier.imag()}}});
    }
    v["classification"] = {{"kind", to_string(res.classification->kind)}, {"critical", per}};
  }
  ctx.write_text("verdict.json", v.dump(2) + "\n");
  ctx.results = v;
  std::cout << "landed: " << (res.landed ? "yes" : "no") << ", tail " << res.tail
            << ", misiurewicz combinatorics: " << (res.misiurewicz_combinatorics ? "yes" : "no")
            << '\n';
  return kOk;
}

struct GoldbergArgs {
  int d = 2;
  std::string portrait;
  double r = 0.5, tol = 1e-10;
};

int run_goldberg(const GoldbergArgs& a, Context& ctx) {
  const CriticalPortrait theta = parse_portrait(a.portrait);
  GoldbergResult res = goldberg_solve(theta, a.r, a.d, a.tol);
  json v{{"converged", res.converged}, {"residual", res.residual},
         {"critical_green", res.critical_green}, {"point", point_json(res.point)},
         {"trace", res.trace}};
  ctx.write_text("goldberg.json", v.dump(2) + "\n");
  ctx.results = v;
  std::cout << v.dump(2) << '\n';
  return res.converged ? kOk : kUndecidedExit;
}

// ---------------------------------------------------------------- portrait

struct PortraitArgs {
  int d = 2;
  int sample = 0;
  std::uint64_t seed = 1;
  std::string validate;
};

int run_portrait(const PortraitArgs& a, Context& ctx) {
  if (!a.validate.empty()) {
    PortraitVerdict v = validate_portrait(parse_portrait(a.validate), a.d);
    json j{{"valid", v.valid},           {"same_image", v.same_image},
           {"equal_or_disjoint", v.equal_or_disjoint}, {"cardinality", v.cardinality},
           {"unlinked", v.unlinked},     {"in_cb0", v.in_cb0},
           {"distinct_sets", v.distinct_sets}, {"union_size", v.union_size},
           {"detail", v.detail}};
    ctx.write_text("verdict.json", j.dump(2) + "\n");
    ctx.results = j;
    std::cout << j.dump(2) << '\n';
    return kOk;
  }
  require(a.sample > 0, "give --sample N or --validate PORTRAIT");
  std::ostringstream lines;
  for (int i = 0; i < a.sample; ++i) {
    lines << sample_cb0(a.d, a.seed + static_cast<std::uint64_t>(i)).to_json() << '\n';
  }
  ctx.write_text("portraits.jsonl", lines.str());
  ctx.results["count"] = a.sample;
  std::cout << lines.str();
  return kOk;
}

// ---------------------------------------------------------------- kneading

struct KneadingArgs {
  int d = 3, k = 1;
  std::string alpha;
  int steps = 8;
  std::string cover;
  int verify = 0;
};

int run_kneading(const KneadingArgs& a, Context& ctx) {
  if (!a.alpha.empty()) {
    const Angle alpha = Angle::parse(a.alpha);
    require(alpha.is_exact(), "kneading needs an exact angle p/q");
    KneadingResult r = kneading(alpha, a.d, a.k, a.steps);
    std::string digits;
    for (int x : r.digits) digits += static_cast<char>('0' + x);
    ctx.results["digits"] = digits;
    ctx.results["boundary_hit_at"] = r.boundary_hit_at ? json(*r.boundary_hit_at) : json();
    ctx.write_text("kneading.json", ctx.results.dump(2) + "\n");
    std::cout << "digits " << digits;
    if (r.boundary_hit_at) std::cout << ", boundary hit at " << *r.boundary_hit_at;
    std::cout << '\n';
  }
  if (!a.cover.empty() || (a.alpha.empty() && a.verify == 0)) {
    std::string word = a.cover == "-" ? "" : a.cover;
    CylinderCover c = cylinder_cover(word, a.d, a.k);
    ctx.write_text("cover.csv", cover_csv(c));
    ctx.results["cover_count"] = c.count;
    std::cout << "cover of '" << word << "': " << c.count << " arcs\n";
  }
  if (a.verify > 0) {
    CountingReport rep = verify_counting_bound(a.d, a.k, a.verify);
    std::ostringstream csv;
    csv << "n,max_count,bound,max_count_word,max_length,total_length\n";
    for (const auto& l : rep.levels) {
      csv << l.n << ',' << l.max_count << ',' << fmt(l.bound) << ',' << l.max_count_word << ','
          << l.max_length.get_str() << ',' << l.total_length.get_str() << '\n';
    }
    ctx.write_text("counting.csv", csv.str());
    ctx.results["counting"] = {{"constant", rep.constant},
                               {"counts_ok", rep.counts_ok},
                               {"lengths_ok", rep.lengths_ok},
                               {"recursion_ok", rep.recursion_ok},
                               {"single_step_excess", rep.single_step_excess},
                               {"dimension_estimate", rep.dimension_estimate},
                               {"dimension_target", rep.dimension_target},
                               {"dimension_ok", rep.dimension_ok},
                               {"offending_word", rep.offending_word}};
    std::cout << csv.str() << "verdict: " << (rep.ok() ? "PASS" : "FAIL") << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bifurcation measures, Per(n,k) sets, portraits and stretching rays"};
  app.set_version_flag("--version", std::string(BIFURLAB_VERSION));
  app.set_config("--config", "", "TOML/INI file with option values; flags override it");
  app.require_subcommand(1);
  app.fallthrough();

  Context ctx;
  app.add_option("--out-dir", ctx.out_dir, "Directory for outputs and the manifest")
      ->capture_default_str();
  app.add_option("--prefix", ctx.prefix, "File name prefix for outputs");
  app.add_option("--threads", ctx.threads,
                 "Worker threads (default: BIFURLAB_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  std::map<CLI::App*, std::function<int()>> runners;

  PerRootsArgs pr;
  auto* s_pr = app.add_subcommand("per-roots", "Roots of Per(n,k) with multiplicities");
  s_pr->add_option("--d", pr.d, "Degree")->capture_default_str()->check(CLI::Range(2, 64));
  s_pr->add_option("--n", pr.n, "Period index n")->required()->check(CLI::PositiveNumber);
  s_pr->add_option("--k", pr.k, "Preperiod index k")->capture_default_str();
  s_pr->add_option("--tol", pr.tol, "Root tolerance")->capture_default_str();
  s_pr->add_option("--seed", pr.seed, "Seed for the root finder")->capture_default_str();
  runners[s_pr] = [&] { return run_per_roots(pr, ctx); };

  EquidistArgs eq;
  auto* s_eq = app.add_subcommand("equidist", "Equidistribution experiments (gap, rate, mass)");
  s_eq->add_option("--criterion", eq.criterion, "gap, rate or mass")
      ->capture_default_str()
      ->check(CLI::IsMember({"gap", "rate", "mass"}));
  s_eq->add_option("--d", eq.d, "Degree")->capture_default_str();
  s_eq->add_option("--k", eq.k, "Preperiod index")->capture_default_str();
  s_eq->add_option("--n", eq.ns, "Values of n")->capture_default_str()->delimiter(',');
  s_eq->add_option("--resolution", eq.resolution, "Grid nodes per axis")->capture_default_str();
  s_eq->add_option("--half-width", eq.half_width, "Half width of the mass box")->capture_default_str();
  s_eq->add_option("--tol", eq.tol, "Root tolerance")->capture_default_str();
  s_eq->add_option("--budget", eq.budget, "Iteration budget for potentials")->capture_default_str();
  runners[s_eq] = [&] { return run_equidist(eq, ctx); };

  RenderArgs rd;
  auto* s_rd = app.add_subcommand("render", "Render a field as an 8-bit PGM");
  s_rd->add_option("--field", rd.field, "green, marked-green, gap or laplacian")
      ->capture_default_str()
      ->check(CLI::IsMember({"green", "marked-green", "gap", "laplacian"}));
  s_rd->add_option("--d", rd.d, "Degree")->capture_default_str();
  s_rd->add_option("--n", rd.n, "n for the gap field")->capture_default_str();
  s_rd->add_option("--k", rd.k, "k for the gap field")->capture_default_str();
  s_rd->add_option("--center-re", rd.center_re, "Center, real part")->capture_default_str();
  s_rd->add_option("--center-im", rd.center_im, "Center, imaginary part")->capture_default_str();
  s_rd->add_option("--half-width", rd.half_width, "Half width of the square")->capture_default_str();
  s_rd->add_option("--resolution", rd.resolution, "Nodes per axis")
      ->capture_default_str()
      ->check(CLI::Range(3, 1 << 14));
  s_rd->add_option("--budget", rd.budget, "Iteration budget")->capture_default_str();
  auto* lo = s_rd->add_option("--lo", rd.lo, "Value mapped to gray 0");
  auto* hi = s_rd->add_option("--hi", rd.hi, "Value mapped to gray 255");
  s_rd->add_flag("--save-grid", rd.save_grid, "Also write the raw float64 grid");
  runners[s_rd] = [&, lo, hi] {
    rd.auto_map = lo->count() == 0 && hi->count() == 0;
    return run_render(rd, ctx);
  };

  StretchArgs st;
  auto* s_st = app.add_subcommand("stretch", "Follow a stretching ray toward the connectedness locus");
  s_st->add_option("--d", st.d, "Degree (2 or 3)")->capture_default_str();
  s_st->add_option("--portrait", st.portrait, "Portrait as JSON, e.g. [[\"1/6\",\"2/3\"]]")->required();
  s_st->add_option("--r0", st.r0, "First potential")->capture_default_str();
  s_st->add_option("--r-min", st.r_min, "Last potential")->capture_default_str();
  s_st->add_option("--ratio", st.ratio, "Schedule ratio")->capture_default_str();
  s_st->add_option("--tol", st.tol, "Landing tolerance")->capture_default_str();
  runners[s_st] = [&] { return run_stretch(st, ctx); };

  GoldbergArgs gb;
  auto* s_gb = app.add_subcommand("goldberg", "Parameter with a given portrait and critical potential");
  s_gb->add_option("--d", gb.d, "Degree (2 or 3)")->capture_default_str();
  s_gb->add_option("--portrait", gb.portrait, "Portrait as JSON")->required();
  s_gb->add_option("--r", gb.r, "Critical Green value")->capture_default_str();
  s_gb->add_option("--tol", gb.tol, "Residual tolerance")->capture_default_str();
  runners[s_gb] = [&] { return run_goldberg(gb, ctx); };

  PortraitArgs pt;
  auto* s_pt = app.add_subcommand("portrait", "Sample or validate critical portraits");
  s_pt->add_option("--d", pt.d, "Degree")->capture_default_str();
  s_pt->add_option("--sample", pt.sample, "Number of Cb0 samples")->capture_default_str();
  s_pt->add_option("--seed", pt.seed, "First seed")->capture_default_str();
  s_pt->add_option("--validate", pt.validate, "Portrait JSON to validate");
  runners[s_pt] = [&] { return run_portrait(pt, ctx); };

  KneadingArgs kn;
  auto* s_kn = app.add_subcommand("kneading", "Kneading digits, cylinder covers, counting bound");
  s_kn->add_option("--d", kn.d, "Degree")->capture_default_str();
  s_kn->add_option("--k", kn.k, "Component index k")->capture_default_str();
  s_kn->add_option("--alpha", kn.alpha, "Exact angle p/q");
  s_kn->add_option("--steps", kn.steps, "Number of digits")->capture_default_str();
  s_kn->add_option("--cover", kn.cover, "Binary word for the cylinder cover ('-' for empty)");
  s_kn->add_option("--verify", kn.verify, "Check the counting bound up to this length")
      ->capture_default_str();
  runners[s_kn] = [&] { return run_kneading(kn, ctx); };

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (ctx.threads > 0) set_thread_count(ctx.threads);
    for (auto& [sub, run] : runners) {
      if (!sub->parsed()) continue;
      ctx.sub = sub;
      const int rc = run();
      ctx.write_manifest();
      return rc;
    }
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
