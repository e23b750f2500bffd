#include "bifurlab/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <json.hpp>

#include "bifurlab/error.hpp"

namespace bifurlab {

namespace {

constexpr double kFloatTol = 1e-12;

mpq_class frac(const mpq_class& q) {
  mpq_class r(q);
  r.canonicalize();
  mpz_class rem;
  mpz_fdiv_r(rem.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  mpq_class out(rem, r.get_den());
  out.canonicalize();
  return out;
}

bool close(const Angle& a, const Angle& b) {
  if (a.is_exact() && b.is_exact()) return a == b;
  double diff = std::abs(a.value() - b.value());
  return std::min(diff, 1.0 - diff) <= kFloatTol;
}

bool contains(const AngleSet& s, const Angle& x) {
  return std::any_of(s.begin(), s.end(), [&](const Angle& y) { return close(x, y); });
}

bool disjoint(const AngleSet& a, const AngleSet& b) {
  return std::none_of(a.begin(), a.end(), [&](const Angle& x) { return contains(b, x); });
}

bool same_set(const AngleSet& a, const AngleSet& b) {
  if (a.size() != b.size()) return false;
  return std::all_of(a.begin(), a.end(), [&](const Angle& x) { return contains(b, x); });
}

}  // namespace

Angle Angle::exact(const mpq_class& q) {
  Angle a;
  a.exact_ = true;
  a.q_ = frac(q);
  a.x_ = a.q_.get_d();
  return a;
}

Angle Angle::exact(long p, long q) {
  require(q != 0, "zero denominator");
  return exact(mpq_class(p, q));
}

Angle Angle::real(double x) {
  require(std::isfinite(x), "angle must be finite");
  Angle a;
  a.exact_ = false;
  double f = x - std::floor(x);
  a.x_ = f >= 1.0 ? 0.0 : f;
  return a;
}

Angle Angle::parse(const std::string& text) {
  if (text.find('/') != std::string::npos) {
    mpq_class q;
    if (q.set_str(text, 10) != 0 || q.get_den() == 0) {
      fail(ErrorKind::kInvalidArgument, "bad rational angle '" + text + "'");
    }
    return exact(q);
  }
  if (text.find_first_of(".eE") == std::string::npos) {
    mpz_class z;
    if (z.set_str(text, 10) != 0) fail(ErrorKind::kInvalidArgument, "bad angle '" + text + "'");
    return exact(mpq_class(z));
  }
  try {
    std::size_t used = 0;
    double x = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return real(x);
  } catch (const std::exception&) {
    fail(ErrorKind::kInvalidArgument, "bad angle '" + text + "'");
  }
}

const mpq_class& Angle::rational() const {
  require(exact_, "angle is not exact");
  return q_;
}

double Angle::value() const { return x_; }

Angle Angle::times(long d) const {
  if (exact_) return exact(q_ * d);
  return real(x_ * static_cast<double>(d));
}

Angle Angle::plus(const Angle& other) const {
  if (exact_ && other.exact_) return exact(q_ + other.q_);
  return real(x_ + other.x_);
}

Angle Angle::plus(const mpq_class& t) const {
  if (exact_) return exact(q_ + t);
  return real(x_ + t.get_d());
}

Angle Angle::plus(double t) const { return real(x_ + t); }

std::string Angle::to_string() const {
  if (exact_) return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x_);
  return buf;
}

bool operator==(const Angle& a, const Angle& b) {
  if (a.exact_ && b.exact_) return a.q_ == b.q_;
  return a.x_ == b.x_;
}

bool operator<(const Angle& a, const Angle& b) {
  if (a.exact_ && b.exact_) return a.q_ < b.q_;
  return a.x_ < b.x_;
}

bool CriticalPortrait::is_exact() const {
  for (const auto& s : sets) {
    for (const auto& a : s) {
      if (!a.is_exact()) return false;
    }
  }
  return true;
}

std::string CriticalPortrait::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& s : sets) {
    nlohmann::json row = nlohmann::json::array();
    for (const auto& a : s) row.push_back(a.to_string());
    j.push_back(row);
  }
  return j.dump();
}

CriticalPortrait CriticalPortrait::from_json(const std::string& text) {
  CriticalPortrait p;
  try {
    auto j = nlohmann::json::parse(text);
    require(j.is_array(), "portrait JSON must be a list of lists");
    for (const auto& row : j) {
      require(row.is_array(), "portrait JSON must be a list of lists");
      AngleSet s;
      for (const auto& item : row) {
        s.push_back(item.is_string() ? Angle::parse(item.get<std::string>())
                                     : Angle::real(item.get<double>()));
      }
      p.sets.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kInvalidArgument, std::string("bad portrait JSON: ") + e.what());
  }
  return p;
}

AngleSet normalized(AngleSet s) {
  std::sort(s.begin(), s.end());
  AngleSet out;
  for (const auto& a : s) {
    if (out.empty() || !close(out.back(), a)) out.push_back(a);
  }
  if (out.size() > 1 && close(out.front(), out.back())) out.pop_back();
  return out;
}

bool is_unlinked(const AngleSet& t1, const AngleSet& t2) {
  require(disjoint(t1, t2), "is_unlinked needs disjoint sets");
  if (t1.empty() || t2.size() <= 1) return true;
  AngleSet a = normalized(t1);
  const std::size_t n = a.size();
  long component = -1;
  for (const Angle& x : t2) {
    std::size_t idx = std::lower_bound(a.begin(), a.end(), x) - a.begin();
    long c = static_cast<long>(idx == n ? 0 : idx);
    if (component < 0) {
      component = c;
    } else if (c != component) {
      return false;
    }
  }
  return true;
}

PortraitVerdict validate_portrait(const CriticalPortrait& theta, int d) {
  require(d >= 2, "degree must be at least 2");
  PortraitVerdict v;
  if (static_cast<int>(theta.sets.size()) != d - 1) {
    v.detail = "expected " + std::to_string(d - 1) + " angle sets";
    return v;
  }
  std::vector<AngleSet> sets;
  for (const auto& s : theta.sets) sets.push_back(normalized(s));

  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (sets[i].empty()) {
      v.same_image = false;
      v.detail += "set " + std::to_string(i + 1) + " is empty; ";
      continue;
    }
    const Angle image = sets[i][0].times(d);
    for (const auto& a : sets[i]) {
      if (!close(a.times(d), image)) {
        v.same_image = false;
        v.detail += "set " + std::to_string(i + 1) + " has different images; ";
        break;
      }
    }
  }

  std::vector<AngleSet> distinct;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    bool seen = false;
    for (const auto& s : distinct) seen = seen || same_set(s, sets[i]);
    if (!seen) distinct.push_back(sets[i]);
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const bool eq = same_set(sets[i], sets[j]);
      const bool dj = disjoint(sets[i], sets[j]);
      if (!eq && !dj) {
        v.equal_or_disjoint = false;
        v.detail += "sets " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                    " overlap without being equal; ";
      }
      if (dj && (!is_unlinked(sets[i], sets[j]) || !is_unlinked(sets[j], sets[i]))) {
        v.unlinked = false;
        v.detail += "sets " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                    " are linked; ";
      }
    }
  }
  AngleSet all;
  for (const auto& s : sets) all.insert(all.end(), s.begin(), s.end());
  all = normalized(all);
  v.distinct_sets = static_cast<int>(distinct.size());
  v.union_size = static_cast<int>(all.size());
  v.cardinality = v.union_size == d + v.distinct_sets - 1;
  if (!v.cardinality) {
    v.detail += "Card(union) = " + std::to_string(v.union_size) + " but d + N - 1 = " +
                std::to_string(d + v.distinct_sets - 1) + "; ";
  }
  v.valid = v.same_image && v.equal_or_disjoint && v.cardinality && v.unlinked;
  v.in_cb0 = v.valid && v.distinct_sets == d - 1 &&
             std::all_of(sets.begin(), sets.end(), [](const AngleSet& s) { return s.size() == 2; });
  return v;
}

namespace {

struct PairDraw {
  std::mt19937_64 rng;
  std::discrete_distribution<int> component;
  std::uniform_int_distribution<long> numerator;
  int d;

  PairDraw(int d_, std::uint64_t seed) : rng(seed), numerator(0, (1L << 31) - 2), d(d_) {
    std::vector<double> weights;
    for (int k = 1; k <= d / 2; ++k) weights.push_back(2 * k == d ? 0.5 : 1.0);
    component = std::discrete_distribution<int>(weights.begin(), weights.end());
  }

  AngleSet draw() {
    const int k = component(rng) + 1;
    const Angle a = Angle::exact(mpq_class(numerator(rng), (1L << 31) - 1));
    return normalized({a, a.plus(mpq_class(k, d))});
  }
};

bool acceptable(const std::vector<AngleSet>& sets) {
  for (std::size_t i = 0; i < sets.size(); ++i) {
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      if (!disjoint(sets[i], sets[j])) return false;
      if (!is_unlinked(sets[i], sets[j]) || !is_unlinked(sets[j], sets[i])) return false;
    }
  }
  return true;
}

}  // namespace

CriticalPortrait sample_cb0(int d, std::uint64_t seed, int max_attempts) {
  require(d >= 2, "degree must be at least 2");
  PairDraw draw(d, seed);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<AngleSet> sets;
    for (int i = 0; i < d - 1; ++i) sets.push_back(draw.draw());
    if (acceptable(sets)) return CriticalPortrait{std::move(sets)};
  }
  fail(ErrorKind::kResourceLimit, "rejection budget exhausted in sample_cb0");
}

double cb0_acceptance_rate(int d, std::uint64_t seed, int attempts) {
  require(attempts > 0, "need at least one attempt");
  PairDraw draw(d, seed);
  long accepted = 0;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    std::vector<AngleSet> sets;
    for (int i = 0; i < d - 1; ++i) sets.push_back(draw.draw());
    if (acceptable(sets)) ++accepted;
  }
  return static_cast<double>(accepted) / attempts;
}

LeafPoint leaf_action(const LeafElement& u, const LeafPoint& x) {
  require(u.s > 0, "leaf action needs Re u > 0");
  require(x.r > 0, "potential must be positive");
  LeafPoint out;
  const mpq_class shift = x.r * u.t;
  for (const auto& s : x.theta.sets) {
    AngleSet moved;
    for (const auto& a : s) moved.push_back(a.plus(shift));
    out.theta.sets.push_back(normalized(moved));
  }
  out.r = u.s * x.r;
  return out;
}

LeafElement leaf_compose(const LeafElement& u1, const LeafElement& u2) {
  return {u1.s * u2.s, u1.t * u2.s + u2.t};
}

std::pair<CriticalPortrait, double> leaf_action(cplx u, const CriticalPortrait& theta, double r) {
  require(u.real() > 0, "leaf action needs Re u > 0");
  require(r > 0, "potential must be positive");
  CriticalPortrait out;
  for (const auto& s : theta.sets) {
    AngleSet moved;
    for (const auto& a : s) moved.push_back(Angle::real(a.value() + r * u.imag()));
    out.sets.push_back(normalized(moved));
  }
  return {out, u.real() * r};
}

CriticalPortrait portrait_glue(const CriticalPortrait& theta) {
  const std::size_t n = theta.sets.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!disjoint(theta.sets[i], theta.sets[j])) parent[find(i)] = find(j);
    }
  }
  std::vector<AngleSet> merged(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& m = merged[find(i)];
    m.insert(m.end(), theta.sets[i].begin(), theta.sets[i].end());
  }
  CriticalPortrait out;
  for (std::size_t i = 0; i < n; ++i) out.sets.push_back(normalized(merged[find(i)]));
  return out;
}

bool strictly_preperiodic(const Angle& a, int d) {
  require(a.is_exact(), "preperiodicity needs an exact angle");
  mpz_class g;
  mpz_class dd(d);
  mpz_gcd(g.get_mpz_t(), a.rational().get_den_mpz_t(), dd.get_mpz_t());
  return g > 1;
}

bool misiurewicz_portrait(const CriticalPortrait& theta, int d) {
  require(theta.is_exact(), "Misiurewicz test needs exact angles");
  for (const auto& s : theta.sets) {
    for (const auto& a : s) {
      if (!strictly_preperiodic(a, d)) return false;
    }
  }
  return true;
}

}  // namespace bifurlab
