#include "bifurlab/kneading.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "bifurlab/error.hpp"

namespace bifurlab {

namespace {

void check_dk(int d, int k) {
  require(d >= 2, "degree must be at least 2");
  require(k >= 1 && 2 * k <= d, "need 1 <= k <= d/2");
}

mpz_class floor_z(const mpq_class& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return f;
}

std::string qstr(const mpq_class& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace

KneadingResult kneading(const Angle& alpha, int d, int k, int n) {
  check_dk(d, k);
  require(alpha.is_exact(), "kneading needs an exact angle");
  require(n >= 0, "step count must be nonnegative");
  const mpq_class a = alpha.rational();
  const mpq_class b = Angle::exact(a + mpq_class(k, d)).rational();
  KneadingResult res;
  mpq_class x = a;
  for (int j = 1; j <= n; ++j) {
    x = Angle::exact(x * d).rational();
    if (x == a || x == b) {
      res.boundary_hit_at = j;
      break;
    }
    // I_0 = (a, a + k/d) measured counterclockwise from a
    mpq_class offset = x - a;
    if (offset < 0) offset += 1;
    res.digits.push_back(offset < mpq_class(k, d) ? 0 : 1);
  }
  return res;
}

CylinderCover refine(const CylinderCover& parent, int digit, int d, int k) {
  check_dk(d, k);
  require(digit == 0 || digit == 1, "digits are 0 or 1");
  const int j = static_cast<int>(parent.word.size()) + 1;
  mpz_class dj;
  mpz_ui_pow_ui(dj.get_mpz_t(), d, j);
  const mpz_class m = dj - 1;
  const mpq_class mq(m);
  const mpq_class kd(k, d);

  CylinderCover out;
  out.word = parent.word + static_cast<char>('0' + digit);
  for (const Arc& arc : parent.intervals) {
    // Over the arc, x = m * alpha runs through (m lo, m hi); the allowed set is
    // x mod 1 in (0, k/d) for digit 0 and in (k/d, 1) for digit 1.
    const mpq_class xlo = mq * arc.lo, xhi = mq * arc.hi;
    mpz_class first = floor_z(xlo), last = floor_z(xhi);
    for (mpz_class t = first; t <= last; ++t) {
      mpq_class lo = digit == 0 ? mpq_class(t) : mpq_class(t) + kd;
      mpq_class hi = digit == 0 ? mpq_class(t) + kd : mpq_class(t + 1);
      lo = std::max(lo, xlo);
      hi = std::min(hi, xhi);
      if (lo < hi) {
        mpq_class a = lo / mq, b = hi / mq;
        a.canonicalize();
        b.canonicalize();
        out.intervals.push_back({a, b});
      }
    }
  }
  out.count = out.intervals.size();
  return out;
}

CylinderCover cylinder_cover(const std::string& word, int d, int k, int word_cap) {
  check_dk(d, k);
  require(2 * k < d, "the k = d/2 component is not supported");
  if (static_cast<int>(word.size()) > word_cap) {
    fail(ErrorKind::kResourceLimit, "word length exceeds the configured cap");
  }
  CylinderCover cover;
  cover.intervals.push_back({mpq_class(0), mpq_class(1)});
  cover.count = 1;
  for (char ch : word) {
    require(ch == '0' || ch == '1', "words are binary strings");
    cover = refine(cover, ch - '0', d, k);
  }
  return cover;
}

CountingReport verify_counting_bound(int d, int k, int n_max) {
  check_dk(d, k);
  require(2 * k < d, "the k = d/2 component is not supported");
  require(n_max >= 1 && n_max <= 20, "n_max must be in [1, 20]");
  CountingReport rep;
  rep.d = d;
  rep.k = k;
  rep.levels.resize(n_max);
  for (int n = 1; n <= n_max; ++n) {
    rep.levels[n - 1].n = n;
  }

  std::function<void(const CylinderCover&)> visit = [&](const CylinderCover& parent) {
    const int n = static_cast<int>(parent.word.size()) + 1;
    if (n > n_max) return;
    CylinderCover child[2] = {refine(parent, 0, d, k), refine(parent, 1, d, k)};
    // Refinement never loses arcs: count(w) <= count(w0) + count(w1) + 1.
    if (parent.count > child[0].count + child[1].count + 1) {
      rep.recursion_ok = false;
      if (rep.offending_word.empty()) rep.offending_word = parent.word;
    }
    for (const auto& c : child) {
      if (c.count > static_cast<std::size_t>(d - k) * parent.count + 1) ++rep.single_step_excess;
    }
    CountingLevel& L = rep.levels[n - 1];
    for (const auto& c : child) {
      if (c.count > L.max_count) {
        L.max_count = c.count;
        L.max_count_word = c.word;
      }
      for (const Arc& arc : c.intervals) {
        mpq_class len = arc.hi - arc.lo;
        L.total_length += len;
        if (len > L.max_length) {
          L.max_length = len;
          L.max_length_word = c.word;
        }
      }
      visit(c);
    }
  };
  visit(cylinder_cover("", d, k));

  rep.constant = static_cast<double>(rep.levels[0].max_count) / (d - k);
  for (auto& L : rep.levels) {
    L.bound = rep.constant * L.n * std::pow(static_cast<double>(d - k), L.n);
    if (static_cast<double>(L.max_count) > L.bound) {
      rep.counts_ok = false;
      if (rep.offending_word.empty()) rep.offending_word = L.max_count_word;
    }
    mpz_class dn;
    mpz_ui_pow_ui(dn.get_mpz_t(), d, L.n);
    if (L.max_length > mpq_class(2) / mpq_class(dn)) {
      rep.lengths_ok = false;
      if (rep.offending_word.empty()) rep.offending_word = L.max_length_word;
    }
  }

  // Least-squares slope of log N_n against n log d on the upper half.
  const int lo = std::max(1, n_max / 2);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (int n = lo; n <= n_max; ++n) {
    double x = n * std::log(static_cast<double>(d));
    double y = std::log(static_cast<double>(rep.levels[n - 1].max_count));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  if (cnt >= 2) {
    rep.dimension_estimate = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  } else {
    rep.dimension_estimate = std::log(static_cast<double>(rep.levels[0].max_count)) /
                             std::log(static_cast<double>(d));
  }
  rep.dimension_target = std::log(static_cast<double>(d - k)) / std::log(static_cast<double>(d));
  rep.dimension_ok = rep.dimension_estimate <= rep.dimension_target + 0.05;
  return rep;
}

std::string cover_csv(const CylinderCover& cover) {
  std::ostringstream os;
  os << "word,lo,hi\n";
  for (const Arc& a : cover.intervals) os << cover.word << ',' << qstr(a.lo) << ',' << qstr(a.hi) << '\n';
  return os.str();
}

}  // namespace bifurlab
