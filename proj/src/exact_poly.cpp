#include "bifurlab/exact_poly.hpp"

#include <algorithm>

#include "bifurlab/error.hpp"

namespace bifurlab {

IntPoly int_mul(const IntPoly& f, const IntPoly& g) {
  if (f.empty() || g.empty()) return {};
  IntPoly h(f.size() + g.size() - 1, 0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (std::size_t j = 0; j < g.size(); ++j) {
      mpz_addmul(h[i + j].get_mpz_t(), f[i].get_mpz_t(), g[j].get_mpz_t());
    }
  }
  int_trim(h);
  return h;
}

IntPoly int_sub(const IntPoly& f, const IntPoly& g) {
  IntPoly h(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < f.size(); ++i) h[i] += f[i];
  for (std::size_t i = 0; i < g.size(); ++i) h[i] -= g[i];
  int_trim(h);
  return h;
}

void int_trim(IntPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

namespace modp {

namespace {

using u32 = std::uint32_t;
using u64 = std::uint64_t;

u32 pow_mod(u64 b, u64 e, u32 p) {
  u64 r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return static_cast<u32>(r);
}

u32 inv_mod(u32 a, u32 p) { return pow_mod(a, p - 2, p); }

void ntt(std::vector<u32>& a, bool invert, const Prime& prime) {
  const u32 p = prime.p;
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    u32 w = pow_mod(prime.generator, (p - 1) / len, p);
    if (invert) w = inv_mod(w, p);
    std::vector<u32> ws(len / 2);
    ws[0] = 1;
    for (std::size_t k = 1; k < len / 2; ++k) ws[k] = static_cast<u64>(ws[k - 1]) * w % p;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        u32 u = a[i + k];
        u32 v = static_cast<u64>(a[i + k + len / 2]) * ws[k] % p;
        a[i + k] = u + v >= p ? u + v - p : u + v;
        a[i + k + len / 2] = u >= v ? u - v : u + p - v;
      }
    }
  }
  if (invert) {
    u32 ninv = inv_mod(static_cast<u32>(n % p), p);
    for (u32& x : a) x = static_cast<u64>(x) * ninv % p;
  }
}

}  // namespace

const std::vector<Prime>& ntt_primes() {
  static const std::vector<Prime> primes{
      {2013265921u, 31u}, {469762049u, 3u}, {998244353u, 3u}, {167772161u, 3u}};
  return primes;
}

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly mul(const Poly& f, const Poly& g, const Prime& prime) {
  if (f.empty() || g.empty()) return {};
  const std::size_t need = f.size() + g.size() - 1;
  if (std::min(f.size(), g.size()) < 32) {
    Poly h(need, 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        h[i + j] = (h[i + j] + static_cast<u64>(f[i]) * g[j]) % prime.p;
      }
    }
    trim(h);
    return h;
  }
  std::size_t n = 1;
  while (n < need) n <<= 1;
  require(((prime.p - 1) % n) == 0, "NTT length exceeds the prime's 2-adic order");
  std::vector<u32> a(f.begin(), f.end()), b(g.begin(), g.end());
  a.resize(n, 0);
  b.resize(n, 0);
  ntt(a, false, prime);
  ntt(b, false, prime);
  for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<u64>(a[i]) * b[i] % prime.p;
  ntt(a, true, prime);
  a.resize(need);
  trim(a);
  return a;
}

Poly sub(const Poly& f, const Poly& g, u32 p) {
  Poly h(std::max(f.size(), g.size()), 0);
  for (std::size_t i = 0; i < h.size(); ++i) {
    u64 x = i < f.size() ? f[i] : 0;
    u64 y = i < g.size() ? g[i] : 0;
    h[i] = static_cast<u32>((x + p - y) % p);
  }
  trim(h);
  return h;
}

Poly derivative(const Poly& f, u32 p) {
  if (f.size() <= 1) return {};
  Poly h(f.size() - 1);
  for (std::size_t i = 1; i < f.size(); ++i) h[i - 1] = static_cast<u64>(f[i]) * (i % p) % p;
  trim(h);
  return h;
}

namespace {

// Remainder of f modulo g, in place.
void rem_inplace(Poly& f, const Poly& g, u32 p) {
  const std::size_t m = g.size();
  const u32 lead_inv = inv_mod(g.back(), p);
  while (f.size() >= m) {
    u32 q = static_cast<u64>(f.back()) * lead_inv % p;
    if (q != 0) {
      const std::size_t shift = f.size() - m;
      for (std::size_t i = 0; i < m; ++i) {
        u64 t = static_cast<u64>(q) * g[i] % p;
        u32& x = f[shift + i];
        x = x >= t ? static_cast<u32>(x - t) : static_cast<u32>(x + p - t);
      }
    }
    f.pop_back();
    trim(f);
  }
}

}  // namespace

Poly divide_exact(const Poly& f, const Poly& g, u32 p) {
  require(!g.empty(), "division by zero polynomial");
  if (f.size() < g.size()) return {};
  Poly r = f;
  const std::size_t m = g.size();
  Poly q(f.size() - m + 1, 0);
  const u32 lead_inv = inv_mod(g.back(), p);
  for (std::size_t k = q.size(); k-- > 0;) {
    u32 c = static_cast<u64>(r[k + m - 1]) * lead_inv % p;
    q[k] = c;
    if (c == 0) continue;
    for (std::size_t i = 0; i < m; ++i) {
      u64 t = static_cast<u64>(c) * g[i] % p;
      u32& x = r[k + i];
      x = x >= t ? static_cast<u32>(x - t) : static_cast<u32>(x + p - t);
    }
  }
  trim(q);
  return q;
}

Poly gcd(Poly f, Poly g, u32 p) {
  trim(f);
  trim(g);
  while (!g.empty()) {
    rem_inplace(f, g, p);
    std::swap(f, g);
  }
  if (!f.empty()) {
    const u32 inv = inv_mod(f.back(), p);
    for (u32& x : f) x = static_cast<u64>(x) * inv % p;
  }
  return f;
}

std::vector<int> squarefree_profile(const Poly& f, u32 p) {
  require(f.size() >= 2, "need a nonconstant polynomial");
  std::vector<int> profile;
  Poly df = derivative(f, p);
  Poly a = gcd(f, df, p);
  Poly b = divide_exact(f, a, p);
  Poly c = divide_exact(df, a, p);
  Poly dd = sub(c, derivative(b, p), p);
  while (degree(b) > 0) {
    Poly ai = gcd(b, dd, p);
    profile.push_back(degree(ai));
    b = divide_exact(b, ai, p);
    c = divide_exact(dd, ai, p);
    dd = sub(c, derivative(b, p), p);
  }
  while (!profile.empty() && profile.back() == 0) profile.pop_back();
  return profile;
}

}  // namespace modp

}  // namespace bifurlab
