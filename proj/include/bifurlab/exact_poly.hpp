#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace bifurlab {

/// Integer polynomial, constant term first, no trailing zeros.
using IntPoly = std::vector<mpz_class>;

IntPoly int_mul(const IntPoly& f, const IntPoly& g);
IntPoly int_sub(const IntPoly& f, const IntPoly& g);
void int_trim(IntPoly& f);

namespace modp {

/// Polynomials over F_p with p an NTT-friendly prime below 2^31.
using Poly = std::vector<std::uint32_t>;

struct Prime {
  std::uint32_t p;
  std::uint32_t generator;
};

/// NTT primes, all larger than any degree handled by the solver.
const std::vector<Prime>& ntt_primes();

Poly mul(const Poly& f, const Poly& g, const Prime& prime);
Poly sub(const Poly& f, const Poly& g, std::uint32_t p);
Poly derivative(const Poly& f, std::uint32_t p);
/// Quotient of an exact division.
Poly divide_exact(const Poly& f, const Poly& g, std::uint32_t p);
Poly gcd(Poly f, Poly g, std::uint32_t p);
void trim(Poly& f);
int degree(const Poly& f);

/// Yun's square-free decomposition; entry i is deg a_{i+1} where
/// f = lead * prod a_i^i.
std::vector<int> squarefree_profile(const Poly& f, std::uint32_t p);

}  // namespace modp

}  // namespace bifurlab
