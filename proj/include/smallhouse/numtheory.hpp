/// @file numtheory.hpp
/// @brief Small elementary number-theory helpers used across the library.
///
/// Everything here works on machine integers (levels, prime powers, unit
/// group exponents are all far below 2^63 in this code base).  Exact
/// big-integer work lives in the cyclotomic layer on top of GMP.

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace smallhouse {

using u64 = std::uint64_t;
using i64 = std::int64_t;

/// Prime factorisation by trial division, smallest prime first.
/// Fine for the sizes that occur here (levels up to a few hundred thousand).
inline std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  if (n == 0) throw std::invalid_argument("factorize: n must be positive");
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    unsigned e = 0;
    while (n % p == 0) n /= p, ++e;
    out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

inline u64 euler_phi(u64 n) {
  u64 phi = 1;
  for (auto [p, e] : factorize(n)) {
    phi *= p - 1;
    for (unsigned i = 1; i < e; ++i) phi *= p;
  }
  return phi;
}

/// Moebius function; 0 when n has a square factor.
inline int mobius(u64 n) {
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    (void)p;
    mu = -mu;
  }
  return mu;
}

/// All positive divisors, ascending.
inline std::vector<u64> divisors(u64 n) {
  std::vector<u64> out{1};
  for (auto [p, e] : factorize(n)) {
    size_t old = out.size();
    u64 pk = 1;
    for (unsigned i = 1; i <= e; ++i) {
      pk *= p;
      for (size_t j = 0; j < old; ++j) out.push_back(out[j] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline u64 mod_mul(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 mod_pow(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mod_mul(r, base, m);
    base = mod_mul(base, base, m);
    exp >>= 1;
  }
  return r;
}

/// Modular inverse of a mod m.  Requires gcd(a, m) = 1.
inline u64 mod_inv(u64 a, u64 m) {
  if (m == 1) return 0;
  i64 t0 = 0, t1 = 1;
  i64 r0 = static_cast<i64>(m), r1 = static_cast<i64>(a % m);
  while (r1 != 0) {
    i64 q = r0 / r1;
    t0 = std::exchange(t1, t0 - q * t1);
    r0 = std::exchange(r1, r0 - q * r1);
  }
  if (r0 != 1) throw std::invalid_argument("mod_inv: arguments not coprime");
  return static_cast<u64>(t0 < 0 ? t0 + static_cast<i64>(m) : t0);
}

/// v_p(n): exponent of the prime p in n.
inline unsigned p_valuation(u64 n, u64 p) {
  unsigned v = 0;
  while (n % p == 0) n /= p, ++v;
  return v;
}

}  // namespace smallhouse
