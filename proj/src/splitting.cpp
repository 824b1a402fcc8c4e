#include "smallhouse/splitting.hpp"

#include <numeric>
#include <stdexcept>

namespace smallhouse {

u64 multiplicative_order(u64 a, u64 m) {
  if (m == 0) throw std::invalid_argument("multiplicative_order: zero modulus");
  if (m == 1) return 1;
  if (std::gcd(a % m, m) != 1)
    throw std::invalid_argument("multiplicative_order: arguments not coprime");
  // The order divides phi(m); strip each prime of phi(m) while the power
  // still fixes 1.
  u64 order = euler_phi(m);
  for (auto [q, e] : factorize(order)) {
    (void)e;
    while (order % q == 0 && mod_pow(a, order / q, m) == 1) order /= q;
  }
  return order;
}

SplittingProfile splitting_profile(u64 level, u64 prime) {
  if (level == 0) throw std::invalid_argument("splitting_profile: level >= 1");
  SplittingProfile out;
  out.level = level;
  out.prime = prime;

  const unsigned v = p_valuation(level, prime);
  u64 p_part = 1;
  for (unsigned i = 0; i < v; ++i) p_part *= prime;
  const u64 n_prime_free = level / p_part;  // N', coprime to p
  out.ramification = euler_phi(p_part);

  // Residue order: lcm of the order of p modulo each prime-power divisor of
  // N'.  (Equivalent to the order modulo N' itself by CRT; the tests check
  // the two agree.)
  u64 f = 1;
  for (auto [q, e] : factorize(n_prime_free)) {
    u64 qe = 1;
    for (unsigned i = 0; i < e; ++i) qe *= q;
    f = std::lcm(f, multiplicative_order(prime % qe, qe));
  }
  out.residue_order = f;
  out.num_primes = euler_phi(n_prime_free) / f;

  // The primes above p pair under conjugation iff -1 is not a power of p
  // mod N'.  In the cyclic group <p> of order f, an element of order 2
  // exists only for f even and is then p^{f/2}; for N' <= 2 the unit group
  // is trivial, so -1 = 1 is always a power of p.
  bool minus_one_in_p = true;
  if (n_prime_free > 2) {
    minus_one_in_p =
        f % 2 == 0 && mod_pow(prime, f / 2, n_prime_free) == n_prime_free - 1;
  }
  out.conjugation_split = !minus_one_in_p;
  out.t_size = out.conjugation_split ? out.num_primes / 2 : 0;
  return out;
}

mpz_class UkBox::size() const {
  mpz_class out;
  const unsigned long width = static_cast<unsigned long>(hi - lo + 1);
  mpz_ui_pow_ui(out.get_mpz_t(), width, static_cast<unsigned long>(dims));
  return out;
}

UkBox uk_box(const SplittingProfile& profile, unsigned m, bool self_conjugate) {
  if (m == 0) throw std::invalid_argument("uk_box: castle exponent m >= 1");
  UkBox box;
  box.dims = profile.t_size;
  const u64 em = profile.ramification * m;
  if (self_conjugate) {
    if (em % 2 != 0)
      throw std::invalid_argument(
          "uk_box: self-conjugate range needs e*m even");
    box.lo = -static_cast<long>(em / 2);
    box.hi = static_cast<long>(em / 2);
  } else {
    box.lo = 0;
    box.hi = static_cast<long>(em);
  }
  return box;
}

}  // namespace smallhouse
