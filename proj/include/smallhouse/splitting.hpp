/// @file splitting.hpp
/// @brief How a rational prime splits in Z[zeta_N], and the valuation boxes
///        that constrain elements with a fixed prime-power castle.
///
/// Everything is counting arithmetic on the Galois side: the ramification
/// index comes from the p-part of the level, the residue degree is the
/// multiplicative order of p modulo the prime-to-p part, and the primes above
/// p form a torsor under the quotient of the unit group by <p>.  No ideals
/// are ever materialised; orbit sizes and box dimensions are all the callers
/// need.

#pragma once

#include <cstdint>

#include <gmpxx.h>

#include "smallhouse/numtheory.hpp"

namespace smallhouse {

/// Splitting data for a rational prime p in Q(zeta_N).
///
/// With v = v_p(N) and N' = N / p^v:
///   * ramification  e = phi(p^v),
///   * residue_order f = order of p in (Z/N'Z)^x,
///   * num_primes    g = phi(N') / f      (primes of Q(zeta_N) above p).
/// The primes above p are permuted by complex conjugation; they pair up into
/// two-element orbits exactly when -1 is *not* a power of p mod N'
/// (`conjugation_split`), in which case a half-orbit transversal has
/// t_size = g/2 elements.  Otherwise every prime is self-conjugate and
/// t_size = 0.
struct SplittingProfile {
  u64 level = 1;              ///< N
  u64 prime = 2;              ///< p
  u64 ramification = 1;       ///< e
  u64 residue_order = 1;      ///< f
  u64 num_primes = 1;         ///< g
  bool conjugation_split = false;
  u64 t_size = 0;             ///< g/2 when split, else 0

  friend bool operator==(const SplittingProfile&,
                         const SplittingProfile&) = default;
};

/// Least t >= 1 with a^t = 1 (mod m).  Requires gcd(a, m) = 1 (throws
/// std::invalid_argument otherwise); the order modulo m = 1 is 1.
u64 multiplicative_order(u64 a, u64 m);

/// Full splitting profile of p in Q(zeta_N).  The residue order is assembled
/// as the lcm of the orders of p modulo the prime-power divisors of N'.
SplittingProfile splitting_profile(u64 level, u64 prime);

/// The box of candidate valuation vectors for elements alpha with
/// castle p^m in Q(zeta_N), one coordinate per half-orbit prime.
///
/// When the reference element is coprime to its conjugate the coordinate
/// range is [0, e*m]; when it is self-conjugate the range is symmetric,
/// [-e*m/2, e*m/2] (e*m must then be even).  A profile with t_size = 0
/// yields the empty product: a single point.
struct UkBox {
  u64 dims = 0;      ///< number of coordinates (= t_size)
  long lo = 0;       ///< per-axis lower bound (inclusive)
  long hi = 0;       ///< per-axis upper bound (inclusive)

  /// Number of lattice points in the box; 1 when dims = 0.
  mpz_class size() const;

  friend bool operator==(const UkBox&, const UkBox&) = default;
};

/// Box for castle c = profile.prime ^ m.  Throws std::invalid_argument when
/// the self-conjugate range would not be integral (e*m odd).
UkBox uk_box(const SplittingProfile& profile, unsigned m, bool self_conjugate);

}  // namespace smallhouse
