/// @file cyclotomic.hpp
/// @brief Exact arithmetic in rings of cyclotomic integers Z[zeta_N].
///
/// An element of Z[zeta_N] is stored as its coordinate vector over the power
/// basis {zeta_N^i : 0 <= i < phi(N)}, i.e. as the canonical representative
/// of a polynomial in zeta_N modulo the N-th cyclotomic polynomial Phi_N.
/// Two elements at different levels are compared and combined by first
/// embedding both into the compositum Q(zeta_lcm).
///
/// Everything is exact: coefficients are GMP integers and no operation ever
/// rounds.  Per-level data (Phi_N, reduction rows for zeta_N^k with
/// k >= phi(N), the trace table, the unit group) is computed once and cached
/// behind a mutex, so CyclotomicInt values are cheap to copy and thread-safe
/// to use concurrently.

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smallhouse/numtheory.hpp"

namespace smallhouse {

using Int = mpz_class;
using Rat = mpq_class;

/// Largest level for which dense canonical arithmetic is allowed.  The
/// reduction table costs O(N * phi(N)) integers; beyond this bound callers
/// (only the large exhaustive-search presets) must use the sparse paths.
inline constexpr unsigned kMaxDenseLevel = 1200;

/// Immutable per-level data, built once and shared.
struct LevelData {
  unsigned level = 1;   ///< N
  unsigned phi = 1;     ///< phi(N), the rank of Z[zeta_N]
  /// Coefficients of Phi_N, degree phi, cyclo[phi] == 1 (monic).
  std::vector<Int> cyclo;
  /// reduction[k - phi] = canonical vector of zeta_N^k, for phi <= k < N.
  std::vector<std::vector<Int>> reduction;
  /// trace[j] = Tr_{Q(zeta_N)/Q}(zeta_N^j) for 0 <= j < N.
  std::vector<Int> trace;
  /// Units of Z/N, ascending, represented in [1, N] (so level 1 stores {1}).
  std::vector<unsigned> units;

  /// Fetch (and lazily build) the shared data for a level.
  /// Throws std::invalid_argument for level 0 or level > kMaxDenseLevel.
  static const LevelData& get(unsigned level);
};

/// A root of unity zeta_order^exponent in lowest terms:
/// gcd(exponent, order) == 1, 0 <= exponent < order, and the trivial root is
/// (order 1, exponent 0).  Used for minimal-level witnesses.
struct RootOfUnity {
  unsigned order = 1;
  unsigned exponent = 0;

  /// Reduce an arbitrary pair (e mod n) to lowest terms.
  static RootOfUnity make(unsigned order, long exponent);
  /// Multiply two roots of unity (fractions of a full turn add).
  RootOfUnity operator*(const RootOfUnity& o) const;
  RootOfUnity inverse() const;
  bool operator==(const RootOfUnity& o) const = default;
  std::string str() const;
};

/// Exact cyclotomic integer at an explicit level.
class CyclotomicInt {
 public:
  /// Zero at level 1.
  CyclotomicInt() : level_(1), coeffs_(1) {}

  static CyclotomicInt zero(unsigned level);
  static CyclotomicInt one(unsigned level);
  static CyclotomicInt from_int(const Int& v, unsigned level = 1);
  /// zeta_level^exponent (exponent taken mod level).
  static CyclotomicInt root_power(unsigned level, long exponent);
  /// Build from a sparse list of (exponent, coefficient) terms; exponents are
  /// reduced mod level and the result is put in canonical form.
  static CyclotomicInt from_sparse(
      unsigned level, const std::vector<std::pair<long, Int>>& terms);

  unsigned level() const { return level_; }
  unsigned phi() const { return static_cast<unsigned>(coeffs_.size()); }
  const std::vector<Int>& coeffs() const { return coeffs_; }

  bool is_zero() const;
  /// If the element is rational (i.e. integral here), report its value.
  std::optional<Int> as_integer() const;

  CyclotomicInt operator-() const;
  CyclotomicInt operator+(const CyclotomicInt& o) const;
  CyclotomicInt operator-(const CyclotomicInt& o) const;
  CyclotomicInt operator*(const CyclotomicInt& o) const;
  CyclotomicInt& operator+=(const CyclotomicInt& o) { return *this = *this + o; }
  CyclotomicInt& operator-=(const CyclotomicInt& o) { return *this = *this - o; }
  CyclotomicInt& operator*=(const CyclotomicInt& o) { return *this = *this * o; }
  /// Equality compares the underlying algebraic numbers: different levels are
  /// embedded into their compositum first.
  bool operator==(const CyclotomicInt& o) const;
  bool operator!=(const CyclotomicInt& o) const { return !(*this == o); }

  CyclotomicInt operator*(const Int& c) const;
  CyclotomicInt multiply_root(long exponent) const;  ///< times zeta_level^e

  /// Apply the Galois automorphism zeta_N -> zeta_N^a.
  /// Requires gcd(a, level) == 1 (throws otherwise).
  CyclotomicInt galois(u64 a) const;
  /// Complex conjugation (the automorphism zeta -> zeta^-1).
  CyclotomicInt conjugate() const;
  /// Tr_{Q(zeta_N)/Q}; exact integer.
  Int trace() const;

  /// Re-express at a larger level M (requires level | M).
  CyclotomicInt to_level(unsigned m) const;
  /// Exact test for membership in Q(zeta_m) for a divisor m of the level,
  /// returning the rewritten element on success.  m must divide level.
  std::optional<CyclotomicInt> restrict_to(unsigned m) const;

  /// Sparse view: the nonzero (exponent, coefficient) pairs of the canonical
  /// vector, ascending by exponent.
  std::vector<std::pair<unsigned, Int>> sparse_terms() const;

  std::string str() const;  ///< human-readable, e.g. "1 + z^3 - 2*z^5"

 private:
  CyclotomicInt(unsigned level, std::vector<Int> coeffs)
      : level_(level), coeffs_(std::move(coeffs)) {}

  unsigned level_;
  std::vector<Int> coeffs_;  ///< size phi(level)

  friend struct PDecomposition;
};

/// Result of writing alpha = sum_{i<p} eta_i * zeta_{p^n}^i with
/// eta_i in Q(zeta_{N/p}), where n = v_p(N) >= 1.
///
/// For n >= 2 the parts are unique.  For n = 1 they are unique up to adding a
/// common shift to every part (because 1 + zeta_p + ... + zeta_p^{p-1} = 0);
/// the representative here is normalised so that the most frequent part value
/// becomes zero, which minimises the number x of nonzero parts.  Ties between
/// equally frequent values are broken toward the value whose canonical
/// coefficient vector is lexicographically smallest.
struct PDecomposition {
  unsigned p = 0;                    ///< the prime
  unsigned n = 0;                    ///< v_p(level)
  std::vector<CyclotomicInt> parts;  ///< size p, each at level N/p
  std::vector<unsigned> support;     ///< ascending indices of nonzero parts
  unsigned x = 0;                    ///< support.size()

  /// Reassemble sum parts[i] * zeta_{p^n}^i at the original level.
  CyclotomicInt recompose(unsigned original_level) const;
};

/// Decompose along a prime p dividing the level.  Throws if p does not
/// divide the level.
PDecomposition p_decompose(const CyclotomicInt& alpha, unsigned p);

std::ostream& operator<<(std::ostream& os, const CyclotomicInt& a);

}  // namespace smallhouse
