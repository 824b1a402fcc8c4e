/// @file measures.hpp
/// @brief Complexity measures and classification of cyclotomic integers.
///
/// Four invariants of a cyclotomic integer a, all constant on the
/// equivalence class of a under Galois maps and multiplication by roots of
/// unity:
///
///  * cassels_height  M(a) = Tr(a conj(a)) / phi(N), an exact rational;
///  * the castle      max_k |sigma_k(a)|^2, a real algebraic number handled
///                    through certified enclosures and exact comparisons;
///  * minimal_level   the least N0 with a ~ element of Z[zeta_{N0}];
///  * minimal_weight  the least n with a equal to a sum of n roots of unity.
///
/// On top of these sit the equivalence hash (a perfect invariant: two
/// elements are equivalent iff their keys are equal) and the Cassels-form
/// test deciding membership in the three parametric families
///   (1) zeta' + zeta'',  (2) 1 + zeta - zeta^{-1},
///   (3) (zeta_5+zeta_5^4) + (zeta_5^2+zeta_5^3) zeta,
/// whose exact castles, heights and minimal levels are provided by
/// family_values.

#pragma once

#include <string>
#include <vector>

#include "smallhouse/cyclotomic.hpp"
#include "smallhouse/enclosure.hpp"

namespace smallhouse {

/// Exact Cassels height M(a) = Tr(a conj(a)) / phi(level).
Rat cassels_height(const CyclotomicInt& a);

/// Cassels height of a sparse sum c_1 zeta^{e_1} + ... at the given level,
/// computed from the closed-form traces Tr(zeta_N^j) = mu(N/g) phi(N)/phi(N/g)
/// without building the dense coefficient vector (usable far above the dense
/// level cap).
Rat sparse_cassels_height(const SparseTerms& terms, u64 level);

/// Enclosure of the squared castle max_k |sigma_k(a)|^2 with width at most
/// max_width (precision escalates until the bound is met; exact enclosures
/// of width 0 can occur, e.g. for rational a).
RealEnclosure castle_enclosure(const CyclotomicInt& a, const Rat& max_width);

/// Single-pass enclosure of the squared castle at a fixed working precision.
RealEnclosure castle_enclosure_at(const CyclotomicInt& a, unsigned prec_bits);

/// Three-way outcome of an exact comparison.
enum class Cmp { kLess, kEqual, kGreater };

/// Decide the squared castle of a against the rational q, exactly.
/// Refinement separates every conjugate whose value differs from q; a
/// conjugate can equal q only when q is a rational integer, which is
/// detected by exact subtraction.  Always terminates.
Cmp castle_compare(const CyclotomicInt& a, const Rat& q);

/// True iff the squared castle of a equals the (totally real) target under
/// the identity embedding: some conjugate of a conj(a) equals target exactly
/// and every other conjugate is strictly smaller.  Throws
/// std::invalid_argument if target != conj(target).
bool castle_equals(const CyclotomicInt& a, const CyclotomicInt& target);

/// (25/252)^{phi(N)} = (10 + 2/25)^{-phi(N)}: if two elements of Q(zeta_N)
/// with squared castles <= 5 + 1/25 have squared-castle difference below
/// this bound, the castles are equal.
Rat separation_threshold(u64 level);

/// Result of minimal-level reduction: a = witness * element (embedded), with
/// element.level() minimal over the equivalence class.  The minimal level is
/// always odd or divisible by 4.
struct MinimalLevelResult {
  CyclotomicInt element;
  RootOfUnity witness;
};
MinimalLevelResult minimal_level(const CyclotomicInt& a);

/// Perfect equivalence invariant: the minimal polynomial, monic with integer
/// coefficients listed highest degree first (leading 1 included), that is
/// (degree, lexicographically) smallest over all root-of-unity multiples of
/// the minimal-level rewrite of a.  Equal keys <=> equivalent elements.
std::vector<Int> equivalence_hash(const CyclotomicInt& a);

/// Render a coefficient vector (highest first) as a polynomial in x.
std::string poly_to_string(const std::vector<Int>& coeffs);

/// Result of the minimal-weight search.  When exceeded is false, weight is
/// the exact minimal number of roots of unity summing to a, and witness
/// lists such roots (sum of witness values equals a exactly).  When the
/// minimal weight would exceed the given bound, exceeded is true; this is a
/// normal outcome, not an error.
struct WeightResult {
  bool exceeded = false;
  unsigned weight = 0;
  std::vector<RootOfUnity> witness;
};
WeightResult minimal_weight(const CyclotomicInt& a, unsigned max_weight);

/// The three Cassels families (kNone = not a family member).
enum class CasselsForm { kNone, kForm1, kForm2, kForm3 };

/// Outcome of the form test.  For kForm1, weight is the (<= 2) weight found.
/// For kForm2/kForm3, parameter is the order of the root of unity
/// instantiating the family member the input was matched against (the test
/// reports the first matching form; the finitely many classes lying in both
/// family (2) and family (3) report kForm2).
struct CasselsTestResult {
  CasselsForm form = CasselsForm::kNone;
  unsigned weight = 0;
  u64 parameter = 0;
};
CasselsTestResult cassels_form_test(const CyclotomicInt& a);

/// The castle-parameter map: largest M with cos(2 pi / M) = cos^2(pi / N)
/// bookkeeping aside, concretely 2N, N, N/4, N/2 for N odd, 2 mod 4,
/// 4 mod 8, 0 mod 8 respectively.
u64 n_prime(u64 n);

/// The family member itself: form 1 -> 1 + zeta_n, form 2 ->
/// 1 + zeta_n - zeta_n^{-1}, form 3 -> (zeta_5+zeta_5^4) +
/// (zeta_5^2+zeta_5^3) zeta_n.
CyclotomicInt family_element(CasselsForm form, u64 n);

/// Exact invariants of the family member with parameter n (a primitive
/// n-th root of unity):
///  * modulus_sq: |alpha|^2 at the identity embedding, as an exact totally
///    real element (form 1: 2 + zeta_n + zeta_n^{-1}; form 2:
///    3 - zeta_n^2 - zeta_n^{-2}; form 3: 3 - zeta_n - zeta_n^{-1});
///  * castle_sq: the squared castle 3 + zeta_M + zeta_M^{-1} (form 1:
///    2 + zeta_n + zeta_n^{-1}) with M = n_prime(n) for form 2 and
///    M = n_prime(2n) for form 3;
///  * height: 2 + 2 mu(n)/phi(n) for form 1, 3 + 2 mu(M)/phi(M) otherwise
///    (the parameter of the height formula is the castle parameter M);
///  * minimal_level: closed form, including the degenerate small cases.
struct FamilyValues {
  CyclotomicInt modulus_sq;
  CyclotomicInt castle_sq;
  Rat height;
  u64 minimal_level;
};
FamilyValues family_values(CasselsForm form, u64 n);

/// 3 + 2 mu(N)/phi(N): the Cassels height of every element whose squared
/// castle is 1 + 4 cos^2(pi / N).
Rat height_family_formula(u64 n);

}  // namespace smallhouse
