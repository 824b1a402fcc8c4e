/// @file enclosure.hpp
/// @brief Certified real enclosures of cyclotomic embeddings.
///
/// A RealEnclosure is an exact rational interval [lo, hi] guaranteed to
/// contain the real number in question.  Enclosures are produced by
/// evaluating trigonometric sums with MPFR under directed rounding
/// (MPFR_RNDD for lower, MPFR_RNDU for upper bounds); the MPFR endpoints are
/// dyadic rationals and are converted to mpq exactly, so no step of the
/// pipeline introduces unaccounted error.  Width shrinks roughly like
/// 2^-prec, so callers refine by doubling the working precision.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "smallhouse/cyclotomic.hpp"

namespace smallhouse {

struct RealEnclosure {
  Rat lo, hi;
  /// Working precision (bits) that produced this enclosure; 0 means the
  /// endpoints are exact by construction.
  unsigned precision_bits = 0;

  Rat width() const { return hi - lo; }
  bool contains(const Rat& q) const { return lo <= q && q <= hi; }
  /// -1 if the enclosed value is certainly < q, +1 if certainly > q,
  /// 0 if the interval straddles q (undecided).
  int compare(const Rat& q) const {
    if (hi < q) return -1;
    if (lo > q) return 1;
    return 0;
  }
  /// Hull of two enclosures (encloses both values).
  static RealEnclosure hull(const RealEnclosure& a, const RealEnclosure& b) {
    return {a.lo < b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi,
            a.precision_bits < b.precision_bits ? a.precision_bits
                                                : b.precision_bits};
  }
};

/// Sparse integer combination of roots of unity: pairs (exponent, coeff)
/// representing sum c_j * zeta_level^{e_j}.  Exponents need not be reduced.
using SparseTerms = std::vector<std::pair<u64, Int>>;

/// Enclose Re of the k-th embedding: sum_j c_j cos(2 pi k e_j / level).
/// Requires prec_bits >= 64.  The result is a true enclosure for any input;
/// when the element is totally real it encloses the embedding itself.
RealEnclosure cos_sum_enclosure(const SparseTerms& terms, u64 level, u64 k,
                                unsigned prec_bits);

/// Enclose Im of the k-th embedding: sum_j c_j sin(2 pi k e_j / level).
RealEnclosure sin_sum_enclosure(const SparseTerms& terms, u64 level, u64 k,
                                unsigned prec_bits);

/// Sparse view of a canonical element, as SparseTerms (exponents < phi).
SparseTerms sparse_of(const CyclotomicInt& a);

}  // namespace smallhouse
