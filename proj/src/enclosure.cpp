/// @file enclosure.cpp
/// @brief MPFR directed-rounding evaluation of cyclotomic trig sums.
///
/// The only analytic fact used: for integers t, N with 2t not a multiple of
/// N, the angle theta = 2 pi t / N is at distance >= pi/N from every
/// extremum of cos (multiples of pi), and when additionally 4t is not
/// congruent to N mod 2N, at distance >= pi/(2N) from every extremum of sin.
/// Our computed angle interval has width around 2^(6-prec), vastly smaller
/// than pi/(2N) for prec >= 64 and any level this library accepts, so the
/// trig functions are strictly monotone on the interval and the hull of the
/// endpoint values is a valid enclosure.  The extremal angles themselves are
/// handled exactly (cos = +-1/0, sin = 0/+-1).

#include "smallhouse/enclosure.hpp"

#include <mpfr.h>

#include <stdexcept>

namespace smallhouse {

namespace {

/// Exact conversion of an MPFR dyadic value to mpq.
Rat mpfr_to_rat(mpfr_t x) {
  if (mpfr_zero_p(x)) return Rat(0);
  if (!mpfr_number_p(x)) throw std::logic_error("enclosure: non-finite value");
  mpz_class mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
  Rat q(mant);
  if (e >= 0) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(e));
    q *= Rat(scale);
  } else {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 2, static_cast<unsigned long>(-e));
    q /= Rat(scale);
  }
  return q;
}

enum class Trig { kCos, kSin };

/// Exact special values at angles 2 pi t / N that are multiples of pi/2.
/// Returns true and fills out when the angle is such a multiple.
bool exact_value(u64 t, u64 n, Trig f, int* out) {
  if ((2 * t) % n == 0) {
    // theta = 0 or pi.
    *out = (f == Trig::kCos) ? (t == 0 ? 1 : -1) : 0;
    return true;
  }
  if ((4 * t) % n == 0) {
    // With 0 <= t < n and 2t not a multiple of n, 4t is either n (theta =
    // pi/2) or 3n (theta = 3 pi/2).
    *out = (f == Trig::kCos) ? 0 : (4 * t == n ? 1 : -1);
    return true;
  }
  return false;
}

/// Enclose f(2 pi t / N) for f in {cos, sin}, 0 <= t < N, writing directed
/// endpoints into lo/hi (which must be initialised to the working precision).
void trig_enclosure(u64 t, u64 n, Trig f, mpfr_t lo, mpfr_t hi) {
  int exact;
  if (exact_value(t, n, f, &exact)) {
    mpfr_set_si(lo, exact, MPFR_RNDD);
    mpfr_set_si(hi, exact, MPFR_RNDU);
    return;
  }
  mpfr_prec_t prec = mpfr_get_prec(lo);
  mpfr_t theta_lo, theta_hi, a, b;
  mpfr_inits2(prec, theta_lo, theta_hi, a, b, static_cast<mpfr_ptr>(nullptr));
  // theta = pi * (2t/N), computed with directed rounding on pi and on the
  // rational scaling (2t/N > 0, so rounding directions are preserved).
  mpfr_const_pi(theta_lo, MPFR_RNDD);
  mpfr_mul_ui(theta_lo, theta_lo, static_cast<unsigned long>(2 * t), MPFR_RNDD);
  mpfr_div_ui(theta_lo, theta_lo, static_cast<unsigned long>(n), MPFR_RNDD);
  mpfr_const_pi(theta_hi, MPFR_RNDU);
  mpfr_mul_ui(theta_hi, theta_hi, static_cast<unsigned long>(2 * t), MPFR_RNDU);
  mpfr_div_ui(theta_hi, theta_hi, static_cast<unsigned long>(n), MPFR_RNDU);

  // Monotone hull (see file comment for why no extremum can lie between
  // theta_lo and theta_hi).
  if (f == Trig::kCos) {
    mpfr_cos(a, theta_lo, MPFR_RNDD);
    mpfr_cos(b, theta_hi, MPFR_RNDD);
    mpfr_min(lo, a, b, MPFR_RNDD);
    mpfr_cos(a, theta_lo, MPFR_RNDU);
    mpfr_cos(b, theta_hi, MPFR_RNDU);
    mpfr_max(hi, a, b, MPFR_RNDU);
  } else {
    mpfr_sin(a, theta_lo, MPFR_RNDD);
    mpfr_sin(b, theta_hi, MPFR_RNDD);
    mpfr_min(lo, a, b, MPFR_RNDD);
    mpfr_sin(a, theta_lo, MPFR_RNDU);
    mpfr_sin(b, theta_hi, MPFR_RNDU);
    mpfr_max(hi, a, b, MPFR_RNDU);
  }
  mpfr_clears(theta_lo, theta_hi, a, b, static_cast<mpfr_ptr>(nullptr));
}

RealEnclosure trig_sum_enclosure(const SparseTerms& terms, u64 level, u64 k,
                                 unsigned prec_bits, Trig f) {
  if (level == 0) throw std::invalid_argument("enclosure: level must be >= 1");
  if (prec_bits < 64) throw std::invalid_argument("enclosure: prec < 64");
  mpfr_t acc_lo, acc_hi, t_lo, t_hi, term_lo, term_hi;
  mpfr_inits2(prec_bits, acc_lo, acc_hi, t_lo, t_hi, term_lo, term_hi,
              static_cast<mpfr_ptr>(nullptr));
  mpfr_set_zero(acc_lo, 1);
  mpfr_set_zero(acc_hi, 1);
  for (const auto& [e, c] : terms) {
    if (c == 0) continue;
    u64 t = (e % level) * (k % level) % level;
    trig_enclosure(t, level, f, t_lo, t_hi);
    // Scale [t_lo, t_hi] by the integer c, then accumulate with directed
    // rounding.  For c < 0 the endpoints swap.
    if (c > 0) {
      mpfr_mul_z(term_lo, t_lo, c.get_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(term_hi, t_hi, c.get_mpz_t(), MPFR_RNDU);
    } else {
      mpfr_mul_z(term_lo, t_hi, c.get_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(term_hi, t_lo, c.get_mpz_t(), MPFR_RNDU);
    }
    mpfr_add(acc_lo, acc_lo, term_lo, MPFR_RNDD);
    mpfr_add(acc_hi, acc_hi, term_hi, MPFR_RNDU);
  }
  RealEnclosure out{mpfr_to_rat(acc_lo), mpfr_to_rat(acc_hi), prec_bits};
  mpfr_clears(acc_lo, acc_hi, t_lo, t_hi, term_lo, term_hi,
              static_cast<mpfr_ptr>(nullptr));
  return out;
}

}  // namespace

RealEnclosure cos_sum_enclosure(const SparseTerms& terms, u64 level, u64 k,
                                unsigned prec_bits) {
  return trig_sum_enclosure(terms, level, k, prec_bits, Trig::kCos);
}

RealEnclosure sin_sum_enclosure(const SparseTerms& terms, u64 level, u64 k,
                                unsigned prec_bits) {
  return trig_sum_enclosure(terms, level, k, prec_bits, Trig::kSin);
}

SparseTerms sparse_of(const CyclotomicInt& a) {
  SparseTerms out;
  for (const auto& [e, c] : a.sparse_terms()) out.emplace_back(e, c);
  return out;
}

}  // namespace smallhouse
