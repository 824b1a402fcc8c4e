/// @file test_splitting.cpp
/// @brief Unit tests for prime splitting profiles in cyclotomic fields.
///
/// The expected (e, f, g) triples and search-box sizes below were computed
/// by hand from the standard decomposition law: for p with p^v || N and
/// N' = N / p^v, the ramification index is e = phi(p^v), the residue degree
/// f is the multiplicative order of p modulo N', and g = phi(N') / f.
/// Complex conjugation splits the primes above p exactly when -1 does not
/// lie in the subgroup generated by p modulo N'.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>

#include "smallhouse/numtheory.hpp"
#include "smallhouse/splitting.hpp"

using namespace smallhouse;

TEST_CASE("multiplicative order agrees with hand values") {
  // ord_7(2) = 3 since 2^3 = 8 = 1 + 7.
  CHECK(multiplicative_order(2, 7) == 3);
  // ord_11(5): 5, 25=3, 15=4, 20=9, 45=1 -> order 5.
  CHECK(multiplicative_order(5, 11) == 5);
  // 5 = 1 mod 4.
  CHECK(multiplicative_order(5, 4) == 1);
  // Everything is trivial mod 1.
  CHECK(multiplicative_order(3, 1) == 1);
  CHECK(multiplicative_order(0, 1) == 1);
  // 2 has order 6 mod 9 (2^6 = 64 = 1 + 63).
  CHECK(multiplicative_order(2, 9) == 6);
  // Non-coprime arguments are rejected.
  CHECK_THROWS_AS(multiplicative_order(6, 9), std::invalid_argument);
  CHECK_THROWS_AS(multiplicative_order(0, 5), std::invalid_argument);
}

TEST_CASE("orders of 2 modulo small prime powers") {
  // These are the cells of the short-circuit criterion for p = 2.
  CHECK(multiplicative_order(2, 9) == 6);
  CHECK(multiplicative_order(2, 5) == 4);
  CHECK(multiplicative_order(2, 7) == 3);
  CHECK(multiplicative_order(2, 11) == 10);
  CHECK(multiplicative_order(2, 13) == 12);
  CHECK(multiplicative_order(2, 17) == 8);
  CHECK(multiplicative_order(2, 19) == 18);
  CHECK(multiplicative_order(2, 23) == 11);
  CHECK(multiplicative_order(2, 29) == 28);
}

TEST_CASE("orders of 5 modulo small prime powers") {
  // The companion cells for p = 5.
  CHECK(multiplicative_order(5, 4) == 1);
  CHECK(multiplicative_order(5, 8) == 2);
  CHECK(multiplicative_order(5, 9) == 6);
  CHECK(multiplicative_order(5, 7) == 6);
  CHECK(multiplicative_order(5, 11) == 5);
  CHECK(multiplicative_order(5, 13) == 4);
  CHECK(multiplicative_order(5, 17) == 16);
  CHECK(multiplicative_order(5, 19) == 9);
  CHECK(multiplicative_order(5, 23) == 22);
  CHECK(multiplicative_order(5, 29) == 14);
}

TEST_CASE("splitting profile in Q(zeta_45) over p = 2") {
  // N = 45, p = 2: unramified (e = 1), f = lcm(ord_9(2), ord_5(2))
  // = lcm(6, 4) = 12, g = phi(45)/12 = 2.  2^6 = 64 = 19 mod 45 is not
  // -1, so conjugation splits the two primes and one conjugate-pair
  // coordinate remains.
  SplittingProfile s = splitting_profile(45, 2);
  CHECK(s.level == 45);
  CHECK(s.prime == 2);
  CHECK(s.ramification == 1);
  CHECK(s.residue_order == 12);
  CHECK(s.num_primes == 2);
  CHECK(s.conjugation_split);
  CHECK(s.t_size == 1);
}

TEST_CASE("splitting profile in Q(zeta_65) over p = 2") {
  // N = 65: f = lcm(ord_5(2), ord_13(2)) = lcm(4, 12) = 12, g = 4.
  // Here 2^6 = 64 = -1 mod 65, so conjugation fixes every prime.
  SplittingProfile s = splitting_profile(65, 2);
  CHECK(s.ramification == 1);
  CHECK(s.residue_order == 12);
  CHECK(s.num_primes == 4);
  CHECK_FALSE(s.conjugation_split);
  CHECK(s.t_size == 0);
}

TEST_CASE("splitting profile in Q(zeta_7) over p = 2") {
  // ord_7(2) = 3, so f = 3, g = 2; powers of 2 mod 7 are {1, 2, 4},
  // which misses -1 = 6, so the pair is split.
  SplittingProfile s = splitting_profile(7, 2);
  CHECK(s.ramification == 1);
  CHECK(s.residue_order == 3);
  CHECK(s.num_primes == 2);
  CHECK(s.conjugation_split);
  CHECK(s.t_size == 1);
}

TEST_CASE("ramified part is peeled off before computing the order") {
  // N = 40 = 2^3 * 5, p = 5: e = phi(5) = 4, N' = 8, ord_8(5) = 2,
  // g = phi(8)/2 = 2.  5^1 = 5 = -3 mod 8, 5^2 = 1: -1 is not a power
  // of 5 mod 8, so conjugation splits.
  SplittingProfile s = splitting_profile(40, 5);
  CHECK(s.ramification == 4);
  CHECK(s.residue_order == 2);
  CHECK(s.num_primes == 2);
  CHECK(s.conjugation_split);
  CHECK(s.t_size == 1);

  // N = 45 = 3^2 * 5, p = 5: N' = 9, ord_9(5) = 6, g = 1.  The single
  // prime is necessarily fixed by conjugation.
  SplittingProfile t = splitting_profile(45, 5);
  CHECK(t.ramification == 4);
  CHECK(t.residue_order == 6);
  CHECK(t.num_primes == 1);
  CHECK_FALSE(t.conjugation_split);

  // Totally ramified case: N = 9, p = 3 leaves N' = 1.
  SplittingProfile u = splitting_profile(9, 3);
  CHECK(u.ramification == 6);
  CHECK(u.residue_order == 1);
  CHECK(u.num_primes == 1);
  CHECK_FALSE(u.conjugation_split);
  CHECK(u.t_size == 0);
}

TEST_CASE("e * f * g = phi(N) for all levels up to 500") {
  for (u64 n = 1; n <= 500; ++n) {
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL,
                  23ULL, 29ULL, 31ULL, 37ULL, 41ULL, 43ULL, 47ULL}) {
      SplittingProfile s = splitting_profile(n, p);
      CHECK(s.ramification * s.residue_order * s.num_primes == euler_phi(n));
      // The lcm over prime-power divisors must match the direct order
      // of p in (Z/N')^* when p is coprime to N'.
      u64 np = n;
      while (np % p == 0) np /= p;
      CHECK(s.residue_order == multiplicative_order(p % np, np));
      // Split pairs account for an even number of primes.
      if (s.conjugation_split) CHECK(s.num_primes % 2 == 0);
      CHECK(s.t_size == (s.conjugation_split ? s.num_primes / 2 : 0));
    }
  }
}

TEST_CASE("conjugation never splits when the prime residue field is tiny") {
  // N' <= 2 forces -1 = 1 in (Z/N')^*, so no splitting is possible.
  CHECK_FALSE(splitting_profile(8, 2).conjugation_split);
  CHECK_FALSE(splitting_profile(2, 2).conjugation_split);
  CHECK_FALSE(splitting_profile(10, 5).conjugation_split);
  CHECK_FALSE(splitting_profile(1, 3).conjugation_split);
}

TEST_CASE("search boxes over split levels") {
  // c = 4 rows: alpha * conj(alpha) = 4 admits the stated boxes.
  SplittingProfile s45 = splitting_profile(45, 2);
  UkBox b45 = uk_box(s45, 2, /*self_conjugate=*/true);
  CHECK(b45.dims == 1);
  CHECK(b45.lo == -1);
  CHECK(b45.hi == 1);
  CHECK(b45.size() == 3);

  SplittingProfile s39 = splitting_profile(39, 2);
  CHECK(s39.residue_order == 12);  // lcm(ord_3(2)=2, ord_13(2)=12)
  CHECK(s39.num_primes == 2);
  CHECK(s39.conjugation_split);
  UkBox b39 = uk_box(s39, 2, true);
  CHECK(b39.dims == 1);
  CHECK(b39.size() == 3);

  SplittingProfile s65 = splitting_profile(65, 2);
  UkBox b65 = uk_box(s65, 2, true);
  CHECK(b65.dims == 0);
  CHECK(b65.size() == 1);  // a single exponent vector survives

  // c = 5 rows.
  SplittingProfile s40 = splitting_profile(40, 5);
  UkBox b40 = uk_box(s40, 1, true);  // e = 4, m = 1: box [-2, 2]
  CHECK(b40.dims == 1);
  CHECK(b40.lo == -2);
  CHECK(b40.hi == 2);
  CHECK(b40.size() == 5);

  SplittingProfile s28 = splitting_profile(28, 5);
  CHECK(s28.ramification == 1);
  CHECK(s28.residue_order == multiplicative_order(5, 28));
  CHECK(s28.conjugation_split);
  CHECK(s28.t_size == 1);
  UkBox b28 = uk_box(s28, 1, /*self_conjugate=*/false);
  CHECK(b28.dims == 1);
  CHECK(b28.lo == 0);
  CHECK(b28.hi == 1);
  CHECK(b28.size() == 2);

  SplittingProfile s315 = splitting_profile(315, 5);
  CHECK_FALSE(s315.conjugation_split);
  CHECK(uk_box(s315, 1, true).dims == 0);

  SplittingProfile s51 = splitting_profile(51, 5);
  CHECK(s51.conjugation_split);
  CHECK(s51.t_size == 1);
  UkBox b51 = uk_box(s51, 1, false);
  CHECK(b51.size() == 2);

  SplittingProfile s57 = splitting_profile(57, 5);
  CHECK(s57.conjugation_split);
  CHECK(s57.t_size == 1);
  CHECK(uk_box(s57, 1, false).size() == 2);

  CHECK_FALSE(splitting_profile(115, 5).conjugation_split);
  CHECK_FALSE(splitting_profile(145, 5).conjugation_split);
  CHECK(uk_box(splitting_profile(115, 5), 1, true).size() == 1);
  CHECK(uk_box(splitting_profile(145, 5), 1, true).size() == 1);
}

TEST_CASE("search box argument validation") {
  SplittingProfile s = splitting_profile(45, 2);  // e = 1
  // Self-conjugate boxes need e*m even to center the interval.
  CHECK_THROWS_AS(uk_box(s, 1, true), std::invalid_argument);
  CHECK_THROWS_AS(uk_box(s, 0, false), std::invalid_argument);
  // Asymmetric boxes have no parity constraint.
  UkBox b = uk_box(s, 1, false);
  CHECK(b.lo == 0);
  CHECK(b.hi == 1);

  // Larger multiplicity scales the box linearly.
  UkBox b3 = uk_box(splitting_profile(40, 5), 3, false);  // e = 4, m = 3
  CHECK(b3.lo == 0);
  CHECK(b3.hi == 12);
  CHECK(b3.size() == 13);
}

TEST_CASE("box size grows geometrically with the dimension count") {
  // Fabricate a profile with several split pairs to exercise size().
  SplittingProfile s;
  s.ramification = 2;
  s.conjugation_split = true;
  s.t_size = 5;
  UkBox b = uk_box(s, 1, true);  // each axis {-1, 0, 1}
  CHECK(b.dims == 5);
  CHECK(b.size() == 243);  // 3^5
}
