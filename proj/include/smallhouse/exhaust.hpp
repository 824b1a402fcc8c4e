/// @file exhaust.hpp
/// @brief Certified exhaustive search for small-castle sums of roots of unity.
///
/// A job (N, n) enumerates, up to root-of-unity multiplication, Galois maps
/// and complex conjugation, every sum of at most n N'-th roots of unity
/// (N' = lcm(2, N), so signs are absorbed into the roots) and keeps the
/// sums whose squared castle is at most 501/100.  The pipeline is
///
///   1. a symmetry-reduced enumeration of exponent tuples, with pruning
///      rules that discard only tuples equivalent to other enumerated
///      tuples, to lower-weight sums, or to known family members;
///   2. a certified floating-point sieve: every trig-table entry is proved
///      within 1e-14 of the true value, making the 5.1 float cut safe for
///      the exact 5.01 threshold;
///   3. exact verification of the float survivors with the measures
///      machinery: castles are compared exactly, survivors are classified
///      as family members, known exceptional entries, or New.
///
/// Determinism: the enumeration order is (tuple size, tuple) lexicographic,
/// work is sharded on (size, second entry, third entry), and shard results
/// are concatenated in enumeration order, so reports are byte-identical for
/// every worker count.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "smallhouse/measures.hpp"

namespace smallhouse {

/// One search job over sums of at most `weight` roots of unity of order
/// dividing level, folded to exponent tuples modulo n_prime = lcm(2, level).
struct ExhaustJob {
  u64 level = 0;
  unsigned weight = 0;
  u64 n_prime = 0;
  double float_threshold = 5.1;   ///< float sieve cut (safe margin)
  Rat exact_threshold;            ///< 501/100, the exact survivor bound
};

/// Build the job for a level/weight pair.
ExhaustJob make_job(u64 level, unsigned weight);

/// Tables of cos/sin(2 pi j / modulus) in binary64, each entry certified at
/// construction to lie within 1e-14 of the true value via exact rational
/// enclosures.  Construction throws std::logic_error if any entry fails.
class CertifiedTrigTable {
 public:
  explicit CertifiedTrigTable(u64 modulus);
  double cos_at(u64 j) const { return cos_[j]; }
  double sin_at(u64 j) const { return sin_[j]; }
  u64 modulus() const { return modulus_; }
  /// Largest certified |table - truth| bound over all entries (<= 1e-14).
  double max_slack() const { return max_slack_; }

 private:
  u64 modulus_;
  std::vector<double> cos_, sin_;
  double max_slack_ = 0;
};

/// True iff the tuple is in canonical admissible form for the given
/// modulus: (0), an all-zero tuple, or (0, d, rest) with d a proper divisor
/// of n_prime, rest sorted ascending with gcd(entry, n_prime) >= d, and
/// none of the pruning rules violated.
bool admissible_tuple(const std::vector<u64>& tuple, u64 n_prime);

/// Visit every admissible tuple of size 1..max_weight in (size, tuple)
/// lexicographic order.  Returns the number of tuples visited.
u64 enumerate_admissible(u64 n_prime, unsigned max_weight,
                         const std::function<void(const std::vector<u64>&)>& visit);

/// Like enumerate_admissible, but applies only the lossless symmetry
/// normalizations: the two final pattern filters (which deliberately skip
/// tuples certified to lie in the known parametric families) are left out.
/// Consequence: the equivalence-class set of this enumeration's exact
/// survivors matches an unreduced brute-force search exactly, whereas the
/// production enumeration may omit classes that the family filters cover.
u64 enumerate_symmetric(u64 n_prime, unsigned max_weight,
                        const std::function<void(const std::vector<u64>&)>& visit);

/// max_k |sum_i zeta^{k t_i}|^2 over units k of the table modulus (half
/// range; conjugates share the value).  Stops early once the running
/// maximum exceeds bail and returns that maximum.
double float_castle(const std::vector<u64>& tuple,
                    const CertifiedTrigTable& trig,
                    double bail = 1e300);

/// Exact classification verdicts for float survivors.
enum class ExVerdict { kForm1, kForm2, kForm3, kTableOne, kRejectedExact, kNew };

/// One verified float survivor.
struct Survivor {
  unsigned size = 0;            ///< tuple size (number of roots summed)
  std::vector<u64> tuple;
  double float_value = 0;       ///< float castle (<= 5.1 by construction)
  ExVerdict verdict = ExVerdict::kNew;
  size_t table_index = 0;       ///< 1-based index for kTableOne, else 0
  std::vector<Int> hash;        ///< equivalence hash when one was computed
};

/// Verdict display name ("Form2", "TableOne(7)", ...).
std::string verdict_name(const Survivor& s);

/// Exactly classify one tuple (need not be admissible).  table_keys are
/// (minimal level, equivalence hash) pairs of the known exceptional
/// entries, normally table1_keys().  Uses dense arithmetic when n_prime
/// fits the dense level cap and the sparse path (certified enclosures,
/// sparse level reduction, family scans) above it.  exact_threshold is the
/// squared-castle bound survivors must not exceed; keep it non-integral --
/// a sum of roots whose squared castle equals an integral threshold
/// exactly cannot be separated from it by refinement.
Survivor verify_candidate(const std::vector<u64>& tuple, u64 n_prime,
                          const std::vector<std::pair<u64, std::vector<Int>>>&
                              table_keys,
                          const Rat& exact_threshold = Rat(501, 100));

/// A sparse element: exponent -> coefficient terms at the given level.
struct SparseElement {
  u64 level = 1;
  std::vector<std::pair<u64, Int>> terms;
};

/// Equivalence-preserving level reduction of a sparse element: repeatedly
/// strips primes whose removal keeps the element (up to a root-of-unity
/// twist) in the smaller cyclotomic field, mirroring the dense
/// minimal-level algorithm without a dense coefficient vector.  The result
/// level is minimal for the class and is odd or divisible by 4.
SparseElement sparse_reduce_level(const SparseElement& a);

/// Full report of a job run.
struct JobReport {
  ExhaustJob job;
  u64 tuples = 0;            ///< admissible tuples enumerated
  u64 float_survivors = 0;   ///< tuples past the float sieve
  std::vector<Survivor> survivors;  ///< verified, enumeration order
  double seconds = 0;        ///< wall time (not part of the artifact)
};

/// Run a job with the given worker count, sieving at job.float_threshold
/// and verifying against job.exact_threshold.  The report (and its JSONL
/// rendering) is byte-identical for every worker count.
JobReport run_job(const ExhaustJob& job, unsigned workers = 1);

/// One JSONL line per survivor -- {"np": ..., "tuple": [...],
/// "float_castle": ..., "verdict": "...", "hash": [...]} -- plus a
/// trailing summary line with the verdict counts (no timings).
std::string report_jsonl(const JobReport& report);

}  // namespace smallhouse
