/// @file tables.hpp
/// @brief Embedded reference tables and their verification.
///
/// The library ships four fixture tables (embedded at build time from
/// data/tables.json) plus two small auxiliary lists:
///
///  * table1 — the exceptional elements: squared castle <= 5, height > 2,
///    not in any Cassels family; each row states the exact symbolic castle,
///    the exact height, the minimal level, and a sparse representative.
///  * table2 — weight-minimal witnesses: for each weight n a representative
///    of minimal Cassels height among weight-n elements.
///  * table3 — cyclotomic points matched to classical minimal-house
///    algebraic integers, identified by their equivalence-hash polynomial.
///  * table4 — splitting data for the fixed-house searches: how the
///    relevant prime decomposes at each level and the exponent box the
///    search has to cover.
///  * residue_orders — multiplicative orders used to short-circuit those
///    searches.
///  * presets — the named exhaustive-search jobs.
///
/// Every verify_* function recomputes the claimed invariants from scratch
/// with the exact machinery of the library and reports one line per check.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "smallhouse/measures.hpp"

namespace smallhouse {

/// Symbolic squared-castle target: cos2(m) = 1 + 4cos^2(pi/m),
/// fourcos2(m) = 4cos^2(pi/m), surd(d) = (5 + sqrt(d))/2.
struct CastleSpec {
  std::string kind;
  u64 param = 0;
};

/// Exact totally real element equal to the named castle value.  cos2 and
/// fourcos2 are 3 (resp. 2) + zeta_m + zeta_m^{-1}; surd(d) is built from
/// the quadratic Gauss sum for d in {13, 21}.
CyclotomicInt castle_target(const CastleSpec& spec);

/// One exceptional element: not in any Cassels family, squared castle <= 5.
struct ExceptionalEntry {
  CastleSpec castle;  ///< exact squared castle, symbolically
  Rat height;         ///< exact Cassels height
  u64 level = 0;      ///< minimal level (the stored element realizes it)
  CyclotomicInt element;
};

/// One weight-minimal witness: a weight-n element of minimal height.
struct WeightBoundEntry {
  unsigned n = 0;
  Rat height;
  CyclotomicInt element;
};

/// One minimal-house matching row: the element's equivalence-hash
/// polynomial must equal expected_hash; partner names the classical
/// algebraic integer with the same minimal polynomial.
struct MatchingEntry {
  CyclotomicInt element;
  std::string expected_hash;
  std::string partner;
};

/// One splitting fixture row: at the given level, the stated prime has
/// t_size conjugate-split prime pairs, and the exponent search box for
/// multiplicity m is [lo, hi] per pair.
struct SplitFixtureRow {
  int c = 0;  ///< squared-castle bound of the search this row belongs to
  u64 prime = 0;
  u64 level = 0;
  std::string alpha;  ///< display string of the fixed-house witnesses
  unsigned multiplicity = 0;
  bool self_conjugate = false;
  u64 t_size = 0;
  long lo = 0;  ///< box bounds, meaningful when t_size > 0
  long hi = 0;
};

/// One multiplicative-order cell: order of p modulo the prime power q.
struct ResidueOrderCell {
  u64 p = 0;
  u64 q = 0;
  u64 order = 0;
};

/// One named exhaustive-search job.
struct ExhaustPreset {
  std::string name;
  u64 level = 0;
  unsigned weight = 0;
  bool extended = false;  ///< excluded from the default preset run
};

struct Tables {
  std::vector<ExceptionalEntry> table1;
  std::vector<WeightBoundEntry> table2;
  std::vector<MatchingEntry> table3;
  std::vector<SplitFixtureRow> table4;
  std::vector<ResidueOrderCell> residue_orders;
  std::vector<ExhaustPreset> presets;
};

/// Parse fixture tables from JSON text, validating structural invariants
/// (term exponents below the level, height denominators dividing
/// phi(level), stored representation level equal to the stated level).
/// Throws std::runtime_error naming the offending row on bad data.
Tables parse_tables(const std::string& json_text);

/// The tables embedded at build time, parsed and validated once.
const Tables& tables();

/// One verification check: named, pass/fail, human-readable detail.
struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// A bundle of checks with a title.
struct VerifyReport {
  std::string title;
  std::vector<CheckLine> lines;
  int passed() const;
  int failed() const;
  bool all_pass() const { return failed() == 0; }
};

/// Table 1: for every exceptional entry, recompute the height, the minimal
/// level, the exact castle comparison against the symbolic target, and the
/// family test (which must reject); finally check that all equivalence
/// hashes are pairwise distinct.
VerifyReport verify_table1();

/// Table 2: exact heights for every witness; for weights n <= 4, certify
/// exhaustively that the weight is exactly n (no lighter representation).
VerifyReport verify_table2();

/// Table 3: the equivalence-hash polynomial of every row equals the stated
/// minimal polynomial of its classical partner.
VerifyReport verify_table3();

/// Table 4 and the residue-order cells: recompute every splitting profile,
/// split-pair count, search box and multiplicative order.
VerifyReport verify_splitting_fixture();

/// The three Cassels families: for every parameter n <= bound, the
/// closed-form minimal level and height reported by family_values must
/// match direct computation on the family element itself.
VerifyReport verify_family_levels(u64 bound = 200);

/// (minimal level, equivalence hash) of every exceptional entry, for
/// survivor classification in the exhaustive search.  Computed once.
const std::vector<std::pair<u64, std::vector<Int>>>& table1_keys();

/// Render a report as text (one line per check, PASS/FAIL prefix, summary
/// last) or as a JSON object.
std::string render_text(const VerifyReport& report);
std::string render_json(const VerifyReport& report);

}  // namespace smallhouse
