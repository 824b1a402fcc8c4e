/// @file diffsets.hpp
/// @brief Exhaustive verifiers for three difference-set facts about small
///        subsets of Z/pZ and Z/p^2Z.
///
/// Each verifier enumerates subsets normalised to contain 0 and 1 (any
/// subset with two distinct elements is an affine image of such a subset,
/// and all three predicates are affine-invariant; the per-subset predicates
/// are also exposed unnormalised so the invariance itself can be tested).
/// The counting is plain: fill a difference-count table, then inspect it.

#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "smallhouse/numtheory.hpp"

namespace smallhouse {

/// Difference-count table of a subset S of Z/modulus: counts[k] is the
/// number of ordered pairs (i, j) in S^2 with i - j = k (mod modulus).
struct DifferenceProfile {
  u64 modulus = 1;
  std::vector<u64> subset;       ///< sorted distinct residues
  std::vector<unsigned> counts;  ///< size = modulus

  /// Build the table; residues are reduced, sorted, and must be distinct.
  static DifferenceProfile of(u64 modulus, std::vector<u64> subset);
};

/// Outcome of one exhaustive run; `witness` holds the first counterexample
/// subset found (in enumeration order) when the property fails.
struct LemmaVerdict {
  bool holds = true;
  std::vector<u64> witness;
};

// ---- per-subset predicates (the unnormalised mode) ----------------------

/// Does some k in Z/pZ have exactly one pair (i, j) in S^2 with i - j = k?
bool has_singleton_difference(u64 p, const std::vector<u64>& subset);

/// For S in Z/p^2Z with residues pairwise distinct mod p: a pair (k1, k2)
/// with k1 = k2 != 0 (mod p), no difference equal to k1, and exactly one
/// difference equal to k2 — or nullopt when no such pair exists.
std::optional<std::pair<u64, u64>> mod_p2_witness_pair(
    u64 p, const std::vector<u64>& subset);

/// Hypothesis of the graph fact: every nonzero k occurs as a difference.
bool differences_cover(u64 p, const std::vector<u64>& subset);

/// The unique-difference graph on S (edge when i - j occurs exactly once
/// over S^2): is it connected and not bipartite?
bool unique_difference_graph_ok(u64 p, const std::vector<u64>& subset);

// ---- exhaustive verifiers ------------------------------------------------

/// Every X-subset of Z/pZ has a singleton difference.
LemmaVerdict singleton_difference_holds(u64 p, unsigned X);

/// Every X-subset of Z/p^2Z with pairwise-distinct residues mod p admits a
/// (k1, k2) pair as in mod_p2_witness_pair.
LemmaVerdict mod_p2_property_holds(u64 p, unsigned X);

/// Every X-subset of Z/pZ whose differences cover all nonzero residues has
/// a connected, non-bipartite unique-difference graph.
LemmaVerdict graph_property_holds(u64 p, unsigned X);

/// 6^{(X-1)/2}: primes above this bound satisfy the singleton property for
/// free (Hadamard bound on the relation matrix), so enumeration is only
/// needed up to it.
double hadamard_bound(unsigned X);

}  // namespace smallhouse
