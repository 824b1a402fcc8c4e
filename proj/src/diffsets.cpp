#include "smallhouse/diffsets.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smallhouse {

namespace {

// Difference counts of `subset` modulo m, written into `counts` (resized and
// zeroed here).  Counts ordered pairs, so counts[0] = |S|.
void fill_counts(u64 m, const std::vector<u64>& subset,
                 std::vector<unsigned>& counts) {
  counts.assign(m, 0);
  for (u64 a : subset)
    for (u64 b : subset) ++counts[(a + m - b) % m];
}

// Enumerates all X-subsets of {0, ..., limit-1} containing 0 and 1, lex
// ascending, invoking visit(S) until it returns false.  Handles X <= 2 as
// the single degenerate subset.  Returns false iff some visit returned
// false (i.e. the enumeration was aborted).
template <typename Visit>
bool for_each_normalized(u64 limit, unsigned X, Visit visit) {
  std::vector<u64> s;
  if (X == 0) return true;
  if (X == 1) return visit(std::vector<u64>{0});
  if (limit < X) return true;  // no X-subset exists
  s.resize(X);
  s[0] = 0;
  s[1] = 1;
  // Free positions 2..X-1 range over {2, ..., limit-1}.
  for (unsigned i = 2; i < X; ++i) s[i] = i;
  while (true) {
    if (!visit(s)) return false;
    // Advance the combination (positions 2..X-1).
    unsigned i = X;
    while (i > 2) {
      --i;
      if (s[i] < limit - (X - i)) {
        ++s[i];
        for (unsigned j = i + 1; j < X; ++j) s[j] = s[j - 1] + 1;
        break;
      }
      if (i == 2) return true;
    }
    if (X == 2) return true;  // nothing to advance
  }
}

}  // namespace

DifferenceProfile DifferenceProfile::of(u64 modulus, std::vector<u64> subset) {
  if (modulus == 0) throw std::invalid_argument("DifferenceProfile: modulus");
  for (u64& a : subset) a %= modulus;
  std::sort(subset.begin(), subset.end());
  if (std::adjacent_find(subset.begin(), subset.end()) != subset.end())
    throw std::invalid_argument("DifferenceProfile: repeated residue");
  DifferenceProfile out;
  out.modulus = modulus;
  out.subset = std::move(subset);
  fill_counts(modulus, out.subset, out.counts);
  return out;
}

bool has_singleton_difference(u64 p, const std::vector<u64>& subset) {
  std::vector<unsigned> counts;
  fill_counts(p, subset, counts);
  return std::find(counts.begin(), counts.end(), 1u) != counts.end();
}

std::optional<std::pair<u64, u64>> mod_p2_witness_pair(
    u64 p, const std::vector<u64>& subset) {
  const u64 m = p * p;
  std::vector<unsigned> counts;
  fill_counts(m, subset, counts);
  // Scan each nonzero residue class mod p for a value with no occurrences
  // and a value with exactly one.
  for (u64 r = 1; r < p; ++r) {
    u64 empty = m, single = m;
    for (u64 k = r; k < m; k += p) {
      if (counts[k] == 0 && empty == m) empty = k;
      if (counts[k] == 1 && single == m) single = k;
    }
    if (empty != m && single != m) return std::make_pair(empty, single);
  }
  return std::nullopt;
}

bool differences_cover(u64 p, const std::vector<u64>& subset) {
  std::vector<unsigned> counts;
  fill_counts(p, subset, counts);
  for (u64 k = 1; k < p; ++k)
    if (counts[k] == 0) return false;
  return true;
}

bool unique_difference_graph_ok(u64 p, const std::vector<u64>& subset) {
  const unsigned n = static_cast<unsigned>(subset.size());
  std::vector<unsigned> counts;
  fill_counts(p, subset, counts);
  // Adjacency: {i, j} is an edge iff the difference subset[i] - subset[j]
  // occurs exactly once over all ordered pairs.
  std::vector<std::vector<unsigned>> adj(n);
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < i; ++j)
      if (counts[(subset[i] + p - subset[j]) % p] == 1) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
  // BFS two-colouring from vertex 0.
  std::vector<int> color(n, -1);
  std::vector<unsigned> queue{0};
  color[0] = 0;
  bool odd_cycle = false;
  for (size_t head = 0; head < queue.size(); ++head) {
    const unsigned v = queue[head];
    for (unsigned w : adj[v]) {
      if (color[w] == -1) {
        color[w] = 1 - color[v];
        queue.push_back(w);
      } else if (color[w] == color[v]) {
        odd_cycle = true;
      }
    }
  }
  const bool connected = queue.size() == n;
  return connected && odd_cycle;
}

LemmaVerdict singleton_difference_holds(u64 p, unsigned X) {
  LemmaVerdict verdict;
  for_each_normalized(p, X, [&](const std::vector<u64>& s) {
    if (has_singleton_difference(p, s)) return true;
    verdict = {false, s};
    return false;
  });
  return verdict;
}

LemmaVerdict mod_p2_property_holds(u64 p, unsigned X) {
  LemmaVerdict verdict;
  // Residue patterns: X distinct residues mod p containing 0 and 1; every
  // element then ranges over its p lifts modulo p^2 (0 and 1 fixed as the
  // normalisation, their lifts absorbed by translation/dilation).
  for_each_normalized(p, X, [&](const std::vector<u64>& residues) {
    // Odometer over lifts of the non-normalised residues.
    std::vector<u64> lift(X, 0);
    while (true) {
      std::vector<u64> s(X);
      for (unsigned i = 0; i < X; ++i) s[i] = residues[i] + p * lift[i];
      if (!mod_p2_witness_pair(p, s)) {
        std::sort(s.begin(), s.end());
        verdict = {false, s};
        return false;
      }
      unsigned i = X;
      bool advanced = false;
      while (i > 2) {
        --i;
        if (++lift[i] < p) {
          advanced = true;
          break;
        }
        lift[i] = 0;
      }
      if (!advanced) return true;
    }
  });
  return verdict;
}

LemmaVerdict graph_property_holds(u64 p, unsigned X) {
  LemmaVerdict verdict;
  for_each_normalized(p, X, [&](const std::vector<u64>& s) {
    if (!differences_cover(p, s)) return true;  // hypothesis fails: skip
    if (unique_difference_graph_ok(p, s)) return true;
    verdict = {false, s};
    return false;
  });
  return verdict;
}

double hadamard_bound(unsigned X) {
  if (X == 0) throw std::invalid_argument("hadamard_bound: X >= 1");
  return std::pow(6.0, (X - 1) / 2.0);
}

}  // namespace smallhouse
