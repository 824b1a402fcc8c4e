/// @file exhaust.cpp
/// @brief Certified exhaustive search over short sums of roots of unity.
///
/// Compiled with -ffp-contract=off: the float sieve must produce identical
/// doubles on every worker and every run, so fused multiply-adds are
/// disabled for this translation unit.

#include "smallhouse/exhaust.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "smallhouse/enclosure.hpp"
#include "smallhouse/tables.hpp"

namespace smallhouse {
namespace {

constexpr double kFloatThreshold = 5.1;

const Rat& exact_threshold() {
  static const Rat q(501, 100);
  return q;
}

/// 1e-14 as an exact rational: the certified bound on every trig entry.
const Rat& trig_tolerance() {
  static const Rat t(Int(1), Int("100000000000000"));
  return t;
}

// ---------------------------------------------------------------------------
// Enumeration: canonical tuples and pruning rules.
//
// A sum of n' roots zeta_np^{j_1..j_n'} is considered up to multiplication
// by a root of unity (shifting all exponents), Galois maps (multiplying all
// exponents by a unit) and conjugation (negating all exponents).  The
// canonical form fixes j_1 = 0 and applies a Galois map sending an exponent
// of minimal gcd with np to that gcd d = j_2 (a proper divisor of np); the
// remaining exponents are sorted ascending and satisfy gcd(j_i, np) >= d
// (gcd(0, np) = np, so repeated zeros pass).  The all-zero tuple (a rational
// integer) has no nonzero exponent and is enumerated separately.
//
// Pruning rules, each discarding only tuples whose sum is equivalent to a
// lower-weight sum, to another enumerated tuple, or to a known family
// member:
//  (5) conjugation tie-break: np - j_{n'} > j_3 - d;
//  (6) no pair differing by a nonzero multiple of np/2 (the pair cancels)
//      or np/3 (the pair collapses to one root);
//  (7) no three entries with both successive differences nonzero multiples
//      of np/5 (when 5 | np);
//  (8) no four entries chained by three nonzero multiples of np/7
//      (when 7 | np);
//  (9) size 3: no permutation with k1 + k2 = 2 k3 + np/2 (mod np) -- such
//      sums are members of family (2);
// (10) size 4, 5 | np: no splitting into pairs whose differences d1, d2 are
//      both multiples of np/5 with d1 + d2 and d1 - d2 nonzero mod np.

struct SearchCtx {
  u64 np = 0;
  u64 half = 0;     ///< np/2 (np is always even)
  u64 third = 0;    ///< np/3 when 3 | np, else 0
  u64 fifth = 0;    ///< np/5 when 5 | np, else 0
  u64 seventh = 0;  ///< np/7 when 7 | np, else 0

  explicit SearchCtx(u64 np_) : np(np_), half(np_ / 2) {
    if (np % 3 == 0) third = np / 3;
    if (np % 5 == 0) fifth = np / 5;
    if (np % 7 == 0) seventh = np / 7;
  }

  static u64 gap(u64 a, u64 b) { return a > b ? a - b : b - a; }
  bool collapse_pair(u64 a, u64 b) const {
    const u64 d = gap(a, b);
    if (d == 0) return false;
    if (d % half == 0) return true;
    return third != 0 && d % third == 0;
  }
  bool step5(u64 a, u64 b) const {
    const u64 d = gap(a, b);
    return d != 0 && d % fifth == 0;
  }
  bool step7(u64 a, u64 b) const {
    const u64 d = gap(a, b);
    return d != 0 && d % seventh == 0;
  }

  /// Rule (9), complete tuples of size 3 only.
  bool family2_pattern(const std::vector<u64>& t) const {
    for (int z = 0; z < 3; ++z) {
      const u64 a = t[(z + 1) % 3], b = t[(z + 2) % 3];
      if ((a + b + 3 * np - 2 * t[z] - half) % np == 0) return true;
    }
    return false;
  }

  /// Rule (10), complete tuples of size 4 with 5 | np only.
  bool golden_pattern(const std::vector<u64>& t) const {
    static constexpr int kSplit[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
    for (const auto& s : kSplit) {
      const u64 r1 = (t[s[1]] + np - t[s[0]]) % np;
      const u64 r2 = (t[s[3]] + np - t[s[2]]) % np;
      if (r1 % fifth != 0 || r2 % fifth != 0) continue;
      if ((r1 + r2) % np != 0 && (r1 + np - r2) % np != 0) return true;
    }
    return false;
  }
};

/// Incremental DFS state: the tuple so far plus, per entry, whether it ends
/// a nonzero np/5 step (chains5), or starts/extends nonzero np/7 chains.
struct TupleBuilder {
  const SearchCtx& ctx;
  std::vector<u64> t;
  std::vector<char> end5;    ///< entry ends a nonzero np/5 step
  std::vector<char> end7a;   ///< entry ends one nonzero np/7 step
  std::vector<char> end7b;   ///< entry ends a chain of two np/7 steps

  explicit TupleBuilder(const SearchCtx& c) : ctx(c) {}

  /// Check rules (6)-(8) for appending v; push and return true on success.
  bool push(u64 v) {
    char e5 = 0, e7a = 0, e7b = 0;
    for (size_t i = 0; i < t.size(); ++i) {
      if (ctx.collapse_pair(t[i], v)) return false;
      if (ctx.fifth && ctx.step5(t[i], v)) {
        if (end5[i]) return false;  // rule (7)
        e5 = 1;
      }
      if (ctx.seventh && ctx.step7(t[i], v)) {
        if (end7b[i]) return false;  // rule (8)
        if (end7a[i]) e7b = 1;
        e7a = 1;
      }
    }
    t.push_back(v);
    end5.push_back(e5);
    end7a.push_back(e7a);
    end7b.push_back(e7b);
    return true;
  }
  void pop() {
    t.pop_back();
    end5.pop_back();
    end7a.pop_back();
    end7b.pop_back();
  }
};

/// Shards partition the enumeration; concatenating them in list order
/// reproduces the global (size, tuple) lexicographic order.
struct Shard {
  enum Kind { kSingleton, kZeros, kPair, kSection };
  unsigned size = 0;
  Kind kind = kSingleton;
  u64 d = 0;
  u64 j3 = 0;
};

std::vector<u64> proper_divisors(u64 np) {
  std::vector<u64> ds = divisors(np);
  ds.pop_back();  // drop np itself
  return ds;
}

/// Values v in [0, np) with gcd(v, np) >= d, ascending.  gcd_np[v] is the
/// precomputed gcd table (shared across shards).
std::vector<u64> pool_for(const std::vector<u64>& gcd_np, u64 d) {
  std::vector<u64> pool;
  for (u64 v = 0; v < gcd_np.size(); ++v)
    if (gcd_np[v] >= d) pool.push_back(v);
  return pool;
}

std::vector<u64> gcd_table(u64 np) {
  std::vector<u64> g(np);
  for (u64 v = 0; v < np; ++v) g[v] = std::gcd(v, np);
  return g;
}

std::vector<Shard> make_shards(u64 np, unsigned max_weight,
                               const std::vector<u64>& gcd_np) {
  const SearchCtx ctx(np);
  const std::vector<u64> ds = proper_divisors(np);
  std::vector<Shard> shards;
  for (unsigned size = 1; size <= max_weight; ++size) {
    if (size == 1) {
      shards.push_back({1, Shard::kSingleton, 0, 0});
      continue;
    }
    shards.push_back({size, Shard::kZeros, 0, 0});
    for (u64 d : ds) {
      if (ctx.collapse_pair(0, d)) continue;  // rule (6) kills the whole d
      if (size == 2) {
        shards.push_back({2, Shard::kPair, d, 0});
        continue;
      }
      for (u64 j3 = 0; 2 * j3 < np + d; ++j3)
        if (gcd_np[j3] >= d) shards.push_back({size, Shard::kSection, d, j3});
    }
  }
  return shards;
}

/// Emit every admissible tuple of one shard, lexicographically.  The pool
/// must be pool_for(gcd, shard.d) for section shards.  When family_prunes
/// is false, the two known-family pattern filters are not applied, so the
/// enumeration is reduced by the lossless symmetry normalizations only.
template <typename Visit>
void expand_shard(const SearchCtx& ctx, const Shard& sh,
                  const std::vector<u64>& pool, const Visit& visit,
                  bool family_prunes = true) {
  switch (sh.kind) {
    case Shard::kSingleton:
      visit(std::vector<u64>{0});
      return;
    case Shard::kZeros:
      visit(std::vector<u64>(sh.size, 0));
      return;
    case Shard::kPair: {
      // rule (6) already checked at shard creation
      visit(std::vector<u64>{0, sh.d});
      return;
    }
    case Shard::kSection:
      break;
  }
  TupleBuilder b(ctx);
  b.push(0);
  if (!b.push(sh.d)) return;
  if (!b.push(sh.j3)) return;
  // rule (5): every further value is >= j3 and the largest must satisfy
  // np - j_last > j3 - d, i.e. j_last <= np + d - j3 - 1.
  const u64 limit = ctx.np + sh.d - sh.j3 - 1;

  const std::function<void()> dfs = [&]() {
    if (b.t.size() == sh.size) {
      if (family_prunes) {
        if (sh.size == 3 && ctx.family2_pattern(b.t)) return;  // rule (9)
        if (sh.size == 4 && ctx.fifth && ctx.golden_pattern(b.t))
          return;  // rule (10)
      }
      visit(b.t);
      return;
    }
    const u64 lo = b.t.back();
    for (auto it = std::lower_bound(pool.begin(), pool.end(), lo);
         it != pool.end() && *it <= limit; ++it) {
      if (b.push(*it)) {
        dfs();
        b.pop();
      }
    }
  };
  dfs();
}

std::vector<u64> half_units(u64 np) {
  std::vector<u64> ks;
  for (u64 k = 1; 2 * k <= np; ++k)
    if (std::gcd(k, np) == 1) ks.push_back(k);
  if (ks.empty()) ks.push_back(1 % (np == 0 ? 1 : np));
  return ks;
}

double kernel(const u64* t, size_t n, const CertifiedTrigTable& trig,
              const std::vector<u64>& units, double bail) {
  const u64 np = trig.modulus();
  double best = 0.0;
  for (u64 k : units) {
    double c = 0.0, s = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const u64 j = (k * t[i]) % np;
      c += trig.cos_at(j);
      s += trig.sin_at(j);
    }
    const double v = c * c + s * s;
    if (v > best) {
      best = v;
      if (best > bail) return best;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Sparse arithmetic at levels above the dense cap.

using SMap = std::map<u64, Int>;

SMap smap_normalize(const std::vector<std::pair<u64, Int>>& terms, u64 level) {
  SMap m;
  for (const auto& [e, c] : terms) {
    if (c == 0) continue;
    Int& slot = m[e % level];
    slot += c;
    if (slot == 0) m.erase(e % level);
  }
  return m;
}

SparseTerms smap_terms(const SMap& m) {
  SparseTerms out;
  out.reserve(m.size());
  for (const auto& [e, c] : m) out.emplace_back(e, c);
  return out;
}

SMap s_conj(const SMap& a, u64 level) {
  SMap out;
  for (const auto& [e, c] : a) out[(level - e) % level] = c;
  return out;
}

SMap s_mult(const SMap& a, const SMap& b, u64 level) {
  SMap out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      const u64 e = (ea + eb) % level;
      Int& slot = out[e];
      slot += ca * cb;
    }
  for (auto it = out.begin(); it != out.end();)
    it = (it->second == 0) ? out.erase(it) : std::next(it);
  return out;
}

SMap s_galois(const SMap& a, u64 u, u64 level) {
  SMap out;
  for (const auto& [e, c] : a) {
    Int& slot = out[(e * u) % level];
    slot += c;  // exponent map is injective for units, but stay safe
  }
  return out;
}

/// Tr(zeta_level^e) = mu(level/g) * phi(level) / phi(level/g), g = gcd.
Int trace_root(u64 e, u64 level, u64 phi_level) {
  const u64 g = std::gcd(e % level, level);
  const u64 f = level / g;
  return Int(mobius(f)) * Int(phi_level / euler_phi(f));
}

Int s_trace(const SMap& a, u64 level, u64 phi_level) {
  Int t = 0;
  for (const auto& [e, c] : a) t += c * trace_root(e, level, phi_level);
  return t;
}

Rat s_height(const SMap& a, u64 level) {
  return sparse_cassels_height(smap_terms(a), level);
}

// --- sparse level reduction ------------------------------------------------

/// Does alpha (at level L, p^v || L) lie in Q(zeta_{L/p}) after multiplying
/// by zeta_{p^v}^{-i0}?  Exact test through the Cassels height of the
/// relative-trace defect, which is representation independent.
bool sparse_member_after_twist(const SMap& a, u64 level, u64 p, unsigned v,
                               u64 i0, SMap* twisted_out) {
  u64 pv = 1;
  for (unsigned i = 0; i < v; ++i) pv *= p;
  const u64 shift = (i0 % pv) * (level / pv);  // exponent of zeta_{p^v}^{i0}
  SMap tw;
  for (const auto& [e, c] : a) tw[(e + level - shift) % level] = c;
  if (v >= 2) {
    // member iff the residue sum_{p !| e} c zeta^e vanishes
    SMap tail;
    for (const auto& [e, c] : tw)
      if (e % p != 0) tail[e] = c;
    if (!tail.empty() && s_height(tail, level) != 0) return false;
  } else {
    // v = 1, p odd: member iff (p-1) alpha equals its relative trace.
    // Writing e via CRT as (a(e), b(e)) over (p, m), m = L/p:
    // Tr_rel(zeta^e) = (p-1) zeta_m^{b(e)} if a(e) = 0, else -zeta_m^{b(e)}.
    // The defect (p-1) alpha - Tr_rel(alpha) is tested for height zero.
    const u64 m = level / p;
    const u64 minv = mod_inv(m % p, p);
    const u64 pinv = m == 1 ? 0 : mod_inv(p % m, m);
    SMap def;
    for (const auto& [e, c] : tw) {
      Int& s1 = def[e];
      s1 += c * Int(static_cast<long>(p - 1));
      const u64 comp_a = (e % p) * minv % p;
      const u64 comp_b = m == 1 ? 0 : (e % m) * pinv % m;
      // zeta_m^{comp_b} has exponent comp_b * p at level L
      const u64 eb = comp_b * p % level;
      Int& s2 = def[eb];
      s2 -= c * ((comp_a == 0) ? Int(static_cast<long>(p - 1)) : Int(-1));
    }
    for (auto it = def.begin(); it != def.end();)
      it = (it->second == 0) ? def.erase(it) : std::next(it);
    if (!def.empty() && s_height(def, level) != 0) return false;
  }
  if (twisted_out) *twisted_out = std::move(tw);
  return true;
}

/// Rewrite a twisted member at level L as an element at level L/p.
SMap sparse_descend(const SMap& tw, u64 level, u64 p, unsigned v) {
  SMap out;
  const u64 m = level / p;
  if (v >= 2) {
    // the p !| e terms sum to zero; the rest are zeta_{L/p}^{e/p}
    for (const auto& [e, c] : tw) {
      if (e % p != 0) continue;
      Int& slot = out[e / p];
      slot += c;
      if (slot == 0) out.erase(e / p);
    }
    return out;
  }
  // v = 1: alpha = S_0 - S_{p-1} over the basis {zeta_p^a, a < p-1} of
  // Q(zeta_L) / Q(zeta_m), where S_a collects terms with zeta_p-component a.
  const u64 minv = mod_inv(m % p, p);
  const u64 pinv = m == 1 ? 0 : mod_inv(p % m, m);
  for (const auto& [e, c] : tw) {
    const u64 comp_a = (e % p) * minv % p;
    const u64 comp_b = (e % m) * pinv % m;
    if (comp_a == 0) {
      Int& slot = out[comp_b];
      slot += c;
      if (slot == 0) out.erase(comp_b);
    } else if (comp_a == p - 1) {
      Int& slot = out[comp_b];
      slot -= c;
      if (slot == 0) out.erase(comp_b);
    }
  }
  return out;
}

SMap sparse_reduce_impl(SMap terms, u64& level) {
  if (terms.empty()) {
    level = 1;
    return terms;
  }
  bool changed = true;
  while (changed && level > 1) {
    changed = false;
    for (const auto& [p, v] : factorize(level)) {
      if (p == 2 && v == 1) {
        // level = 2 mod 4: zeta_L^e = (-1)^e zeta_{L/2}^{e'} with
        // e' = e/2 for even e and (e + L/2)/2 shifted by the sign.
        const u64 m = level / 2;
        SMap out;
        for (const auto& [e, c] : terms) {
          if (e % 2 == 0) {
            Int& slot = out[e / 2];
            slot += c;
            if (slot == 0) out.erase(e / 2);
          } else {
            // zeta_L^e = -zeta_L^{e + L/2} and e + L/2 is even (L/2 odd)
            const u64 e2 = ((e + m) % level) / 2;
            Int& slot = out[e2];
            slot -= c;
            if (slot == 0) out.erase(e2);
          }
        }
        terms = std::move(out);
        level = m;
        changed = true;
        break;
      }
      if (terms.empty()) break;
      bool stripped = false;
      for (u64 i0 = 0; i0 < p && !stripped; ++i0) {
        SMap tw;
        if (!sparse_member_after_twist(terms, level, p, v, i0, &tw)) continue;
        terms = sparse_descend(tw, level, p, v);
        level /= p;
        stripped = true;
      }
      if (stripped) {
        changed = true;
        break;
      }
    }
    if (terms.empty()) {
      level = 1;
      break;
    }
  }
  return terms;
}

// --- sparse family classification -------------------------------------------

/// Trace of w * zeta^j for every j: A[j] = sum_e c_e Tr(zeta^{e+j}).
std::vector<Int> trace_profile(const SMap& w, u64 level, u64 phi_level) {
  // Tr(zeta^x) depends only on gcd(x, level): tabulate by exponent once.
  std::vector<Int> tr(level);
  for (u64 x = 0; x < level; ++x) tr[x] = trace_root(x, level, phi_level);
  std::vector<Int> a(level);
  for (const auto& [e, c] : w)
    for (u64 j = 0; j < level; ++j) a[j] += c * tr[(e + j) % level];
  return a;
}

/// Classify a reduced sparse element beta whose level exceeds the dense cap
/// and whose squared castle is certified <= 501/100.  Known exceptional
/// entries all have minimal level below the dense cap, so only family
/// membership or New are possible here.
ExVerdict classify_sparse(const SMap& beta0, u64 level0) {
  const u64 level = std::lcm<u64>(2, level0);
  SMap beta;
  const u64 stretch = level / level0;
  for (const auto& [e, c] : beta0) beta[e * stretch] = c;

  const u64 phi_level = euler_phi(level);
  const SMap w = s_mult(beta, s_conj(beta, level), level);
  if (w.empty()) throw std::logic_error("exhaust: zero element in classifier");

  const Int tr_w = s_trace(w, level, phi_level);
  const SMap w2 = s_mult(w, w, level);
  const Int tr_w2 = s_trace(w2, level, phi_level);
  const std::vector<Int> prof = trace_profile(w, level, phi_level);
  const auto tr_root_at = [&](u64 e) { return trace_root(e, level, phi_level); };

  // ---- weight <= 2 (family 1). w == (1+zeta^t)(1+zeta^-t) = 2 + zeta^t +
  // zeta^-t for some t (t = L/2 would give 0, excluded since w != 0), or
  // w == 1 for a bare root of unity.
  for (u64 t = 0; 2 * t <= level; ++t) {
    // numerator of phi * M(w - tau), tau = 2 + zeta^t + zeta^-t
    const Int tr_wtau =
        2 * tr_w + prof[t] + prof[(level - t) % level];
    const Int tr_tau2 =
        6 * Int(static_cast<long>(phi_level)) + 8 * tr_root_at(t) +
        2 * tr_root_at(2 * t % level);
    if (tr_w2 - 2 * tr_wtau + tr_tau2 != 0) continue;
    // confirm beta = zeta^r (1 + zeta^t) for some r (existence via traces)
    SMap tau;  // 1 + zeta^t (t = 0 folds both terms into the constant)
    tau[0] += 1;
    tau[t % level] += 1;
    const SMap gamma = s_mult(beta, s_conj(tau, level), level);
    const Int tr_tautau =
        s_trace(s_mult(tau, s_conj(tau, level), level), level, phi_level);
    for (u64 j = 0; j < level; ++j) {
      Int g = 0;
      for (const auto& [e, c] : gamma) g += c * tr_root_at((e + j) % level);
      if (2 * g == tr_w + tr_tautau) return ExVerdict::kForm1;
    }
  }
  {  // bare root: w == 1
    if (w.size() == 1 && w.count(0) && w.at(0) == 1) return ExVerdict::kForm1;
  }

  // ---- families 2 and 3. w == 3 + zeta^{j0} + zeta^{-j0} for some j0.
  for (u64 j0 = 0; 2 * j0 <= level; ++j0) {
    const Int tr_wtau =
        3 * tr_w + prof[j0] + prof[(level - j0) % level];
    const Int tr_tau2 =
        11 * Int(static_cast<long>(phi_level)) + 12 * tr_root_at(j0) +
        2 * tr_root_at(2 * j0 % level);
    if (tr_w2 - 2 * tr_wtau + tr_tau2 != 0) continue;

    // stabiliser of w: u = +-1 mod level/gcd(level, j0)
    const u64 ord0 = level / std::gcd(level, j0);
    std::vector<u64> stab;
    for (u64 u = 1; u < level; ++u) {
      if (std::gcd(u, level) != 1) continue;
      const u64 r = u % ord0;
      if (r == 1 % ord0 || r == (ord0 - 1) % ord0) stab.push_back(u);
    }

    const auto strip_zeros = [](SMap& m) {
      for (auto it = m.begin(); it != m.end();)
        it = (it->second == 0) ? m.erase(it) : std::next(it);
    };
    std::vector<std::pair<SMap, ExVerdict>> cands;
    const u64 neg = (j0 + level / 2) % level;
    if ((j0 + level / 2) % 2 == 0) {
      // family 2 shape: 1 + zeta^h - zeta^-h with 2h = j0 + L/2 (mod L)
      const u64 h = ((j0 + level / 2) / 2) % level;
      SMap cand;
      cand[0] += 1;
      cand[h] += 1;
      cand[(level - h) % level] -= 1;
      strip_zeros(cand);
      if (!cand.empty()) cands.emplace_back(std::move(cand), ExVerdict::kForm2);
    }
    if (level % 5 == 0) {
      // family 3 shape: zeta_5 + zeta_5^4 + (zeta_5^2 + zeta_5^3) zeta^{neg}
      const u64 f = level / 5;
      SMap cand;
      cand[f] += 1;
      cand[4 * f % level] += 1;
      cand[(2 * f + neg) % level] += 1;
      cand[(3 * f + neg) % level] += 1;
      strip_zeros(cand);
      if (!cand.empty()) cands.emplace_back(std::move(cand), ExVerdict::kForm3);
    }

    for (const auto& [cand, cand_verdict] : cands) {
      const Int tr_cc =
          s_trace(s_mult(cand, s_conj(cand, level), level), level, phi_level);
      for (u64 u : stab) {
        const SMap cand_u = s_galois(cand, u, level);
        const SMap gamma = s_mult(beta, s_conj(cand_u, level), level);
        for (u64 j = 0; j < level; ++j) {
          Int g = 0;
          for (const auto& [e, c] : gamma) g += c * tr_root_at((e + j) % level);
          if (2 * g == tr_w + tr_cc) return cand_verdict;
        }
      }
    }
  }
  return ExVerdict::kNew;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<long, Int>> tuple_terms(const std::vector<u64>& tuple) {
  std::map<u64, long> acc;
  for (u64 e : tuple) ++acc[e];
  std::vector<std::pair<long, Int>> terms;
  terms.reserve(acc.size());
  for (const auto& [e, k] : acc)
    terms.emplace_back(static_cast<long>(e), Int(k));
  return terms;
}

Survivor classify_dense(const CyclotomicInt& alpha,
                        const std::vector<std::pair<u64, std::vector<Int>>>&
                            table_keys,
                        const Rat& threshold) {
  Survivor s;
  if (castle_compare(alpha, threshold) == Cmp::kGreater) {
    s.verdict = ExVerdict::kRejectedExact;
    return s;
  }
  const CasselsTestResult ft = cassels_form_test(alpha);
  if (ft.form != CasselsForm::kNone) {
    s.verdict = ft.form == CasselsForm::kForm1   ? ExVerdict::kForm1
                : ft.form == CasselsForm::kForm2 ? ExVerdict::kForm2
                                                 : ExVerdict::kForm3;
    s.hash = equivalence_hash(alpha);
    return s;
  }
  const MinimalLevelResult ml = minimal_level(alpha);
  s.hash = equivalence_hash(alpha);
  const u64 lvl = ml.element.level();
  for (size_t i = 0; i < table_keys.size(); ++i) {
    if (table_keys[i].first == lvl && table_keys[i].second == s.hash) {
      s.verdict = ExVerdict::kTableOne;
      s.table_index = i + 1;
      return s;
    }
  }
  s.verdict = ExVerdict::kNew;
  return s;
}

Survivor classify_sparse_candidate(
    const std::vector<u64>& tuple, u64 np,
    const std::vector<std::pair<u64, std::vector<Int>>>& table_keys,
    const Rat& threshold) {
  Survivor s;
  // w = alpha * conj(alpha) built from exponent differences.
  SMap w;
  for (u64 a : tuple)
    for (u64 b : tuple) {
      const u64 e = (a + np - b) % np;
      Int& slot = w[e];
      slot += 1;
    }
  // certified exact castle test: every embedding of w against 501/100
  const SparseTerms wt = smap_terms(w);
  for (u64 k : half_units(np)) {
    unsigned prec = 96;
    for (;;) {
      const RealEnclosure enc = cos_sum_enclosure(wt, np, k, prec);
      const int c = enc.compare(threshold);
      if (c > 0) {
        s.verdict = ExVerdict::kRejectedExact;
        return s;
      }
      if (c < 0) break;
      prec *= 2;
      if (prec > 1u << 16)
        throw std::logic_error("exhaust: castle refinement stalled");
    }
  }
  // survivor: reduce the level, then classify
  SMap terms;
  for (u64 e : tuple) {
    Int& slot = terms[e % np];
    slot += 1;
  }
  u64 level = np;
  SMap reduced = sparse_reduce_impl(std::move(terms), level);
  if (reduced.empty())
    throw std::logic_error("exhaust: zero element survived the sieve");
  if (level <= kMaxDenseLevel) {
    std::vector<std::pair<long, Int>> dense_terms;
    for (const auto& [e, c] : reduced)
      dense_terms.emplace_back(static_cast<long>(e), c);
    const CyclotomicInt alpha =
        CyclotomicInt::from_sparse(static_cast<unsigned>(level), dense_terms);
    Survivor ds = classify_dense(alpha, table_keys, threshold);
    // the castle was already certified <= threshold; keep that verdict
    if (ds.verdict == ExVerdict::kRejectedExact)
      throw std::logic_error("exhaust: sparse/dense castle disagreement");
    return ds;
  }
  s.verdict = classify_sparse(reduced, level);
  return s;
}

std::string double_repr(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string survivor_json(const Survivor& s, u64 np) {
  std::ostringstream os;
  os << "{\"np\":" << np << ",\"tuple\":[";
  for (size_t i = 0; i < s.tuple.size(); ++i)
    os << (i ? "," : "") << s.tuple[i];
  os << "],\"float_castle\":" << double_repr(s.float_value) << ",\"verdict\":\""
     << verdict_name(s) << "\",\"hash\":";
  if (s.hash.empty()) {
    os << "null";
  } else {
    os << "[";
    for (size_t i = 0; i < s.hash.size(); ++i)
      os << (i ? "," : "") << "\"" << s.hash[i].get_str() << "\"";
    os << "]";
  }
  os << "}";
  return os.str();
}

}  // namespace

ExhaustJob make_job(u64 level, unsigned weight) {
  if (level == 0) throw std::invalid_argument("make_job: level must be positive");
  if (weight == 0 || weight > 8)
    throw std::invalid_argument(
        "make_job: weight must be in [1, 8] (the pruning rules and the float "
        "error budget are established for these sizes)");
  ExhaustJob job;
  job.level = level;
  job.weight = weight;
  job.n_prime = level % 2 ? 2 * level : level;
  job.float_threshold = kFloatThreshold;
  job.exact_threshold = exact_threshold();
  return job;
}

CertifiedTrigTable::CertifiedTrigTable(u64 modulus) : modulus_(modulus) {
  if (modulus == 0)
    throw std::invalid_argument("CertifiedTrigTable: zero modulus");
  cos_.resize(modulus);
  sin_.resize(modulus);
  const double tau = 2.0 * 3.14159265358979323846;
  Rat worst(0);
  const Rat& tol = trig_tolerance();
  for (u64 j = 0; j < modulus; ++j) {
    const double arg =
        tau * (static_cast<double>(j) / static_cast<double>(modulus));
    cos_[j] = std::cos(arg);
    sin_[j] = std::sin(arg);
    const SparseTerms one{{j, Int(1)}};
    const RealEnclosure ec = cos_sum_enclosure(one, modulus, 1, 128);
    const RealEnclosure es = sin_sum_enclosure(one, modulus, 1, 128);
    const Rat tc(cos_[j]), ts(sin_[j]);  // binary64 -> exact rational
    // require [lo, hi] inside [table - tol, table + tol]
    const Rat dc = std::max(abs(tc - ec.lo), abs(tc - ec.hi));
    const Rat ds = std::max(abs(ts - es.lo), abs(ts - es.hi));
    if (dc > tol || ds > tol)
      throw std::logic_error(
          "CertifiedTrigTable: entry " + std::to_string(j) + " of modulus " +
          std::to_string(modulus) + " is not within 1e-14 of the true value");
    worst = std::max(worst, std::max(dc, ds));
  }
  max_slack_ = worst.get_d();
}

bool admissible_tuple(const std::vector<u64>& tuple, u64 np) {
  if (np == 0 || np % 2 != 0 || tuple.empty() || tuple.size() > 8) return false;
  for (u64 v : tuple)
    if (v >= np) return false;
  if (tuple[0] != 0) return false;
  const SearchCtx ctx(np);
  const bool all_zero =
      std::all_of(tuple.begin(), tuple.end(), [](u64 v) { return v == 0; });
  if (tuple.size() == 1) return all_zero;
  if (all_zero) return true;
  const u64 d = tuple[1];
  if (d == 0 || np % d != 0 || d == np) return false;
  for (size_t i = 2; i < tuple.size(); ++i) {
    if (std::gcd(tuple[i], np) < d) return false;
    if (i > 2 && tuple[i] < tuple[i - 1]) return false;
  }
  // rule (5): j_last + j_3 < np + d (conjugation tie-break)
  if (tuple.size() >= 3 && tuple.back() + tuple[2] >= np + d) return false;
  TupleBuilder b(ctx);
  for (u64 v : tuple)
    if (!b.push(v)) return false;
  if (tuple.size() == 3 && ctx.family2_pattern(tuple)) return false;
  if (tuple.size() == 4 && ctx.fifth && ctx.golden_pattern(tuple)) return false;
  return true;
}

namespace {

u64 enumerate_impl(u64 np, unsigned max_weight,
                   const std::function<void(const std::vector<u64>&)>& visit,
                   bool family_prunes) {
  if (np == 0 || np % 2 != 0)
    throw std::invalid_argument("enumerate_admissible: modulus must be even");
  if (max_weight == 0 || max_weight > 8)
    throw std::invalid_argument("enumerate_admissible: weight must be in [1, 8]");
  const std::vector<u64> g = gcd_table(np);
  const std::vector<Shard> shards = make_shards(np, max_weight, g);
  const SearchCtx ctx(np);
  u64 count = 0;
  u64 pool_d = 0;
  std::vector<u64> pool;
  for (const Shard& sh : shards) {
    if (sh.kind == Shard::kSection && (pool.empty() || pool_d != sh.d)) {
      pool = pool_for(g, sh.d);
      pool_d = sh.d;
    }
    expand_shard(
        ctx, sh, pool,
        [&](const std::vector<u64>& t) {
          ++count;
          visit(t);
        },
        family_prunes);
  }
  return count;
}

}  // namespace

u64 enumerate_admissible(
    u64 np, unsigned max_weight,
    const std::function<void(const std::vector<u64>&)>& visit) {
  return enumerate_impl(np, max_weight, visit, /*family_prunes=*/true);
}

u64 enumerate_symmetric(
    u64 np, unsigned max_weight,
    const std::function<void(const std::vector<u64>&)>& visit) {
  return enumerate_impl(np, max_weight, visit, /*family_prunes=*/false);
}

double float_castle(const std::vector<u64>& tuple, const CertifiedTrigTable& trig,
                    double bail) {
  const std::vector<u64> units = half_units(trig.modulus());
  return kernel(tuple.data(), tuple.size(), trig, units, bail);
}

std::string verdict_name(const Survivor& s) {
  switch (s.verdict) {
    case ExVerdict::kForm1: return "Form1";
    case ExVerdict::kForm2: return "Form2";
    case ExVerdict::kForm3: return "Form3";
    case ExVerdict::kTableOne:
      return "TableOne(" + std::to_string(s.table_index) + ")";
    case ExVerdict::kRejectedExact: return "RejectedExact";
    case ExVerdict::kNew: return "New";
  }
  return "?";
}

Survivor verify_candidate(const std::vector<u64>& tuple, u64 np,
                          const std::vector<std::pair<u64, std::vector<Int>>>&
                              table_keys,
                          const Rat& exact_threshold) {
  if (tuple.empty() || np == 0)
    throw std::invalid_argument("verify_candidate: empty candidate");
  Survivor s;
  if (np <= kMaxDenseLevel) {
    const CyclotomicInt alpha = CyclotomicInt::from_sparse(
        static_cast<unsigned>(np), tuple_terms(tuple));
    if (alpha.is_zero())
      throw std::invalid_argument("verify_candidate: candidate sums to zero");
    s = classify_dense(alpha, table_keys, exact_threshold);
  } else {
    s = classify_sparse_candidate(tuple, np, table_keys, exact_threshold);
  }
  s.size = static_cast<unsigned>(tuple.size());
  s.tuple = tuple;
  return s;
}

SparseElement sparse_reduce_level(const SparseElement& a) {
  if (a.level == 0)
    throw std::invalid_argument("sparse_reduce_level: zero level");
  SMap m = smap_normalize(a.terms, a.level);
  u64 level = a.level;
  m = sparse_reduce_impl(std::move(m), level);
  SparseElement out;
  out.level = level;
  for (const auto& [e, c] : m) out.terms.emplace_back(e, c);
  return out;
}

JobReport run_job(const ExhaustJob& job, unsigned workers) {
  if (workers == 0) workers = 1;
  const auto t0 = std::chrono::steady_clock::now();
  JobReport report;
  report.job = job;

  const u64 np = job.n_prime;
  const CertifiedTrigTable trig(np);
  const std::vector<u64> units = half_units(np);
  const std::vector<u64> g = gcd_table(np);
  const std::vector<Shard> shards = make_shards(np, job.weight, g);
  const SearchCtx ctx(np);
  const double bail = job.float_threshold;

  std::vector<u64> shard_count(shards.size(), 0);
  std::vector<std::vector<std::pair<std::vector<u64>, double>>> shard_hits(
      shards.size());

  const auto work = [&](unsigned wid) {
    u64 pool_d = 0;
    std::vector<u64> pool;
    bool pool_ready = false;
    for (size_t i = wid; i < shards.size(); i += workers) {
      const Shard& sh = shards[i];
      if (sh.kind == Shard::kSection && (!pool_ready || pool_d != sh.d)) {
        pool = pool_for(g, sh.d);
        pool_d = sh.d;
        pool_ready = true;
      }
      expand_shard(ctx, sh, pool, [&](const std::vector<u64>& t) {
        ++shard_count[i];
        const double fc = kernel(t.data(), t.size(), trig, units, bail);
        if (fc <= bail) shard_hits[i].emplace_back(t, fc);
      });
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool_threads;
    pool_threads.reserve(workers);
    for (unsigned wid = 0; wid < workers; ++wid)
      pool_threads.emplace_back(work, wid);
    for (auto& th : pool_threads) th.join();
  }

  const auto& keys = table1_keys();
  for (size_t i = 0; i < shards.size(); ++i) {
    report.tuples += shard_count[i];
    for (auto& [t, fc] : shard_hits[i]) {
      ++report.float_survivors;
      Survivor s = verify_candidate(t, np, keys, job.exact_threshold);
      s.float_value = fc;
      report.survivors.push_back(std::move(s));
    }
  }
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

std::string report_jsonl(const JobReport& report) {
  std::ostringstream os;
  u64 counts[6] = {0, 0, 0, 0, 0, 0};
  for (const Survivor& s : report.survivors) {
    os << survivor_json(s, report.job.n_prime) << "\n";
    counts[static_cast<int>(s.verdict)]++;
  }
  os << "{\"summary\":{\"level\":" << report.job.level
     << ",\"weight\":" << report.job.weight << ",\"n_prime\":" << report.job.n_prime
     << ",\"tuples\":" << report.tuples
     << ",\"float_survivors\":" << report.float_survivors << ",\"verdicts\":{"
     << "\"Form1\":" << counts[0] << ",\"Form2\":" << counts[1]
     << ",\"Form3\":" << counts[2] << ",\"TableOne\":" << counts[3]
     << ",\"RejectedExact\":" << counts[4] << ",\"New\":" << counts[5]
     << "}}}\n";
  return os.str();
}

}  // namespace smallhouse
