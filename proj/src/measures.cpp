/// @file measures.cpp
/// @brief Heights, castles, minimal level/weight, hash, and the form test.

#include "smallhouse/measures.hpp"

#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "smallhouse/numtheory.hpp"

namespace smallhouse {

namespace {

constexpr unsigned kInitialPrec = 96;
// Refinement cap: reaching it means an exact-zero difference slipped past
// the exactness checks, which is a logic error, not an input condition.
constexpr unsigned kMaxPrec = 1u << 20;

/// One representative per pair {k, N-k} of units mod N.  For a totally real
/// element w, sigma_k(w) = sigma_{N-k}(w), so these cover all conjugate
/// values of w.
std::vector<u64> half_units(unsigned level) {
  const auto& lev = LevelData::get(level);
  std::vector<u64> out;
  for (unsigned k : lev.units)
    if (level <= 2 || 2 * static_cast<u64>(k) < level) out.push_back(k);
  return out;
}

/// Exact sign of the identity-embedding value of a nonzero totally real
/// element (the embedding is injective, so the value is nonzero and
/// refinement terminates).
int real_sign(const CyclotomicInt& d) {
  const SparseTerms terms = sparse_of(d);
  for (unsigned prec = kInitialPrec; prec <= kMaxPrec; prec *= 2) {
    const int c = cos_sum_enclosure(terms, d.level(), 1, prec).compare(Rat(0));
    if (c != 0) return c;
  }
  throw std::logic_error("real_sign: refinement stalled on nonzero element");
}

/// N/2 when N = 2 mod 4 (where Q(zeta_N) = Q(zeta_{N/2})), else N.
u64 odd_or_quartic(u64 n) { return n % 4 == 2 ? n / 2 : n; }

Rat mu_over_phi_height(const Rat& base, u64 n) {
  Rat h = base + Rat(Int(2 * mobius(n))) / Rat(Int(euler_phi(n)));
  return h;
}

}  // namespace

Rat cassels_height(const CyclotomicInt& a) {
  const CyclotomicInt w = a * a.conjugate();
  Rat h(w.trace(), Int(w.phi()));
  h.canonicalize();
  return h;
}

Rat sparse_cassels_height(const SparseTerms& terms, u64 level) {
  if (level == 0)
    throw std::invalid_argument("sparse_cassels_height: level must be >= 1");
  const auto fac = factorize(level);
  const u64 phi_n = euler_phi(level);
  // Tr(zeta_level^t) = mu(m) phi(N)/phi(m) with m = level / gcd(t, level).
  const auto trace_root = [&](u64 t) -> Int {
    const u64 g = std::gcd(t, level);
    long sign = 1;
    u64 phi_m = 1;
    for (const auto& [p, e] : fac) {
      unsigned vg = 0;
      for (u64 gg = g; gg % p == 0; gg /= p) ++vg;
      const unsigned vm = e - vg;
      if (vm >= 2) return Int(0);
      if (vm == 1) {
        sign = -sign;
        phi_m *= p - 1;
      }
    }
    return Int(sign) * Int(phi_n / phi_m);
  };
  Int acc(0);
  for (const auto& [ei, ci] : terms)
    for (const auto& [ej, cj] : terms) {
      const u64 diff = (ei % level + level - ej % level) % level;
      acc += ci * cj * trace_root(diff);
    }
  Rat h(acc, Int(phi_n));
  h.canonicalize();
  return h;
}

RealEnclosure castle_enclosure_at(const CyclotomicInt& a, unsigned prec_bits) {
  const CyclotomicInt w = a * a.conjugate();
  const SparseTerms terms = sparse_of(w);
  RealEnclosure best;
  bool first = true;
  for (u64 k : half_units(w.level())) {
    const RealEnclosure e = cos_sum_enclosure(terms, w.level(), k, prec_bits);
    if (first) {
      best = e;
      first = false;
    } else {
      // The max of values v_k with v_k in [lo_k, hi_k] lies in
      // [max lo_k, max hi_k].
      if (e.lo > best.lo) best.lo = e.lo;
      if (e.hi > best.hi) best.hi = e.hi;
    }
  }
  best.precision_bits = prec_bits;
  return best;
}

RealEnclosure castle_enclosure(const CyclotomicInt& a, const Rat& max_width) {
  if (max_width <= 0)
    throw std::invalid_argument("castle_enclosure: width must be positive");
  for (unsigned prec = kInitialPrec; prec <= kMaxPrec; prec *= 2) {
    RealEnclosure e = castle_enclosure_at(a, prec);
    if (e.width() <= max_width) return e;
  }
  throw std::logic_error("castle_enclosure: refinement stalled");
}

Cmp castle_compare(const CyclotomicInt& a, const Rat& q) {
  const CyclotomicInt w = a * a.conjugate();
  const unsigned n = w.level();
  const SparseTerms terms = sparse_of(w);
  // A conjugate of w (an algebraic integer) can equal the rational q only if
  // q is a rational integer; those conjugates are found by exact subtraction
  // and excluded from refinement, so every remaining comparison terminates.
  bool any_equal = false;
  std::vector<u64> open;
  const bool q_integral = q.get_den() == 1;
  for (u64 k : half_units(n)) {
    if (q_integral) {
      const auto v = w.galois(k).as_integer();
      if (v && *v == q.get_num()) {
        any_equal = true;
        continue;
      }
    }
    open.push_back(k);
  }
  for (unsigned prec = kInitialPrec; prec <= kMaxPrec; prec *= 2) {
    std::vector<u64> still;
    for (u64 k : open) {
      const int c = cos_sum_enclosure(terms, n, k, prec).compare(q);
      if (c > 0) return Cmp::kGreater;
      if (c == 0) still.push_back(k);
    }
    if (still.empty()) return any_equal ? Cmp::kEqual : Cmp::kLess;
    open = std::move(still);
  }
  throw std::logic_error("castle_compare: refinement stalled");
}

bool castle_equals(const CyclotomicInt& a, const CyclotomicInt& target) {
  if (target != target.conjugate())
    throw std::invalid_argument("castle_equals: target must be totally real");
  const CyclotomicInt w = a * a.conjugate();
  const unsigned common =
      static_cast<unsigned>(std::lcm<u64>(w.level(), target.level()));
  const CyclotomicInt wl = w.to_level(common);
  const CyclotomicInt tl = target.to_level(common);
  bool any_equal = false;
  std::vector<CyclotomicInt> diffs;
  for (u64 k : half_units(common)) {
    CyclotomicInt d = wl.galois(k) - tl;
    if (d.is_zero())
      any_equal = true;
    else
      diffs.push_back(std::move(d));
  }
  if (!any_equal) return false;
  for (const auto& d : diffs)
    if (real_sign(d) > 0) return false;
  return true;
}

Rat separation_threshold(u64 level) {
  const u64 e = euler_phi(level);
  Int num, den;
  mpz_ui_pow_ui(num.get_mpz_t(), 25, static_cast<unsigned long>(e));
  mpz_ui_pow_ui(den.get_mpz_t(), 252, static_cast<unsigned long>(e));
  Rat r(num, den);
  r.canonicalize();
  return r;
}

MinimalLevelResult minimal_level(const CyclotomicInt& a) {
  MinimalLevelResult r{a, RootOfUnity::make(1, 0)};
  if (r.element.is_zero()) {
    r.element = CyclotomicInt::zero(1);
    return r;
  }
  bool changed = true;
  while (changed && r.element.level() > 1) {
    changed = false;
    const unsigned n = r.element.level();
    for (const auto& [p64, v] : factorize(n)) {
      const unsigned p = static_cast<unsigned>(p64);
      if (p == 2 && v == 1) {
        // N = 2 mod 4: Q(zeta_N) = Q(zeta_{N/2}) and, with zeta_2 = -1,
        // alpha = eta_0 - eta_1 already lies at level N/2.
        const auto d = p_decompose(r.element, 2);
        r.element = d.parts[0] - d.parts[1];
        changed = true;
        break;
      }
      // alpha zeta_{p^v}^{-i} lies in Q(zeta_{N/p}) for some i iff the
      // decomposition has at most one nonzero part (for v = 1 this uses the
      // shift normalisation of p_decompose, which makes the representative
      // with the most zero parts canonical).
      const auto d = p_decompose(r.element, p);
      if (d.x == 0) {
        r.element = CyclotomicInt::zero(1);
        return r;
      }
      if (d.x == 1) {
        const unsigned i0 = d.support[0];
        unsigned pv = 1;
        for (unsigned t = 0; t < v; ++t) pv *= p;
        r.element = d.parts[i0];
        r.witness = r.witness * RootOfUnity::make(pv, static_cast<long>(i0));
        changed = true;
        break;
      }
    }
  }
  return r;
}

namespace {

/// (degree, lexicographic highest-first) order on monic coefficient vectors.
bool poly_less(const std::vector<Int>& x, const std::vector<Int>& y) {
  if (x.size() != y.size()) return x.size() < y.size();
  return x < y;
}

}  // namespace

std::vector<Int> equivalence_hash(const CyclotomicInt& a) {
  const MinimalLevelResult ml = minimal_level(a);
  const CyclotomicInt& a0 = ml.element;
  if (a0.is_zero()) return {Int(1), Int(0)};
  const unsigned n0 = a0.level();
  const unsigned big = static_cast<unsigned>(std::lcm<u64>(2, n0));
  const CyclotomicInt base = a0.to_level(big);
  const auto& lev = LevelData::get(big);
  const u64 order = big;  // |W| = lcm(2, n0)

  // Candidates are base * zeta^j, j mod order; distinct j give distinct
  // elements (base != 0), so they are indexed by their coefficient vectors.
  std::vector<CyclotomicInt> mult;
  mult.reserve(order);
  std::map<std::vector<Int>, u64> mult_index;
  for (u64 r = 0; r < order; ++r) {
    mult.push_back(base.multiply_root(static_cast<long>(r)));
    mult_index.emplace(mult.back().coeffs(), r);
  }

  // Projective stabiliser: pairs (u, r) with sigma_u(base) = base * zeta^r.
  // sigma_u maps candidate j to candidate u j + r, so candidates share a
  // minimal polynomial exactly when they lie in one orbit of these affine
  // maps (two roots of one irreducible polynomial inside a Galois extension
  // are conjugate).
  std::vector<std::pair<u64, u64>> proj;
  for (unsigned u : lev.units) {
    const auto it = mult_index.find(base.galois(u).coeffs());
    if (it != mult_index.end()) proj.emplace_back(u, it->second);
  }

  std::vector<u64> parent(order);
  std::iota(parent.begin(), parent.end(), u64{0});
  const auto find = [&](u64 x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& [u, shift] : proj)
    for (u64 j = 0; j < order; ++j) {
      const u64 x = find(j), y = find((u * j + shift) % order);
      if (x != y) parent[x] = y;
    }

  // Degree of the class of j: phi(big) / #{(u, r) in proj : u j + r = j}.
  std::map<u64, u64> class_degree;
  u64 min_degree = 0;
  for (u64 j = 0; j < order; ++j) {
    const u64 root = find(j);
    if (class_degree.count(root)) continue;
    u64 stab = 0;
    for (const auto& [u, shift] : proj)
      if ((u * root + shift) % order == root % order) ++stab;
    const u64 deg = lev.phi / stab;
    class_degree[root] = deg;
    if (min_degree == 0 || deg < min_degree) min_degree = deg;
  }

  // Build the minimal polynomial of each minimal-degree class from power
  // sums: each distinct conjugate of a candidate appears phi(big)/deg times
  // among its phi(big) Galois images, so the k-th power sum over the roots
  // is Tr(cand^k) * deg / phi(big).  Newton's identities then produce the
  // coefficients, integers because the candidate is an algebraic integer
  // (every division below is checked to be exact).
  std::vector<Int> best;
  for (const auto& [rep, deg] : class_degree) {
    if (deg != min_degree) continue;
    const CyclotomicInt& cand = mult[rep];
    std::vector<Int> psum(deg + 1);
    CyclotomicInt pw = cand;
    for (u64 k = 1; k <= deg; ++k) {
      const Int num = pw.trace() * Int(deg);
      if (!mpz_divisible_ui_p(num.get_mpz_t(), lev.phi))
        throw std::logic_error("equivalence_hash: non-integral power sum");
      mpz_divexact_ui(psum[k].get_mpz_t(), num.get_mpz_t(), lev.phi);
      if (k < deg) pw *= cand;
    }
    std::vector<Int> elem(deg + 1);
    elem[0] = 1;
    for (u64 k = 1; k <= deg; ++k) {
      Int acc(0);
      for (u64 i = 1; i <= k; ++i) {
        if (i % 2 == 1)
          acc += elem[k - i] * psum[i];
        else
          acc -= elem[k - i] * psum[i];
      }
      if (!mpz_divisible_ui_p(acc.get_mpz_t(), static_cast<unsigned long>(k)))
        throw std::logic_error("equivalence_hash: non-integral coefficient");
      mpz_divexact_ui(elem[k].get_mpz_t(), acc.get_mpz_t(),
                      static_cast<unsigned long>(k));
    }
    std::vector<Int> out(deg + 1);
    for (u64 i = 0; i <= deg; ++i)
      out[i] = i % 2 == 1 ? Int(-elem[i]) : elem[i];
    if (best.empty() || poly_less(out, best)) best = std::move(out);
  }
  return best;
}

std::string poly_to_string(const std::vector<Int>& coeffs) {
  if (coeffs.empty()) return "0";
  std::ostringstream os;
  const size_t d = coeffs.size() - 1;
  bool first = true;
  for (size_t i = 0; i < coeffs.size(); ++i) {
    const Int& c = coeffs[i];
    if (c == 0) continue;
    const size_t deg = d - i;
    const Int abs = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    const bool show_coeff = abs != 1 || deg == 0;
    if (show_coeff) os << abs.get_str();
    if (deg > 0) {
      if (show_coeff) os << "*";
      os << "x";
      if (deg > 1) os << "^" << deg;
    }
  }
  return first ? "0" : os.str();
}

namespace {

/// Depth-first search for a nondecreasing multiset of weight `size` from
/// `roots` summing to `target`.  The final slot is resolved by one map
/// lookup instead of a scan.
struct WeightSearch {
  const CyclotomicInt& target;
  const std::vector<CyclotomicInt>& roots;
  const std::map<std::vector<Int>, unsigned>& index;
  std::vector<unsigned> chosen;

  bool run(unsigned start, unsigned remaining, CyclotomicInt& partial) {
    if (remaining == 0) return partial == target;
    if (remaining == 1) {
      const CyclotomicInt diff = target - partial;
      const auto it = index.find(diff.coeffs());
      if (it == index.end() || it->second < start) return false;
      chosen.push_back(it->second);
      return true;
    }
    for (unsigned w = start; w < roots.size(); ++w) {
      partial += roots[w];
      chosen.push_back(w);
      if (run(w, remaining - 1, partial)) return true;
      chosen.pop_back();
      partial -= roots[w];
    }
    return false;
  }
};

}  // namespace

WeightResult minimal_weight(const CyclotomicInt& a, unsigned max_weight) {
  const MinimalLevelResult ml = minimal_level(a);
  const CyclotomicInt& a0 = ml.element;
  if (a0.is_zero()) return {};
  const unsigned n0 = a0.level();

  // When p^2 divides the (minimal) level, the weight is additive across the
  // p-decomposition; recurse on the parts with the remaining budget.
  for (const auto& [p64, v] : factorize(n0)) {
    if (v < 2) continue;
    const unsigned p = static_cast<unsigned>(p64);
    unsigned pv = 1;
    for (unsigned t = 0; t < v; ++t) pv *= p;
    const auto d = p_decompose(a0, p);
    WeightResult out;
    unsigned budget = max_weight;
    for (unsigned i = 0; i < p; ++i) {
      if (d.parts[i].is_zero()) continue;
      WeightResult sub = minimal_weight(d.parts[i], budget);
      if (sub.exceeded) return {true, 0, {}};
      out.weight += sub.weight;
      budget -= sub.weight;
      const RootOfUnity twist = RootOfUnity::make(pv, static_cast<long>(i));
      for (auto& rt : sub.witness)
        out.witness.push_back(rt * twist * ml.witness);
    }
    return out;
  }

  // Odd squarefree level: enumerate multisets of +-zeta_{n0}^t, sizes
  // ascending, nondecreasing within a multiset.
  const unsigned count = 2 * n0;
  std::vector<CyclotomicInt> roots;
  roots.reserve(count);
  std::map<std::vector<Int>, unsigned> index;
  for (unsigned w = 0; w < count; ++w) {
    const long e = static_cast<long>(w % n0);
    const Int c = w < n0 ? Int(1) : Int(-1);
    roots.push_back(CyclotomicInt::from_sparse(n0, {{e, c}}));
    index.emplace(roots.back().coeffs(), w);
  }
  for (unsigned size = 0; size <= max_weight; ++size) {
    WeightSearch search{a0, roots, index, {}};
    CyclotomicInt partial = CyclotomicInt::zero(n0);
    if (!search.run(0, size, partial)) continue;
    WeightResult out{false, size, {}};
    for (unsigned w : search.chosen) {
      const long exponent =
          static_cast<long>(2 * (w % n0)) + (w < n0 ? 0 : static_cast<long>(n0));
      out.witness.push_back(RootOfUnity::make(2 * n0, exponent) * ml.witness);
    }
    return out;
  }
  return {true, 0, {}};
}

CasselsTestResult cassels_form_test(const CyclotomicInt& a) {
  // Step 1: sums of at most two roots of unity.
  const WeightResult w2 = minimal_weight(a, 2);
  if (!w2.exceeded) return {CasselsForm::kForm1, w2.weight, 0};

  // Step 2: a root eta = zeta^j of T^2 - (a conj(a) - 3) T + 1 among the
  // roots of unity of the minimal field.  The equation pins
  // eta + eta^{-1} = a conj(a) - 3 exactly; at most one j in [0, L/2]
  // matches.  No root: not of form (2) or (3).
  const MinimalLevelResult ml = minimal_level(a);
  const CyclotomicInt& a0 = ml.element;
  const unsigned n0 = a0.level();
  const unsigned big = static_cast<unsigned>(std::lcm<u64>(2, n0));
  const CyclotomicInt wbar = (a0 * a0.conjugate()).to_level(big);
  long found = -1;
  for (u64 j = 0; j <= big / 2 && found < 0; ++j) {
    const CyclotomicInt rhs =
        CyclotomicInt::from_int(Int(3), big) +
        CyclotomicInt::root_power(big, static_cast<long>(j)) +
        CyclotomicInt::root_power(big, -static_cast<long>(j));
    if (wbar == rhs) found = static_cast<long>(j);
  }
  if (found < 0) return {};
  const u64 j = static_cast<u64>(found);
  const std::vector<Int> key = equivalence_hash(a0);

  // For the family parameters the root of the quadratic is -zeta^2 (form 2)
  // or -zeta (form 3), so the candidates below are built from -eta =
  // zeta^{j + L/2}.
  const u64 neg = (j + big / 2) % big;

  // Step 3: form (2) needs a square root xi of -eta among the roots of
  // unity, i.e. j + L/2 even; the candidate is 1 + xi - xi^{-1}.
  if ((j + big / 2) % 2 == 0) {
    const u64 half = (j + big / 2) / 2;
    const CyclotomicInt cand =
        CyclotomicInt::one(big) +
        CyclotomicInt::root_power(big, static_cast<long>(half)) -
        CyclotomicInt::root_power(big, -static_cast<long>(half));
    if (equivalence_hash(cand) == key)
      return {CasselsForm::kForm2, 0, big / std::gcd<u64>(big, half)};
  }

  // Step 4: form (3) lives over Q(zeta_5); the candidate replaces the
  // family's parameter by -eta.
  if (n0 % 5 == 0) {
    const long e5 = static_cast<long>(big / 5);
    const CyclotomicInt cand = CyclotomicInt::from_sparse(
        big, {{e5, Int(1)},
              {4 * e5, Int(1)},
              {static_cast<long>((2 * static_cast<u64>(e5) + neg) % big), Int(1)},
              {static_cast<long>((3 * static_cast<u64>(e5) + neg) % big), Int(1)}});
    if (equivalence_hash(cand) == key)
      return {CasselsForm::kForm3, 0, big / std::gcd<u64>(big, neg)};
  }
  return {};
}

u64 n_prime(u64 n) {
  if (n % 2 == 1) return 2 * n;
  if (n % 4 != 0) return n;
  if (n % 8 == 4) return n / 4;
  return n / 2;
}

CyclotomicInt family_element(CasselsForm form, u64 n) {
  if (n == 0)
    throw std::invalid_argument("family_element: parameter must be >= 1");
  const unsigned un = static_cast<unsigned>(n);
  switch (form) {
    case CasselsForm::kForm1:
      return CyclotomicInt::from_sparse(un, {{0, Int(1)}, {1, Int(1)}});
    case CasselsForm::kForm2:
      return CyclotomicInt::from_sparse(
          un, {{0, Int(1)}, {1, Int(1)}, {-1, Int(-1)}});
    case CasselsForm::kForm3: {
      const unsigned m = static_cast<unsigned>(std::lcm<u64>(5, n));
      const long e5 = static_cast<long>(m / 5);
      const long en = static_cast<long>(m / n);
      return CyclotomicInt::from_sparse(m, {{e5, Int(1)},
                                            {4 * e5, Int(1)},
                                            {2 * e5 + en, Int(1)},
                                            {3 * e5 + en, Int(1)}});
    }
    default:
      throw std::invalid_argument("family_element: not a family form");
  }
}

FamilyValues family_values(CasselsForm form, u64 n) {
  if (n == 0)
    throw std::invalid_argument("family_values: parameter must be >= 1");
  const auto cos_expr = [](const Int& c, u64 m) {
    // c + zeta_m + zeta_m^{-1} as an exact element at level m.
    return CyclotomicInt::from_int(c, static_cast<unsigned>(m)) +
           CyclotomicInt::root_power(static_cast<unsigned>(m), 1) +
           CyclotomicInt::root_power(static_cast<unsigned>(m), -1);
  };
  const auto neg_cos_expr = [](const Int& c, u64 m, u64 power) {
    return CyclotomicInt::from_int(c, static_cast<unsigned>(m)) -
           CyclotomicInt::root_power(static_cast<unsigned>(m),
                                     static_cast<long>(power)) -
           CyclotomicInt::root_power(static_cast<unsigned>(m),
                                     -static_cast<long>(power));
  };
  switch (form) {
    case CasselsForm::kForm1: {
      CyclotomicInt value = cos_expr(Int(2), n);
      const u64 lvl = n == 3 ? 1 : odd_or_quartic(n);
      return {value, value, mu_over_phi_height(Rat(2), n), lvl};
    }
    case CasselsForm::kForm2: {
      const u64 m = n_prime(n);
      u64 lvl;
      if (n == 3 || n == 6)
        lvl = 1;
      else if (n == 12)
        lvl = 4;
      else
        lvl = odd_or_quartic(n);
      return {neg_cos_expr(Int(3), n, 2), cos_expr(Int(3), m),
              mu_over_phi_height(Rat(3), m), lvl};
    }
    case CasselsForm::kForm3: {
      const u64 m = n_prime(2 * n);
      const u64 lvl = n == 1 ? 1 : std::lcm<u64>(5, odd_or_quartic(n));
      return {neg_cos_expr(Int(3), n, 1), cos_expr(Int(3), m),
              mu_over_phi_height(Rat(3), m), lvl};
    }
    default:
      throw std::invalid_argument("family_values: not a family form");
  }
}

Rat height_family_formula(u64 n) { return mu_over_phi_height(Rat(3), n); }

}  // namespace smallhouse
