/// @file cyclotomic.cpp
/// @brief Canonical power-basis arithmetic modulo cyclotomic polynomials.

#include "smallhouse/cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace smallhouse {

namespace {

/// Exact division of P by a monic divisor D in Z[x].
/// Requires: D monic, D divides P exactly (asserted by the zero remainder).
std::vector<Int> divide_exact_monic(std::vector<Int> p,
                                    const std::vector<Int>& d) {
  const size_t dd = d.size() - 1;  // degree of divisor
  if (p.size() < d.size()) throw std::logic_error("divide_exact_monic: degree");
  std::vector<Int> q(p.size() - dd);
  for (size_t k = q.size(); k-- > 0;) {
    Int c = p[k + dd];
    q[k] = c;
    if (c == 0) continue;
    for (size_t j = 0; j < dd; ++j) p[k + j] -= c * d[j];
    p[k + dd] = 0;
  }
  for (const Int& r : p)
    if (r != 0) throw std::logic_error("divide_exact_monic: nonzero remainder");
  return q;
}

/// Phi_N via x^N - 1 = prod_{d | N} Phi_d: build Phi_d for every divisor
/// ascending, each time dividing x^d - 1 by the proper-divisor factors.
std::vector<Int> cyclotomic_polynomial(unsigned n) {
  std::map<u64, std::vector<Int>> phi_of;
  for (u64 d : divisors(n)) {
    std::vector<Int> poly(static_cast<size_t>(d) + 1);
    poly[0] = -1;
    poly[static_cast<size_t>(d)] = 1;  // x^d - 1
    for (const auto& [e, phi_e] : phi_of)
      if (d % e == 0) poly = divide_exact_monic(std::move(poly), phi_e);
    phi_of.emplace(d, std::move(poly));
  }
  return phi_of.at(n);
}

std::mutex g_level_mutex;
std::unordered_map<unsigned, std::unique_ptr<LevelData>> g_levels;

std::unique_ptr<LevelData> build_level(unsigned n) {
  auto data = std::make_unique<LevelData>();
  data->level = n;
  data->phi = static_cast<unsigned>(euler_phi(n));
  data->cyclo = cyclotomic_polynomial(n);

  // Rows for zeta^k, phi <= k < n, by repeated multiplication with zeta:
  // shifting brings in the top coordinate, which folds back through
  // x^phi = -(cyclo[0] + ... + cyclo[phi-1] x^{phi-1}).
  const unsigned phi = data->phi;
  if (n > phi) {
    std::vector<Int> row(phi);
    for (unsigned j = 0; j < phi; ++j) row[j] = -data->cyclo[j];
    data->reduction.push_back(row);
    for (unsigned k = phi + 1; k < n; ++k) {
      const std::vector<Int>& prev = data->reduction.back();
      std::vector<Int> next(phi);
      Int carry = prev[phi - 1];
      for (unsigned j = phi - 1; j > 0; --j) next[j] = prev[j - 1];
      next[0] = 0;
      if (carry != 0)
        for (unsigned j = 0; j < phi; ++j)
          next[j] += carry * data->reduction[0][j];
      data->reduction.push_back(std::move(next));
    }
  }

  // Tr(zeta_n^j) = mu(n/g) * phi(n) / phi(n/g) with g = gcd(j, n).
  data->trace.resize(n);
  for (unsigned j = 0; j < n; ++j) {
    u64 g = std::gcd<u64>(j, n);
    u64 m = n / g;
    data->trace[j] = Int(mobius(m)) * Int(data->phi) / Int(euler_phi(m));
  }

  for (unsigned k = 1; k <= n; ++k)
    if (std::gcd(k, n) == 1) data->units.push_back(k);

  return data;
}

}  // namespace

const LevelData& LevelData::get(unsigned level) {
  if (level == 0) throw std::invalid_argument("cyclotomic level must be >= 1");
  if (level > kMaxDenseLevel)
    throw std::invalid_argument(
        "cyclotomic level " + std::to_string(level) + " exceeds the dense limit " +
        std::to_string(kMaxDenseLevel) + "; use the sparse interfaces");
  std::lock_guard<std::mutex> lock(g_level_mutex);
  auto it = g_levels.find(level);
  if (it == g_levels.end())
    it = g_levels.emplace(level, build_level(level)).first;
  return *it->second;
}

RootOfUnity RootOfUnity::make(unsigned order, long exponent) {
  if (order == 0) throw std::invalid_argument("root of unity: order 0");
  long e = exponent % static_cast<long>(order);
  if (e < 0) e += order;
  unsigned g = std::gcd(static_cast<unsigned>(e), order);
  if (e == 0) return RootOfUnity{1, 0};
  return RootOfUnity{order / g, static_cast<unsigned>(e) / g};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
  unsigned l = std::lcm(order, o.order);
  // Fractions of a turn add: e1/o1 + e2/o2 mod 1.
  u64 e = static_cast<u64>(exponent) * (l / order) +
          static_cast<u64>(o.exponent) * (l / o.order);
  return make(l, static_cast<long>(e % l));
}

RootOfUnity RootOfUnity::inverse() const {
  return make(order, -static_cast<long>(exponent));
}

std::string RootOfUnity::str() const {
  if (order == 1) return "1";
  if (order == 2) return "-1";
  std::ostringstream os;
  os << "zeta_" << order;
  if (exponent != 1) os << "^" << exponent;
  return os.str();
}

CyclotomicInt CyclotomicInt::zero(unsigned level) {
  const LevelData& ld = LevelData::get(level);
  return CyclotomicInt(level, std::vector<Int>(ld.phi));
}

CyclotomicInt CyclotomicInt::one(unsigned level) {
  CyclotomicInt r = zero(level);
  r.coeffs_[0] = 1;
  return r;
}

CyclotomicInt CyclotomicInt::from_int(const Int& v, unsigned level) {
  CyclotomicInt r = zero(level);
  r.coeffs_[0] = v;
  return r;
}

CyclotomicInt CyclotomicInt::root_power(unsigned level, long exponent) {
  return from_sparse(level, {{exponent, Int(1)}});
}

CyclotomicInt CyclotomicInt::from_sparse(
    unsigned level, const std::vector<std::pair<long, Int>>& terms) {
  const LevelData& ld = LevelData::get(level);
  std::vector<Int> c(ld.phi);
  for (const auto& [e, v] : terms) {
    if (v == 0) continue;
    long r = e % static_cast<long>(level);
    if (r < 0) r += level;
    auto k = static_cast<unsigned>(r);
    if (k < ld.phi) {
      c[k] += v;
    } else {
      const std::vector<Int>& row = ld.reduction[k - ld.phi];
      for (unsigned j = 0; j < ld.phi; ++j)
        if (row[j] != 0) c[j] += v * row[j];
    }
  }
  return CyclotomicInt(level, std::move(c));
}

bool CyclotomicInt::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const Int& v) { return v == 0; });
}

std::optional<Int> CyclotomicInt::as_integer() const {
  for (size_t j = 1; j < coeffs_.size(); ++j)
    if (coeffs_[j] != 0) return std::nullopt;
  return coeffs_[0];
}

CyclotomicInt CyclotomicInt::operator-() const {
  std::vector<Int> c(coeffs_.size());
  for (size_t j = 0; j < c.size(); ++j) c[j] = -coeffs_[j];
  return CyclotomicInt(level_, std::move(c));
}

CyclotomicInt CyclotomicInt::operator+(const CyclotomicInt& o) const {
  if (level_ != o.level_) {
    unsigned l = std::lcm(level_, o.level_);
    return to_level(l) + o.to_level(l);
  }
  std::vector<Int> c(coeffs_);
  for (size_t j = 0; j < c.size(); ++j) c[j] += o.coeffs_[j];
  return CyclotomicInt(level_, std::move(c));
}

CyclotomicInt CyclotomicInt::operator-(const CyclotomicInt& o) const {
  if (level_ != o.level_) {
    unsigned l = std::lcm(level_, o.level_);
    return to_level(l) - o.to_level(l);
  }
  std::vector<Int> c(coeffs_);
  for (size_t j = 0; j < c.size(); ++j) c[j] -= o.coeffs_[j];
  return CyclotomicInt(level_, std::move(c));
}

CyclotomicInt CyclotomicInt::operator*(const CyclotomicInt& o) const {
  if (level_ != o.level_) {
    unsigned l = std::lcm(level_, o.level_);
    return to_level(l) * o.to_level(l);
  }
  const LevelData& ld = LevelData::get(level_);
  const unsigned phi = ld.phi;
  // Schoolbook product; degree of the raw product is < 2*phi - 1 < 2*level,
  // so folding exponents once through zeta^level = 1 lands in [0, level).
  std::vector<Int> prod(2 * phi - 1);
  for (unsigned i = 0; i < phi; ++i) {
    if (coeffs_[i] == 0) continue;
    for (unsigned j = 0; j < phi; ++j) {
      if (o.coeffs_[j] == 0) continue;
      prod[i + j] += coeffs_[i] * o.coeffs_[j];
    }
  }
  std::vector<Int> c(phi);
  for (unsigned e = 0; e < prod.size(); ++e) {
    if (prod[e] == 0) continue;
    unsigned k = e >= level_ ? e - level_ : e;
    if (k < phi) {
      c[k] += prod[e];
    } else {
      const std::vector<Int>& row = ld.reduction[k - phi];
      for (unsigned j = 0; j < phi; ++j)
        if (row[j] != 0) c[j] += prod[e] * row[j];
    }
  }
  return CyclotomicInt(level_, std::move(c));
}

CyclotomicInt CyclotomicInt::operator*(const Int& v) const {
  std::vector<Int> c(coeffs_.size());
  for (size_t j = 0; j < c.size(); ++j) c[j] = coeffs_[j] * v;
  return CyclotomicInt(level_, std::move(c));
}

CyclotomicInt CyclotomicInt::multiply_root(long exponent) const {
  std::vector<std::pair<long, Int>> terms;
  for (unsigned j = 0; j < coeffs_.size(); ++j)
    if (coeffs_[j] != 0)
      terms.emplace_back(static_cast<long>(j) + exponent, coeffs_[j]);
  return from_sparse(level_, terms);
}

bool CyclotomicInt::operator==(const CyclotomicInt& o) const {
  if (level_ == o.level_) return coeffs_ == o.coeffs_;
  unsigned l = std::lcm(level_, o.level_);
  return to_level(l).coeffs_ == o.to_level(l).coeffs_;
}

CyclotomicInt CyclotomicInt::galois(u64 a) const {
  u64 r = a % level_;
  if (std::gcd<u64>(r, level_) != 1)
    throw std::invalid_argument("galois: exponent not coprime to the level");
  std::vector<std::pair<long, Int>> terms;
  for (unsigned j = 0; j < coeffs_.size(); ++j)
    if (coeffs_[j] != 0)
      terms.emplace_back(static_cast<long>((j * r) % level_), coeffs_[j]);
  return from_sparse(level_, terms);
}

CyclotomicInt CyclotomicInt::conjugate() const {
  if (level_ <= 2) return *this;
  return galois(level_ - 1);
}

Int CyclotomicInt::trace() const {
  const LevelData& ld = LevelData::get(level_);
  Int t = 0;
  for (unsigned j = 0; j < coeffs_.size(); ++j)
    if (coeffs_[j] != 0) t += coeffs_[j] * ld.trace[j];
  return t;
}

CyclotomicInt CyclotomicInt::to_level(unsigned m) const {
  if (m == level_) return *this;
  if (m % level_ != 0)
    throw std::invalid_argument("to_level: target is not a multiple");
  unsigned mult = m / level_;
  std::vector<std::pair<long, Int>> terms;
  for (unsigned j = 0; j < coeffs_.size(); ++j)
    if (coeffs_[j] != 0)
      terms.emplace_back(static_cast<long>(j) * mult, coeffs_[j]);
  return from_sparse(m, terms);
}

std::vector<std::pair<unsigned, Int>> CyclotomicInt::sparse_terms() const {
  std::vector<std::pair<unsigned, Int>> out;
  for (unsigned j = 0; j < coeffs_.size(); ++j)
    if (coeffs_[j] != 0) out.emplace_back(j, coeffs_[j]);
  return out;
}

std::optional<CyclotomicInt> CyclotomicInt::restrict_to(unsigned m) const {
  if (m == 0 || level_ % m != 0)
    throw std::invalid_argument("restrict_to: target must divide the level");
  CyclotomicInt cur = *this;
  while (cur.level_ != m) {
    unsigned quotient = cur.level_ / m;
    unsigned p = static_cast<unsigned>(factorize(quotient).front().first);
    PDecomposition dec = p_decompose(cur, p);
    if (dec.n == 1 && p == 2) {
      // Q(zeta_N) = Q(zeta_{N/2}) for N = 2 mod 4: alpha = eta_0 - eta_1.
      cur = dec.parts[0] - dec.parts[1];
      continue;
    }
    // Membership in Q(zeta_{N/p}) means only the zeroth part survives.  For
    // n = 1 the normalisation already absorbed the common shift, so the test
    // is the same for both cases.
    if (dec.x > 1 || (dec.x == 1 && dec.support[0] != 0)) return std::nullopt;
    cur = dec.parts[0];
  }
  return cur;
}

std::string CyclotomicInt::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (unsigned j = 0; j < coeffs_.size(); ++j) {
    const Int& c = coeffs_[j];
    if (c == 0) continue;
    Int a = abs(c);
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    if (j == 0) {
      os << a.get_str();
    } else {
      if (a != 1) os << a.get_str() << "*";
      os << "z";
      if (j != 1) os << "^" << j;
    }
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const CyclotomicInt& a) {
  return os << a.str();
}

CyclotomicInt PDecomposition::recompose(unsigned original_level) const {
  CyclotomicInt sum = CyclotomicInt::zero(original_level);
  unsigned pn = 1;
  for (unsigned i = 0; i < n; ++i) pn *= p;
  for (unsigned i = 0; i < parts.size(); ++i) {
    if (parts[i].is_zero()) continue;
    CyclotomicInt term = parts[i].to_level(original_level);
    sum += term.multiply_root(static_cast<long>(i) * (original_level / pn));
  }
  return sum;
}

PDecomposition p_decompose(const CyclotomicInt& alpha, unsigned p) {
  const unsigned n_level = alpha.level();
  if (p < 2 || n_level % p != 0)
    throw std::invalid_argument("p_decompose: p must divide the level");
  PDecomposition out;
  out.p = p;
  out.n = p_valuation(n_level, p);

  unsigned pn = 1;
  for (unsigned i = 0; i < out.n; ++i) pn *= p;
  const unsigned m = n_level / pn;        // prime-to-p part
  const unsigned np = n_level / p;        // level of the parts
  const unsigned pn1 = pn / p;            // p^{n-1}

  // CRT exponents: zeta_N^k = zeta_{p^n}^a * zeta_M^b with
  // a = k * inv(M) mod p^n and b = k * inv(p^n) mod M
  // (then k = a*M + b*p^n mod N, which is the identity used below).
  const u64 u = mod_inv(m % pn, pn);
  const u64 v = m > 1 ? mod_inv(pn % m, m) : 0;

  std::vector<std::vector<std::pair<long, Int>>> sparse(p);
  for (const auto& [k, c] : alpha.sparse_terms()) {
    u64 a = (static_cast<u64>(k) * u) % pn;
    u64 b = m > 1 ? (static_cast<u64>(k) * v) % m : 0;
    unsigned i = static_cast<unsigned>(a % p);
    u64 t = a / p;
    // zeta_{p^{n-1}}^t * zeta_M^b = zeta_{N/p}^{t*M + b*p^{n-1}} directly
    // (fractions of a turn: t/p^{n-1} + b/M = (t*M + b*p^{n-1})/(N/p)).
    u64 e = (t * m + b * pn1) % np;
    sparse[i].emplace_back(static_cast<long>(e), c);
  }
  out.parts.reserve(p);
  for (unsigned i = 0; i < p; ++i)
    out.parts.push_back(CyclotomicInt::from_sparse(np, sparse[i]));

  if (out.n == 1) {
    // The parts are unique only up to a common shift.  Shift the most
    // frequent value to zero (minimising the support size x); break ties
    // toward the lexicographically smallest coefficient vector.
    std::map<std::vector<Int>, unsigned> counts;
    for (const CyclotomicInt& part : out.parts) ++counts[part.coeffs()];
    const std::vector<Int>* best = nullptr;
    unsigned best_count = 0;
    for (const auto& [vec, cnt] : counts)
      if (cnt > best_count) best = &vec, best_count = cnt;
    // (std::map iterates keys ascending, so the first maximum is lex-least.)
    if (best != nullptr && !std::all_of(best->begin(), best->end(),
                                        [](const Int& z) { return z == 0; })) {
      std::vector<std::pair<long, Int>> terms;
      for (unsigned j = 0; j < best->size(); ++j)
        if ((*best)[j] != 0) terms.emplace_back(static_cast<long>(j), (*best)[j]);
      CyclotomicInt shift = CyclotomicInt::from_sparse(np, terms);
      for (CyclotomicInt& part : out.parts) part -= shift;
    }
  }

  for (unsigned i = 0; i < p; ++i)
    if (!out.parts[i].is_zero()) out.support.push_back(i);
  out.x = static_cast<unsigned>(out.support.size());
  return out;
}

}  // namespace smallhouse
