/// @file tables.cpp
/// @brief Embedded fixture tables, their parser and their verification.

#include "smallhouse/tables.hpp"

#include <json.hpp>

#include <set>
#include <sstream>
#include <stdexcept>

#include "smallhouse/numtheory.hpp"
#include "smallhouse/splitting.hpp"

namespace smallhouse {

namespace detail {
const char* embedded_tables_json();
}

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw std::runtime_error("tables: " + where + ": " + what);
}

Rat parse_rat(const std::string& s, const std::string& where) {
  try {
    Rat r(s);
    r.canonicalize();
    return r;
  } catch (const std::exception&) {
    bad(where, "unparsable rational '" + s + "'");
  }
}

CyclotomicInt parse_element(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("level") || !j.contains("terms"))
    bad(where, "element needs level and terms");
  u64 level = j.at("level").get<u64>();
  if (level == 0) bad(where, "level must be positive");
  std::vector<std::pair<long, Int>> terms;
  for (const auto& t : j.at("terms")) {
    if (!t.is_array() || t.size() != 2) bad(where, "term must be [exp, coeff]");
    long e = t.at(0).get<long>();
    if (e < 0 || static_cast<u64>(e) >= level)
      bad(where, "exponent " + std::to_string(e) + " out of range");
    Int c;
    try {
      c = Int(t.at(1).get<std::string>());
    } catch (const std::exception&) {
      bad(where, "unparsable coefficient");
    }
    terms.emplace_back(e, c);
  }
  return CyclotomicInt::from_sparse(level, terms);
}

void check_height_denominator(const Rat& height, u64 level,
                              const std::string& where) {
  Int den = height.get_den();
  Int phi(static_cast<unsigned long>(euler_phi(level)));
  if (phi % den != 0)
    bad(where, "height denominator does not divide phi(level)");
}

int legendre(long a, long p) {
  long base = ((a % p) + p) % p, e = (p - 1) / 2, acc = 1;
  while (e) {
    if (e & 1) acc = acc * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return acc == 1 ? 1 : (acc == 0 ? 0 : -1);
}

/// sqrt(13) in Q(zeta_13) and sqrt(21) in Q(zeta_21), via quadratic Gauss
/// sums: for q = 1 mod 4 prime, sum_a (a|q) zeta_q^a = sqrt(q); and
/// sqrt(21) = -(zeta_3 - zeta_3^2) * sum_a (a|7) zeta_7^a = -i sqrt(3) i sqrt(7).
CyclotomicInt gauss_sum_sqrt(u64 d) {
  auto gauss = [](long q) {
    std::vector<std::pair<long, Int>> terms;
    for (long a = 1; a < q; ++a) terms.emplace_back(a, legendre(a, q));
    return CyclotomicInt::from_sparse(static_cast<unsigned>(q), terms);
  };
  if (d == 13) return gauss(13);
  if (d == 21) return CyclotomicInt::zero(1) - gauss(3) * gauss(7);
  throw std::invalid_argument("gauss_sum_sqrt: unsupported radicand " +
                              std::to_string(d));
}

/// Exact division of every power-basis coefficient by 2.
CyclotomicInt halved(const CyclotomicInt& a) {
  std::vector<std::pair<long, Int>> terms;
  const auto& c = a.coeffs();
  for (size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    if (c[i] % 2 != 0)
      throw std::invalid_argument("halved: odd coefficient");
    terms.emplace_back(static_cast<long>(i), c[i] / 2);
  }
  return CyclotomicInt::from_sparse(a.level(), terms);
}

std::string castle_name(const CastleSpec& s) {
  return s.kind + "(" + std::to_string(s.param) + ")";
}

}  // namespace

CyclotomicInt castle_target(const CastleSpec& spec) {
  if (spec.kind == "cos2" || spec.kind == "fourcos2") {
    if (spec.param == 0)
      throw std::invalid_argument("castle_target: zero parameter");
    Int base = spec.kind == "cos2" ? 3 : 2;
    unsigned m = static_cast<unsigned>(spec.param);
    return CyclotomicInt::from_int(base, m) + CyclotomicInt::root_power(m, 1) +
           CyclotomicInt::root_power(m, -1);
  }
  if (spec.kind == "surd") {
    CyclotomicInt s = gauss_sum_sqrt(spec.param);
    return halved(CyclotomicInt::from_int(5, s.level()) + s);
  }
  throw std::invalid_argument("castle_target: unknown kind '" + spec.kind +
                              "'");
}

Tables parse_tables(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    bad("parse", e.what());
  }
  Tables t;

  int idx = 0;
  for (const auto& row : j.value("table1", json::array())) {
    std::string where = "table1[" + std::to_string(idx++) + "]";
    ExceptionalEntry e;
    e.castle.kind = row.at("castle").at("kind").get<std::string>();
    e.castle.param = row.at("castle").at("param").get<u64>();
    e.height = parse_rat(row.at("height").get<std::string>(), where);
    e.level = row.at("level").get<u64>();
    e.element = parse_element(row.at("element"), where);
    if (e.element.level() != e.level)
      bad(where, "stored representation level differs from stated level");
    check_height_denominator(e.height, e.level, where);
    t.table1.push_back(std::move(e));
  }

  idx = 0;
  for (const auto& row : j.value("table2", json::array())) {
    std::string where = "table2[" + std::to_string(idx++) + "]";
    WeightBoundEntry e;
    e.n = row.at("n").get<unsigned>();
    if (e.n == 0) bad(where, "weight must be positive");
    e.height = parse_rat(row.at("height").get<std::string>(), where);
    e.element = parse_element(row.at("element"), where);
    check_height_denominator(e.height, e.element.level(), where);
    t.table2.push_back(std::move(e));
  }

  idx = 0;
  for (const auto& row : j.value("table3", json::array())) {
    std::string where = "table3[" + std::to_string(idx++) + "]";
    MatchingEntry e;
    if (row.contains("family")) {
      int form = row.at("family").at("form").get<int>();
      u64 param = row.at("family").at("param").get<u64>();
      if (form != 3) bad(where, "only family 3 rows are expected");
      e.element = family_element(CasselsForm::kForm3, param);
    } else {
      e.element = parse_element(row.at("element"), where);
    }
    e.expected_hash = row.at("hash").get<std::string>();
    e.partner = row.at("partner").get<std::string>();
    t.table3.push_back(std::move(e));
  }

  idx = 0;
  for (const auto& row : j.value("table4", json::array())) {
    std::string where = "table4[" + std::to_string(idx++) + "]";
    SplitFixtureRow r;
    r.c = row.at("c").get<int>();
    r.prime = row.at("prime").get<u64>();
    r.level = row.at("level").get<u64>();
    r.alpha = row.at("alpha").get<std::string>();
    r.multiplicity = row.at("m").get<unsigned>();
    r.self_conjugate = row.at("self_conjugate").get<bool>();
    r.t_size = row.at("t_size").get<u64>();
    if (r.t_size > 0) {
      r.lo = row.at("box").at("lo").get<long>();
      r.hi = row.at("box").at("hi").get<long>();
      if (r.lo > r.hi) bad(where, "empty box");
    }
    t.table4.push_back(std::move(r));
  }

  for (const auto& row : j.value("residue_orders", json::array())) {
    t.residue_orders.push_back({row.at("p").get<u64>(),
                                row.at("q").get<u64>(),
                                row.at("order").get<u64>()});
  }

  idx = 0;
  for (const auto& row : j.value("presets", json::array())) {
    std::string where = "presets[" + std::to_string(idx++) + "]";
    ExhaustPreset p;
    p.name = row.at("name").get<std::string>();
    p.level = row.at("level").get<u64>();
    p.weight = row.at("weight").get<unsigned>();
    p.extended = row.at("extended").get<bool>();
    if (p.level == 0 || p.weight == 0) bad(where, "degenerate preset");
    t.presets.push_back(std::move(p));
  }

  return t;
}

const Tables& tables() {
  static const Tables t = parse_tables(detail::embedded_tables_json());
  return t;
}

int VerifyReport::passed() const {
  int n = 0;
  for (const auto& l : lines) n += l.pass;
  return n;
}

int VerifyReport::failed() const {
  return static_cast<int>(lines.size()) - passed();
}

VerifyReport verify_table1() {
  VerifyReport r{"table 1: exceptional elements", {}};
  const auto& tab = tables().table1;
  std::set<std::vector<Int>> hashes;
  bool all_distinct = true;
  std::string dup_detail = "all equivalence hashes pairwise distinct";
  int idx = 0;
  for (const auto& e : tab) {
    ++idx;
    std::ostringstream name;
    name << "entry " << idx << " (level " << e.level << ")";
    std::ostringstream fail;
    Rat h = cassels_height(e.element);
    if (h != e.height)
      fail << "height " << h.get_str() << " != " << e.height.get_str() << "; ";
    u64 ml = minimal_level(e.element).element.level();
    if (ml != e.level)
      fail << "minimal level " << ml << " != " << e.level << "; ";
    if (!castle_equals(e.element, castle_target(e.castle)))
      fail << "squared castle != " << castle_name(e.castle) << "; ";
    CasselsTestResult ft = cassels_form_test(e.element);
    if (ft.form != CasselsForm::kNone)
      fail << "family test matched form "
           << static_cast<int>(ft.form) << "; ";
    auto key = equivalence_hash(e.element);
    if (!hashes.insert(key).second) {
      all_distinct = false;
      dup_detail = "duplicate hash at entry " + std::to_string(idx) + ": " +
                   poly_to_string(key);
    }
    std::string f = fail.str();
    if (f.empty()) {
      std::ostringstream ok;
      ok << "height " << e.height.get_str() << ", castle "
         << castle_name(e.castle) << ", minimal level " << e.level
         << ", no family matches, hash " << poly_to_string(key);
      r.lines.push_back({name.str(), true, ok.str()});
    } else {
      r.lines.push_back({name.str(), false, f});
    }
  }
  r.lines.push_back({"hash distinctness", all_distinct, dup_detail});
  r.lines.push_back({"row count", true,
                     std::to_string(tab.size()) + " entries present"});
  return r;
}

VerifyReport verify_table2() {
  VerifyReport r{"table 2: weight-minimal witnesses", {}};
  int idx = 0;
  for (const auto& e : tables().table2) {
    ++idx;
    std::ostringstream name;
    name << "weight " << e.n << " witness (level " << e.element.level()
         << ")";
    std::ostringstream fail;
    Rat h = cassels_height(e.element);
    if (h != e.height)
      fail << "height " << h.get_str() << " != " << e.height.get_str() << "; ";
    std::string note;
    if (e.n <= 4) {
      WeightResult below = minimal_weight(e.element, e.n - 1);
      if (!below.exceeded)
        fail << "representable with weight " << below.weight << " < " << e.n
             << "; ";
      WeightResult at = minimal_weight(e.element, e.n);
      if (at.exceeded || at.weight != e.n)
        fail << "weight-" << e.n << " representation not found; ";
      note = ", weight certified exhaustively";
    } else {
      note = ", weight bound " + std::to_string(e.n) + " by construction";
    }
    std::string f = fail.str();
    r.lines.push_back(
        {name.str(), f.empty(),
         f.empty() ? "height " + e.height.get_str() + note : f});
  }
  return r;
}

VerifyReport verify_table3() {
  VerifyReport r{"table 3: minimal-house matches", {}};
  int idx = 0;
  for (const auto& e : tables().table3) {
    ++idx;
    std::ostringstream name;
    name << "match " << idx << " (" << e.partner << ")";
    std::string got = poly_to_string(equivalence_hash(e.element));
    bool ok = got == e.expected_hash;
    r.lines.push_back({name.str(), ok,
                       ok ? "hash " + got
                          : "hash " + got + " != " + e.expected_hash});
  }
  return r;
}

VerifyReport verify_splitting_fixture() {
  VerifyReport r{"table 4: splitting profiles and search boxes", {}};
  for (const auto& row : tables().table4) {
    std::ostringstream name;
    name << "level " << row.level << " (p = " << row.prime << ")";
    std::ostringstream fail;
    SplittingProfile prof = splitting_profile(row.level, row.prime);
    if (prof.t_size != row.t_size)
      fail << "split pairs " << prof.t_size << " != " << row.t_size << "; ";
    std::ostringstream okd;
    okd << "e=" << prof.ramification << " f=" << prof.residue_order
        << " g=" << prof.num_primes << ", " << row.t_size
        << " split pair(s)";
    if (row.t_size > 0 && prof.t_size == row.t_size) {
      UkBox box = uk_box(prof, row.multiplicity, row.self_conjugate);
      if (box.lo != row.lo || box.hi != row.hi)
        fail << "box [" << box.lo << "," << box.hi << "] != [" << row.lo
             << "," << row.hi << "]; ";
      else
        okd << ", box [" << row.lo << "," << row.hi << "]^" << box.dims
            << " of size " << box.size().get_str();
    } else if (row.t_size == 0) {
      UkBox box = uk_box(prof, row.multiplicity, row.self_conjugate);
      if (box.dims != 0 || box.size() != 1)
        fail << "expected a single exponent vector; ";
      else
        okd << ", single exponent vector";
    }
    std::string f = fail.str();
    r.lines.push_back({name.str(), f.empty(), f.empty() ? okd.str() : f});
  }
  for (const auto& cell : tables().residue_orders) {
    std::ostringstream name;
    name << "ord of " << cell.p << " mod " << cell.q;
    u64 got = multiplicative_order(cell.p % cell.q, cell.q);
    bool ok = got == cell.order;
    r.lines.push_back({name.str(), ok,
                       "order " + std::to_string(got) +
                           (ok ? "" : " != " + std::to_string(cell.order))});
  }
  return r;
}

VerifyReport verify_family_levels(u64 bound) {
  VerifyReport r{"cassels families: closed-form levels and heights", {}};
  const struct {
    CasselsForm form;
    const char* name;
  } forms[] = {{CasselsForm::kForm1, "form 1 (1 + zeta)"},
               {CasselsForm::kForm2, "form 2 (1 + zeta - zeta^-1)"},
               {CasselsForm::kForm3, "form 3 (golden pair)"}};
  for (const auto& f : forms) {
    u64 checked = 0;
    std::ostringstream fail;
    for (u64 n = 1; n <= bound; ++n) {
      CyclotomicInt el = family_element(f.form, n);
      if (el.is_zero()) continue;  // 1 + zeta_2 = 0 carries no invariants
      FamilyValues fv = family_values(f.form, n);
      Rat h = cassels_height(el);
      u64 ml = minimal_level(el).element.level();
      if (h != fv.height) {
        fail << "n=" << n << ": height " << h.get_str()
             << " != " << fv.height.get_str() << "; ";
        break;
      }
      if (ml != fv.minimal_level) {
        fail << "n=" << n << ": minimal level " << ml
             << " != " << fv.minimal_level << "; ";
        break;
      }
      ++checked;
    }
    std::string msg = fail.str();
    r.lines.push_back({std::string(f.name) + ", n <= " + std::to_string(bound),
                       msg.empty(),
                       msg.empty() ? std::to_string(checked) +
                                         " parameters match closed forms"
                                   : msg});
  }
  return r;
}

const std::vector<std::pair<u64, std::vector<Int>>>& table1_keys() {
  static const std::vector<std::pair<u64, std::vector<Int>>> keys = [] {
    std::vector<std::pair<u64, std::vector<Int>>> k;
    for (const auto& e : tables().table1)
      k.emplace_back(e.level, equivalence_hash(e.element));
    return k;
  }();
  return keys;
}

std::string render_text(const VerifyReport& report) {
  std::ostringstream out;
  out << "== " << report.title << " ==\n";
  for (const auto& l : report.lines)
    out << (l.pass ? "PASS " : "FAIL ") << l.name << ": " << l.detail << "\n";
  out << report.passed() << "/" << report.lines.size() << " checks passed\n";
  return out.str();
}

std::string render_json(const VerifyReport& report) {
  json checks = json::array();
  for (const auto& l : report.lines)
    checks.push_back(
        {{"name", l.name}, {"pass", l.pass}, {"detail", l.detail}});
  json j{{"title", report.title},
         {"all_pass", report.all_pass()},
         {"passed", report.passed()},
         {"failed", report.failed()},
         {"checks", checks}};
  return j.dump(2);
}

}  // namespace smallhouse
