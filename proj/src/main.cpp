/// @file main.cpp
/// @brief smallhouse CLI: exact complexity measures for cyclotomic
///        integers, the certified exhaustive search, difference-set
///        verifiers, splitting profiles, and the fixture verification
///        pipelines.
///
/// Exit codes: 0 when the requested computation succeeds and every check
/// it performs passes; 1 when a verification or search reports a failure
/// (a New survivor, a falsified lemma, a fixture mismatch); 2 on usage or
/// input errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "smallhouse/cyclotomic.hpp"
#include "smallhouse/diffsets.hpp"
#include "smallhouse/exhaust.hpp"
#include "smallhouse/measures.hpp"
#include "smallhouse/splitting.hpp"
#include "smallhouse/tables.hpp"

namespace {

using nlohmann::json;
using namespace smallhouse;

/// Parse the sparse element text "e1:c1,e2:c2,..." at the given level.
CyclotomicInt parse_element(const std::string& text, u64 level) {
  if (level == 0 || level > kMaxDenseLevel)
    throw std::invalid_argument("--level must be in [1, " +
                                std::to_string(kMaxDenseLevel) + "]");
  std::vector<std::pair<long, Int>> terms;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    const size_t colon = tok.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("bad term '" + tok +
                                  "' (expected exponent:coefficient)");
    try {
      const long e = std::stol(tok.substr(0, colon));
      const Int c(tok.substr(colon + 1));
      terms.emplace_back(e, c);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad term '" + tok +
                                  "' (expected exponent:coefficient)");
    }
  }
  return CyclotomicInt::from_sparse(static_cast<unsigned>(level), terms);
}

/// Parse "5.01", "501/100", or "5" into an exact rational.
Rat parse_rational(const std::string& text) {
  const size_t dot = text.find('.');
  try {
    if (dot == std::string::npos) {
      Rat q(text);  // integer or a/b
      q.canonicalize();
      return q;
    }
    const std::string ip = text.substr(0, dot), fp = text.substr(dot + 1);
    if (fp.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument(text);
    Int num(ip.empty() || ip == "-" ? ip + "0" : ip);
    Int den(1);
    for (char ch : fp) {
      num = num * 10 + (num < 0 ? -(ch - '0') : (ch - '0'));
      den *= 10;
    }
    Rat q(num, den);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    throw std::invalid_argument("bad rational '" + text + "'");
  }
}

json root_json(const RootOfUnity& r) {
  return json{{"order", r.order}, {"exponent", r.exponent}};
}

void print_json(const json& j) { std::cout << j.dump() << "\n"; }

int cmd_height(const std::string& elt, u64 level) {
  const CyclotomicInt a = parse_element(elt, level);
  const Rat h = cassels_height(a);
  print_json({{"level", level},
              {"height", h.get_str()},
              {"height_approx", h.get_d()}});
  return 0;
}

int cmd_castle(const std::string& elt, u64 level, unsigned bits) {
  const CyclotomicInt a = parse_element(elt, level);
  const Rat width = Rat(1) / (Int(1) << bits);
  const RealEnclosure enc = castle_enclosure(a, width);
  print_json({{"level", level},
              {"castle_sq_lo", enc.lo.get_str()},
              {"castle_sq_hi", enc.hi.get_str()},
              {"castle_sq_approx", enc.lo.get_d()},
              {"max_width_log2", -static_cast<long>(bits)}});
  return 0;
}

int cmd_minlevel(const std::string& elt, u64 level) {
  const CyclotomicInt a = parse_element(elt, level);
  const MinimalLevelResult r = minimal_level(a);
  json terms = json::array();
  for (const auto& [e, c] : r.element.sparse_terms())
    terms.push_back(json{{"exponent", e}, {"coefficient", c.get_str()}});
  print_json({{"level", level},
              {"minimal_level", r.element.level()},
              {"witness_root", root_json(r.witness)},
              {"reduced_terms", terms}});
  return 0;
}

int cmd_hash(const std::string& elt, u64 level) {
  const CyclotomicInt a = parse_element(elt, level);
  const std::vector<Int> h = equivalence_hash(a);
  json coeffs = json::array();
  for (const Int& c : h) coeffs.push_back(c.get_str());
  print_json({{"level", level},
              {"minimal_level", minimal_level(a).element.level()},
              {"hash", coeffs},
              {"polynomial", poly_to_string(h)}});
  return 0;
}

int cmd_weight(const std::string& elt, u64 level, unsigned max_weight) {
  const CyclotomicInt a = parse_element(elt, level);
  const WeightResult r = minimal_weight(a, max_weight);
  json witness = json::array();
  for (const RootOfUnity& root : r.witness) witness.push_back(root_json(root));
  print_json({{"level", level},
              {"max_weight", max_weight},
              {"exceeded", r.exceeded},
              {"weight", r.weight},
              {"witness", witness}});
  return 0;
}

int cmd_cassels_test(const std::string& elt, u64 level) {
  const CyclotomicInt a = parse_element(elt, level);
  const CasselsTestResult r = cassels_form_test(a);
  const char* form = r.form == CasselsForm::kNone    ? "none"
                     : r.form == CasselsForm::kForm1 ? "form1"
                     : r.form == CasselsForm::kForm2 ? "form2"
                                                     : "form3";
  print_json({{"level", level},
              {"form", form},
              {"weight", r.weight},
              {"parameter", r.parameter}});
  return r.form == CasselsForm::kNone ? 1 : 0;
}

int cmd_exhaust(const std::string& pair, const std::string& preset,
                unsigned jobs, const std::string& out,
                double float_threshold, const std::string& exact_threshold,
                bool extended) {
  ExhaustJob job;
  if (!pair.empty()) {
    const size_t comma = pair.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("--pair expects N,n");
    job = make_job(std::stoull(pair.substr(0, comma)),
                   static_cast<unsigned>(std::stoul(pair.substr(comma + 1))));
  } else {
    const ExhaustPreset* found = nullptr;
    std::string names;
    for (const ExhaustPreset& p : tables().presets) {
      names += (names.empty() ? "" : "|") + p.name;
      if (p.name == preset) found = &p;
    }
    if (preset.empty() || found == nullptr)
      throw std::invalid_argument("unknown preset '" + preset +
                                  "' (available: " + names + ")");
    if (found->extended && !extended)
      throw std::invalid_argument(
          "preset '" + preset +
          "' is an extended run outside the default time budget; rerun with "
          "--extended to confirm");
    job = make_job(found->level, found->weight);
  }
  job.float_threshold = float_threshold;
  job.exact_threshold = parse_rational(exact_threshold);

  const JobReport report = run_job(job, jobs);
  const std::string text = report_jsonl(report);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot open " + out);
    f << text;
  }
  u64 news = 0;
  for (const Survivor& s : report.survivors)
    if (s.verdict == ExVerdict::kNew) ++news;
  std::fprintf(stderr,
               "level=%llu weight=%u n'=%llu tuples=%llu survivors=%zu "
               "new=%llu (%.2fs)\n",
               static_cast<unsigned long long>(job.level), job.weight,
               static_cast<unsigned long long>(job.n_prime),
               static_cast<unsigned long long>(report.tuples),
               report.survivors.size(), static_cast<unsigned long long>(news),
               report.seconds);
  return news == 0 ? 0 : 1;
}

int cmd_diffset(const std::string& lemma, u64 p, unsigned x, bool witness) {
  LemmaVerdict v;
  json extra;
  if (lemma == "singleton") {
    v = singleton_difference_holds(p, x);
    extra["hadamard_bound"] = hadamard_bound(x);
    extra["enumeration_needed"] = static_cast<double>(p) < hadamard_bound(x);
  } else if (lemma == "modp2") {
    v = mod_p2_property_holds(p, x);
  } else if (lemma == "graph") {
    v = graph_property_holds(p, x);
  } else {
    throw std::invalid_argument("--lemma must be singleton|modp2|graph");
  }
  json j{{"lemma", lemma}, {"p", p}, {"x", x}, {"holds", v.holds}};
  for (auto& [k, val] : extra.items()) j[k] = val;
  if (!v.holds && witness) j["witness"] = v.witness;
  print_json(j);
  return v.holds ? 0 : 1;
}

int cmd_splitting(u64 level, u64 prime, int castle_exponent,
                  bool self_conjugate) {
  const SplittingProfile prof = splitting_profile(level, prime);
  json j{{"level", prof.level},
         {"prime", prof.prime},
         {"ramification", prof.ramification},
         {"residue_order", prof.residue_order},
         {"num_primes", prof.num_primes},
         {"conjugation_split", prof.conjugation_split},
         {"t_size", prof.t_size}};
  if (castle_exponent >= 0) {
    const UkBox box =
        uk_box(prof, static_cast<unsigned>(castle_exponent), self_conjugate);
    j["box"] = json{{"dims", box.dims},
                    {"lo", box.lo},
                    {"hi", box.hi},
                    {"size", box.size().get_str()}};
  }
  print_json(j);
  return 0;
}

int cmd_verify_tables(const std::string& table, bool as_json) {
  std::vector<VerifyReport> reports;
  if (table.empty() || table == "1") reports.push_back(verify_table1());
  if (table.empty() || table == "2") reports.push_back(verify_table2());
  if (table.empty() || table == "3") reports.push_back(verify_table3());
  if (table.empty() || table == "4" || table == "splitting")
    reports.push_back(verify_splitting_fixture());
  if (table.empty() || table == "families")
    reports.push_back(verify_family_levels());
  if (reports.empty())
    throw std::invalid_argument("--table must be 1|2|3|4|families");
  bool all = true;
  if (as_json) {
    std::string out = "[";
    for (size_t i = 0; i < reports.size(); ++i)
      out += (i ? "," : "") + render_json(reports[i]);
    std::cout << out << "]\n";
  }
  for (const VerifyReport& r : reports) {
    if (!as_json) std::cout << render_text(r);
    all = all && r.all_pass();
  }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "smallhouse: exact castle, height, level and weight computations for "
      "sums of roots of unity, with the certified searches built on them"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable verify-tables output");

  std::string elt;
  u64 level = 1;
  unsigned bits = 60;
  unsigned max_weight = 4;

  const auto add_elt = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--level", level, "cyclotomic level N of the input")
        ->required();
    sub->add_option("--elt", elt,
                    "sparse element e1:c1,e2:c2,... "
                    "(signed decimal coefficients)")
        ->required();
  };

  CLI::App* height = app.add_subcommand("height", "exact Cassels height");
  add_elt(height);
  CLI::App* castle =
      app.add_subcommand("castle", "certified squared-castle enclosure");
  add_elt(castle);
  castle->add_option("--bits", bits, "enclosure width bound 2^-bits");
  CLI::App* minlevel =
      app.add_subcommand("minlevel", "minimal level and witness root");
  add_elt(minlevel);
  CLI::App* hash =
      app.add_subcommand("hash", "equivalence hash (class minimal polynomial)");
  add_elt(hash);
  CLI::App* weight =
      app.add_subcommand("weight", "certified minimal weight search");
  add_elt(weight);
  weight->add_option("--max-weight", max_weight, "search bound (default 4)");
  CLI::App* cassels =
      app.add_subcommand("cassels-test", "Cassels family membership");
  add_elt(cassels);

  std::string pair, preset, out, exact_threshold = "5.01";
  unsigned jobs = 1;
  double float_threshold = 5.1;
  bool extended = false;
  CLI::App* exhaust = app.add_subcommand(
      "exhaust", "certified exhaustive search over sums of roots of unity");
  exhaust->fallthrough();
  exhaust->add_option("--pair", pair, "level,weight job, e.g. 31,6");
  exhaust->add_option("--preset", preset, "named job from the preset table");
  exhaust->add_option("--jobs", jobs, "worker threads (default 1)");
  exhaust->add_option("--out", out, "write JSONL here instead of stdout");
  exhaust->add_option("--float-threshold", float_threshold,
                      "float sieve cut (default 5.1)");
  exhaust->add_option("--exact-threshold", exact_threshold,
                      "exact survivor bound (default 5.01)");
  exhaust->add_flag("--extended", extended,
                    "allow presets marked as extended runs");

  std::string lemma;
  u64 dp = 0;
  unsigned dx = 0;
  bool witness = false;
  CLI::App* diffset = app.add_subcommand(
      "diffset", "difference-set verifiers over Z/p and Z/p^2");
  diffset->fallthrough();
  diffset->add_option("--lemma", lemma, "singleton|modp2|graph")->required();
  diffset->add_option("--p", dp, "prime modulus")->required();
  diffset->add_option("--x", dx, "subset size X")->required();
  diffset->add_flag("--witness", witness, "print the first counterexample");

  u64 slevel = 0, sprime = 0;
  int castle_exponent = -1;
  bool self_conjugate = false;
  CLI::App* splitting =
      app.add_subcommand("splitting", "prime splitting profile in Q(zeta_N)");
  splitting->fallthrough();
  splitting->add_option("--level", slevel, "cyclotomic level N")->required();
  splitting->add_option("--prime", sprime, "rational prime p")->required();
  splitting->add_option("--castle-exponent", castle_exponent,
                        "box for castle p^m (omit for profile only)");
  splitting->add_flag("--self-conjugate", self_conjugate,
                      "use the symmetric box variant");

  std::string table;
  CLI::App* verify = app.add_subcommand(
      "verify-tables", "recompute the embedded fixture tables from scratch");
  verify->fallthrough();
  verify->add_option("--table", table, "1|2|3|4|families (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints the message or the help text
    return code == 0 ? 0 : 2;
  }

  try {
    if (height->parsed()) return cmd_height(elt, level);
    if (castle->parsed()) return cmd_castle(elt, level, bits);
    if (minlevel->parsed()) return cmd_minlevel(elt, level);
    if (hash->parsed()) return cmd_hash(elt, level);
    if (weight->parsed()) return cmd_weight(elt, level, max_weight);
    if (cassels->parsed()) return cmd_cassels_test(elt, level);
    if (exhaust->parsed())
      return cmd_exhaust(pair, preset, jobs, out, float_threshold,
                         exact_threshold, extended);
    if (diffset->parsed()) return cmd_diffset(lemma, dp, dx, witness);
    if (splitting->parsed())
      return cmd_splitting(slevel, sprime, castle_exponent, self_conjugate);
    if (verify->parsed()) return cmd_verify_tables(table, as_json);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
