// Acceptance suite: one PASS/FAIL line per criterion.
//
// The exit status is 0 when every criterion has its expected status. A
// criterion listed in kExpectedFail is reported FAIL and does not break the
// build; if it ever passes, that is reported as unexpected too.

#include <chrono>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "peblab/formulas.hpp"
#include "peblab/pebbling.hpp"
#include "peblab/projections.hpp"
#include "peblab/resolution.hpp"

using namespace peblab;

namespace {

// Criterion 6: xor lifting needs width 2w+1 on some steps. See README.
const std::set<int> kExpectedFail = {6};

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

struct Named {
  std::string name;
  Dag g;
};

std::vector<Named> corpus() {
  std::vector<Named> out;
  for (std::size_t n = 1; n <= 8; ++n) out.push_back({"path:" + std::to_string(n), build_path(n)});
  for (std::size_t h = 0; h <= 3; ++h) out.push_back({"tree:" + std::to_string(h), build_binary_tree(h)});
  for (std::size_t h = 1; h <= 3; ++h) out.push_back({"pyramid:" + std::to_string(h), build_pyramid(h)});
  return out;
}

const std::vector<std::string> kFunctions = {"none", "or:2", "xor:2"};

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(PEBLAB_TEST_DATA) + "/" + name);
  if (!in) throw Error("missing data file " + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Clause> clauses(std::initializer_list<const char*> texts) {
  std::vector<Clause> out;
  for (auto t : texts) out.push_back(Clause::parse(t));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Var> vars(std::initializer_list<const char*> names) {
  std::vector<Var> out;
  for (auto n : names) out.push_back(Var::named(n));
  return out;
}

// ---------------------------------------------------------------------------

Outcome c1_figure_formulas() {
  Outcome o;
  const auto peb = pebbling_contradiction(build_pyramid(2));
  o.require(peb == CnfFormula::parse("u; v; w; -u -v x; -v -w y; -x -y z; -z"), "Peb of the pyramid");
  const auto with_or = substitute(peb, BooleanFunction::or_fn(2));
  const auto with_xor = substitute(peb, BooleanFunction::xor_fn(2));
  o.require(with_or.size() == 17 && with_or == CnfFormula::parse(read_data("pyramid2_or2.cnf")), "or substitution");
  o.require(with_xor.size() == 32 && with_xor == CnfFormula::parse(read_data("pyramid2_xor2.cnf")),
            "xor substitution");
  return o;
}

Outcome c2_canonical_sets() {
  Outcome o;
  const auto x2 = vars({"x1", "x2"});
  const auto x4 = vars({"x1", "x2", "x3", "x4"});
  const auto orf = BooleanFunction::or_fn(2);
  const auto xorf = BooleanFunction::xor_fn(2);
  const auto thr = BooleanFunction::threshold(4, 2);
  o.require(canonical_clauses(orf, x2, Polarity::Positive) == clauses({"x1 x2"}), "or");
  o.require(canonical_clauses(orf, x2, Polarity::Negative) == clauses({"-x1", "-x2"}), "not or");
  o.require(canonical_clauses(xorf, x2, Polarity::Positive) == clauses({"x1 x2", "-x1 -x2"}), "xor");
  o.require(canonical_clauses(xorf, x2, Polarity::Negative) == clauses({"x1 -x2", "-x1 x2"}), "not xor");
  o.require(canonical_clauses(thr, x4, Polarity::Positive) == clauses({"x1 x2 x3", "x1 x2 x4", "x1 x3 x4", "x2 x3 x4"}),
            "threshold");
  o.require(canonical_clauses(thr, x4, Polarity::Negative) ==
                clauses({"-x1 -x2", "-x1 -x3", "-x1 -x4", "-x2 -x3", "-x2 -x4", "-x3 -x4"}),
            "not threshold");
  return o;
}

Outcome c3_pebbling_oracle() {
  Outcome o;
  o.require(optimal_black_price(build_path(1)).price == 1, "single vertex");
  for (std::size_t n = 2; n <= 8; ++n)
    o.require(optimal_black_price(build_path(n)).price == 2, "path:" + std::to_string(n));
  o.require(optimal_black_price(build_pyramid(2)).price == 4, "pyramid:2");
  for (const auto& [name, g] : corpus()) {
    const auto black = optimal_black_price(g).price;
    const auto bw = optimal_bw_price(g).price;
    o.require(bw <= black, name + ": bw price above black price");
  }
  return o;
}

// Measured (length, clause space) of the greedy compilation, frozen.
const std::map<std::string, std::pair<std::size_t, std::size_t>> kCompiledPins = {
#include "acceptance_pins.inc"
};

Outcome c4_simulation_chain(bool print_pins) {
  Outcome o;
  for (const auto& [name, g] : corpus()) {
    const auto p = greedy_black_strategy(g);
    const auto cost = validate_bw(g, p, true);
    for (const auto& fn : kFunctions) {
      const auto key = name + " " + fn;
      const auto r = pebbling_to_refutation(g, p, Substitution::parse(fn));
      Measures m;
      try {
        m = check_refutation(r.refutation);
      } catch (const Error& e) {
        o.require(false, key + ": " + e.what());
        continue;
      }
      o.require(m.length <= cost.time * r.constants.k_length, key + ": length above time * K");
      o.require(m.clause_space <= cost.space * r.constants.k_space, key + ": space above space * K");
      if (print_pins) std::cout << "{\"" << key << "\", {" << m.length << ", " << m.clause_space << "}},\n";
      auto pin = kCompiledPins.find(key);
      o.require(pin != kCompiledPins.end() && pin->second == std::make_pair(m.length, m.clause_space),
                key + ": differs from the pinned measures");
    }
  }
  return o;
}

Outcome c5_constant_space() {
  Outcome o;
  std::size_t worst = 0;
  for (const auto& [name, g] : corpus()) {
    const auto m = check_refutation(constant_space_refutation(g));
    worst = std::max(worst, m.clause_space);
    o.require(m.clause_space <= 3, name + ": clause space " + std::to_string(m.clause_space));
    o.require(m.length == 1 + 2 * g.size(), name + ": length not linear");
  }
  o.note("max clause space " + std::to_string(worst));
  return o;
}

Outcome c6_lifting() {
  Outcome o;
  std::size_t runs = 0, over = 0;
  for (const auto& [name, g] : corpus()) {
    const auto r = constant_space_refutation(g);
    const auto in = check_refutation(r);
    for (const auto& fn : {"or:2", "xor:2"}) {
      const auto f = Substitution::parse(fn);
      const auto lifted = lift_refutation(r, f);
      const auto m = check_refutation(lifted.refutation);
      ++runs;
      if (m.width > f.arity() * in.width) {
        ++over;
        o.require(false, name + " " + fn + ": width " + std::to_string(m.width) + " > " +
                             std::to_string(f.arity()) + "*" + std::to_string(in.width));
      }
    }
  }
  o.note(std::to_string(runs) + " lifts accepted, " + std::to_string(over) + " over the width bound");
  return o;
}

Outcome c7_projection_suite() {
  Outcome o;
  const auto f = Substitution::parse("xor:2");
  std::mt19937_64 rng(20240601);
  std::vector<Configuration> samples;
  for (int i = 0; i < 200; ++i) samples.push_back(random_configuration(rng, f, 8, 4));
  const auto report = projection_axiom_suite(f, samples, rng);
  for (const auto& v : report.violations) o.require(false, v.property + " at sample " + std::to_string(v.sample));
  const auto space = space_respecting_check(f, samples);
  o.require(space.asserted, "xor not recognised as non-authoritarian");
  std::size_t within = 0;
  for (const auto& row : space.rows) within += row.within_bound;
  o.require(within == samples.size(), "space bound held on " + std::to_string(within) + "/200");
  o.note(std::to_string(report.checks) + " property checks, max vars/clauses " + std::to_string(space.max_ratio));
  return o;
}

Outcome c8_extraction() {
  Outcome o;
  std::vector<Named> graphs;
  for (std::size_t n = 1; n <= 5; ++n) graphs.push_back({"path:" + std::to_string(n), build_path(n)});
  graphs.push_back({"pyramid:2", build_pyramid(2)});
  for (const auto& [name, g] : graphs) {
    for (const auto& fn : {"or:2", "xor:2"}) {
      const auto f = Substitution::parse(fn);
      std::vector<Refutation> inputs{lift_refutation(constant_space_refutation(g), f).refutation};
      inputs.push_back(pebbling_to_refutation(g, greedy_black_strategy(g), f).refutation);
      for (const auto& r_f : inputs) {
        const auto key = name + " " + fn;
        try {
          const auto in = check_refutation(r_f);
          const auto out = extract_refutation(r_f, f, false);
          o.require(out.refutation.target == pebbling_contradiction(g), key + ": wrong target");
          const auto m = check_refutation(out.refutation);
          o.require(m.downloads <= in.downloads, key + ": more downloads");
          o.require(m.variable_space <= out.union_var_bound, key + ": variable space above the projection bound");
        } catch (const Error& e) {
          o.require(false, key + ": " + e.what());
        }
      }
    }
  }
  return o;
}

Outcome c9_oracle_cross_checks() {
  Outcome o;
  constexpr std::size_t kVars = 40;
  for (const auto& [name, g] : corpus()) {
    const auto peb = pebbling_contradiction(g);
    for (const auto& fn : kFunctions) {
      const auto f = Substitution::parse(fn);
      const auto formula = substitute(peb, f);
      o.require(!brute_force_sat(formula, kVars).satisfiable, name + " " + fn + ": satisfiable");
      const auto sink_block = substitute(CnfFormula{Clause{Lit::neg(Var::named(g.name(g.sink())))}}, f);
      CnfFormula rest = formula;
      for (const auto& c : sink_block) rest = rest.without(c);
      o.require(brute_force_sat(rest, kVars).satisfiable, name + " " + fn + ": unsatisfiable without the sink axioms");
    }
    o.require(is_minimally_unsat(peb, kVars), name + ": not minimally unsatisfiable");
  }
  return o;
}

Outcome c10_width_space() {
  Outcome o;
  std::vector<std::pair<std::string, CnfFormula>> tiny;
  for (std::size_t n = 1; n <= 5; ++n)
    tiny.push_back({"path:" + std::to_string(n), pebbling_contradiction(build_path(n))});
  for (std::size_t h = 0; h <= 2; ++h) {
    tiny.push_back({"tree:" + std::to_string(h), pebbling_contradiction(build_binary_tree(h))});
    tiny.push_back({"pyramid:" + std::to_string(h), pebbling_contradiction(build_pyramid(h))});
  }
  for (std::size_t n = 1; n <= 3; ++n)
    tiny.push_back({"path:" + std::to_string(n) + " or:2",
                    substitute(pebbling_contradiction(build_path(n)), Substitution::parse("or:2"))});
  tiny.push_back({"path:1 xor:2", substitute(pebbling_contradiction(build_path(1)), Substitution::parse("xor:2"))});
  tiny.push_back({"pyramid:1 or:2", substitute(pebbling_contradiction(build_pyramid(1)), Substitution::parse("or:2"))});
  // random unsatisfiable CNFs of width 2 and 3 over 3 variables
  std::mt19937 rng(11);
  for (int made = 0; made < 20;) {
    std::vector<Clause> cls;
    for (int i = 0; i < 8; ++i) {
      std::vector<Lit> lits;
      const std::size_t width = 2 + rng() % 2;
      while (lits.size() < width) {
        Var v = Var::named("r" + std::to_string(rng() % 3));
        if (std::none_of(lits.begin(), lits.end(), [&](Lit l) { return l.var() == v; }))
          lits.emplace_back(v, rng() % 2 == 0);
      }
      cls.emplace_back(lits);
    }
    CnfFormula f(cls);
    if (brute_force_sat(f).satisfiable) continue;
    tiny.push_back({"random:" + std::to_string(made++), f});
  }

  const std::size_t budget = std::min<std::size_t>(default_budget(), 500'000);
  std::size_t both = 0;
  long gap = std::numeric_limits<long>::min();
  for (const auto& [name, f] : tiny) {
    std::optional<std::size_t> w, s;
    try {
      w = min_width(f, 12, budget);
      s = min_clause_space(f, 6, budget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    if (!w || !s) continue;
    ++both;
    gap = std::max(gap, static_cast<long>(*w) - static_cast<long>(*s));
    o.require(*w <= *s + f.width(), name + ": width " + std::to_string(*w) + " > space " + std::to_string(*s) +
                                        " + " + std::to_string(f.width()));
  }
  o.require(both >= 10, "too few instances finished: " + std::to_string(both));
  o.note(std::to_string(both) + "/" + std::to_string(tiny.size()) + " instances, max width - space = " +
         std::to_string(gap));
  return o;
}

Outcome c11_kdnf() {
  Outcome o;
  const auto r = handcrafted_kdnf_refutation();
  try {
    const auto m = check_refutation(r);
    o.require(m.semantically_checked == m.inferences, "not every inference was truth-table checked");
  } catch (const Error& e) {
    o.require(false, std::string("handcrafted trace rejected: ") + e.what());
  }
  std::set<Rule> rules;
  for (const auto& s : r.steps) rules.insert(s.rule);
  o.require(rules.count(Rule::Cut) && rules.count(Rule::AndIntro) && rules.count(Rule::AndElim),
            "trace does not use all three k-DNF rules");
  auto narrow = r;
  narrow.k = 1;
  bool rejected = false;
  try {
    check_refutation(narrow);
  } catch (const IllegalStep&) {
    rejected = true;
  }
  o.require(rejected, "trace with a 2-term accepted at k = 1");

  // a conjunction of three literals in a 2-DNF proof
  const CnfFormula abc = CnfFormula::parse("a; b; c; -a -b -c");
  const char* wide = "proof kdnf 2\nd a\nd b\nandi (a&b) <- 1 2\nd c\nandi (a&b&c) <- 3 4\nd -a -b -c\ncut <- 5 6\n";
  rejected = false;
  try {
    check_refutation(parse_proof_trace(abc, wide));
  } catch (const IllegalStep& e) {
    rejected = e.index() == 5;
  }
  o.require(rejected, "3-literal and-introduction accepted at k = 2");
  return o;
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const bool print_pins = argc > 1 && std::strcmp(argv[1], "--print-pins") == 0;
  if (print_pins) {
    c4_simulation_chain(true);
    return 0;
  }
  const std::vector<Criterion> criteria = {
      {1, "figure-exact formulas", 1, c1_figure_formulas},
      {2, "canonical clause sets", 1, c2_canonical_sets},
      {3, "pebbling oracle", 60, c3_pebbling_oracle},
      {4, "simulation chain", 120, [] { return c4_simulation_chain(false); }},
      {5, "constant-space refutations", 10, c5_constant_space},
      {6, "substitution lemma width bound", 60, c6_lifting},
      {7, "projection suite", 120, c7_projection_suite},
      {8, "extraction round trip", 60, c8_extraction},
      {9, "oracle cross-checks", 60, c9_oracle_cross_checks},
      {10, "width/space relation probe", 300, c10_width_space},
      {11, "k-DNF checker", 10, c11_kdnf},
  };
  // optional arguments select criteria by number
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int unexpected = 0, passed = 0, ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(secs < c.limit_s, "over the time limit");
    passed += o.pass;
    const bool expected_fail = kExpectedFail.count(c.id) != 0;
    if (o.pass == expected_fail) ++unexpected;
    char head[160];
    std::snprintf(head, sizeof head, "%s %2d %-32s %7.2fs%s", o.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                  expected_fail ? (o.pass ? "  (unexpected pass)" : "  (known failure)") : "");
    std::cout << head << "\n";
    const std::size_t shown = std::min<std::size_t>(o.notes.size(), 8);
    for (std::size_t i = 0; i < shown; ++i) std::cout << "        " << o.notes[i] << "\n";
    if (shown < o.notes.size()) std::cout << "        ... " << o.notes.size() - shown << " more\n";
  }
  std::cout << passed << "/" << ran << " criteria pass, " << unexpected << " unexpected\n";
  return unexpected == 0 ? 0 : 1;
}
