#include <fstream>
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "peblab/formulas.hpp"

using namespace peblab;

namespace {

std::string read_data(const std::string& name) {
  std::ifstream in(std::string(PEBLAB_TEST_DATA) + "/" + name);
  REQUIRE(in.good());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<Dag> graphs() {
  std::vector<Dag> out;
  for (std::size_t n = 1; n <= 6; ++n) out.push_back(build_path(n));
  for (std::size_t h = 0; h <= 2; ++h) out.push_back(build_binary_tree(h));
  for (std::size_t h = 0; h <= 2; ++h) out.push_back(build_pyramid(h));
  return out;
}

}  // namespace

TEST_CASE("pebbling contradictions") {
  CHECK(pebbling_contradiction(build_pyramid(2)) ==
        CnfFormula::parse("u; v; w; -u -v x; -v -w y; -x -y z; -z"));
  CHECK(pebbling_contradiction(build_pyramid(0)) == CnfFormula::parse("z; -z"));
  CHECK(pebbling_contradiction(build_path(3)) == CnfFormula::parse("v1; -v1 v2; -v2 v3; -v3"));
  for (const auto& g : graphs()) {
    auto f = pebbling_contradiction(g);
    CHECK(f.size() == g.size() + 1);
    CHECK(f.variables().size() == g.size());
    CHECK(f.width() <= 1 + g.max_indegree());
  }
}

TEST_CASE("substituted pyramid formulas match the reference listings") {
  auto peb = pebbling_contradiction(build_pyramid(2));
  auto with_or = substitute(peb, BooleanFunction::or_fn(2));
  auto with_xor = substitute(peb, BooleanFunction::xor_fn(2));
  CHECK(with_or.size() == 17);
  CHECK(with_xor.size() == 32);
  CHECK(with_or == CnfFormula::parse(read_data("pyramid2_or2.cnf")));
  CHECK(with_xor == CnfFormula::parse(read_data("pyramid2_xor2.cnf")));
}

TEST_CASE("substituting into a single clause") {
  auto f = substitute(CnfFormula::parse("x -y"), BooleanFunction::xor_fn(2));
  CHECK(f == CnfFormula::parse("x#1 x#2 y#1 -y#2; x#1 x#2 -y#1 y#2; -x#1 -x#2 y#1 -y#2; -x#1 -x#2 -y#1 y#2"));
  CHECK(substitute(CnfFormula::parse("x"), Substitution::identity()) == CnfFormula::parse("x"));
}

TEST_CASE("substitution sizes and satisfiability") {
  std::vector<BooleanFunction> fns{BooleanFunction::or_fn(2), BooleanFunction::xor_fn(2),
                                   BooleanFunction::threshold(3, 2)};
  for (const auto& g : graphs()) {
    auto peb = pebbling_contradiction(g);
    auto sat_mutant = peb.without(Clause{Lit::neg(Var::named(g.name(g.sink())))});
    for (const auto& fn : fns) {
      auto sub = substitute(peb, fn);
      CHECK(sub.variables().size() == fn.arity() * peb.variables().size());
      CHECK(static_cast<double>(sub.size()) <
            static_cast<double>(peb.size()) * std::pow(2.0, fn.arity() * peb.width()));
      if (sub.variables().size() <= 22) {
        CHECK_FALSE(brute_force_sat(sub).satisfiable);
        CHECK(brute_force_sat(substitute(sat_mutant, fn)).satisfiable);
      }
    }
  }
}

TEST_CASE("extended 3-CNF") {
  auto narrow = CnfFormula::parse("a b; -a c");
  CHECK(extended_3cnf(narrow) == narrow);
  auto wide = extended_3cnf(CnfFormula::parse("a b c d"));
  CHECK(wide == CnfFormula::parse("-y1_0; y1_0 a -y1_1; y1_1 b -y1_2; y1_2 c -y1_3; y1_3 d -y1_4; y1_4"));
  CHECK(wide.width() <= 3);
  CHECK(brute_force_sat(wide).satisfiable);
  // auxiliary names avoid existing variables
  auto clash = extended_3cnf(CnfFormula::parse("y1_0 b c d"));
  CHECK(clash.variables().size() == 4 + 5);
  auto peb = substitute(pebbling_contradiction(build_pyramid(2)), BooleanFunction::xor_fn(2));
  auto peb3 = extended_3cnf(peb);
  CHECK(peb3.width() <= 3);
  CHECK_FALSE(brute_force_sat(peb3, 200).satisfiable);
}

TEST_CASE("weight-constrained formulas") {
  CHECK(is_weight_constrained(pebbling_contradiction(build_pyramid(2))));
  CHECK_FALSE(is_weight_constrained(CnfFormula::parse("a b c d")));
  CHECK(is_weight_constrained(CnfFormula::parse("a b c d; -a -b; -a -c; -a -d; -b -c; -b -d; -c -d")));
}

TEST_CASE("brute-force SAT") {
  auto r = brute_force_sat(CnfFormula::parse("x"));
  REQUIRE(r.satisfiable);
  CHECK(r.model == Assignment{{Var::named("x"), true}});
  auto peb = pebbling_contradiction(build_pyramid(2));
  CHECK_FALSE(brute_force_sat(peb).satisfiable);
  auto mutant = brute_force_sat(peb.without(Clause::parse("-z")));
  REQUIRE(mutant.satisfiable);
  for (auto [v, value] : mutant.model) CHECK(value);
  // first model in name order, false before true
  auto first = brute_force_sat(CnfFormula::parse("a b; -a c"));
  CHECK(first.model == Assignment{{Var::named("a"), false}, {Var::named("b"), true}, {Var::named("c"), false}});
  CHECK(brute_force_sat(CnfFormula{}).satisfiable);
  CHECK_FALSE(brute_force_sat(CnfFormula{Clause{}}).satisfiable);
  CHECK_THROWS_AS(brute_force_sat(peb, 3), BudgetExceeded);
}

TEST_CASE("brute-force SAT agrees with enumeration on random formulas") {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Clause> cls;
    int m = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < m; ++i) {
      std::vector<Lit> lits;
      for (int v = 0; v < 5; ++v)
        if (rng() % 3 == 0) lits.emplace_back(Var::named("r" + std::to_string(v)), rng() % 2 == 0);
      cls.emplace_back(lits);
    }
    CnfFormula f(cls);
    auto vars = f.variables();
    bool any = false;
    for (std::uint32_t a = 0; a < (1u << vars.size()) && !any; ++a) {
      Assignment asg;
      for (std::size_t i = 0; i < vars.size(); ++i) asg.emplace_back(vars[i], (a >> (vars.size() - 1 - i)) & 1);
      if (evaluate(f, asg)) {
        any = true;
        auto r = brute_force_sat(f);
        CHECK(r.model == asg);
      }
    }
    CHECK(brute_force_sat(f).satisfiable == any);
  }
}

TEST_CASE("minimal unsatisfiability") {
  CHECK(is_minimally_unsat(pebbling_contradiction(build_pyramid(2))));
  CHECK_FALSE(is_minimally_unsat(CnfFormula::parse("x; -x; y")));
  CHECK(is_minimally_unsat(pebbling_contradiction(build_path(4))));
  for (const auto& g : graphs()) CHECK(is_minimally_unsat(pebbling_contradiction(g)));
  CHECK_FALSE(is_minimally_unsat(CnfFormula::parse("x y")));
}

TEST_CASE("DIMACS") {
  auto unit = to_dimacs(CnfFormula::parse("x"));
  CHECK(unit == "c var 1 x\np cnf 1 1\n1 0\n");
  auto peb = pebbling_contradiction(build_pyramid(2));
  CHECK(to_dimacs(peb).find("p cnf 6 7\n") != std::string::npos);
  auto sub = substitute(peb, BooleanFunction::or_fn(2));
  CHECK(from_dimacs(to_dimacs(sub)) == sub);
  CHECK(to_dimacs(from_dimacs(to_dimacs(sub))) == to_dimacs(sub));
  CHECK(from_dimacs("p cnf 2 2\n1 -2 0\n2\n0\n") == CnfFormula::parse("x1 -x2; x2"));

  auto line_of = [](const char* text) -> std::size_t {
    try {
      from_dimacs(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  CHECK(line_of("1 0\n") == 1);
  CHECK(line_of("p cnf 1 1\n2 0\n") == 2);
  CHECK(line_of("p cnf 1 1\n1 x 0\n") == 2);
  CHECK(line_of("p cnf 1 2\n1 0\n") == 2);
  CHECK(line_of("p cnf 1 1\nc ok\n1\n") == 3);
  CHECK(line_of("p cnf 1 1\n1 -1 0\n") == 2);
}
