#include "doctest.h"
#include "peblab/formulas.hpp"
#include "peblab/projections.hpp"

using namespace peblab;

namespace {

Clause C(const char* text) { return Clause::parse(text); }

const Substitution& xor2() {
  static const Substitution f = Substitution::parse("xor:2");
  return f;
}

Configuration block(const Substitution& f, const char* lit) { return f.clauses_for(Lit::parse(lit)); }

Configuration join(Configuration a, const Configuration& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::vector<Configuration> samples(std::uint64_t seed, std::size_t n, const Substitution& f) {
  std::mt19937_64 rng(seed);
  std::vector<Configuration> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_configuration(rng, f, 8, 4));
  return out;
}

}  // namespace

TEST_CASE("precise implication") {
  const auto x = block(xor2(), "x");
  CHECK(x.size() == 2);
  CHECK(precisely_implies(x, C("x"), xor2()));
  CHECK_FALSE(precisely_implies(x, C("x y"), xor2()));
  CHECK_FALSE(precisely_implies(x, C("-x"), xor2()));

  const auto four = substitute(CnfFormula{C("x -y")}, xor2()).clauses();
  CHECK(four.size() == 4);
  CHECK(precisely_implies(four, C("x -y"), xor2()));
  CHECK_FALSE(precisely_implies(four, C("x"), xor2()));
}

TEST_CASE("projection examples") {
  CHECK(project({}, xor2()).empty());
  CHECK(project(block(xor2(), "x"), xor2()) == ProjectedClauseSet{C("x")});
  const auto four = substitute(CnfFormula{C("x -y")}, xor2()).clauses();
  CHECK(project(four, xor2()) == ProjectedClauseSet{C("x -y")});

  // contradictory clauses project to the empty clause
  CHECK(project(join(block(xor2(), "x"), block(xor2(), "-x")), xor2()) == ProjectedClauseSet{Clause{}});

  const auto or2 = Substitution::parse("or:2");
  Configuration board{C("x#1 x#2"), C("-v#1 -w#1 y#1 y#2"), C("-v#1 -w#2 y#1 y#2"), C("-v#2 -w#1 y#1 y#2"),
                      C("-v#2 -w#2 y#1 y#2")};
  const auto p = project(board, or2);
  CHECK(std::count(p.begin(), p.end(), C("x")) == 1);
  CHECK(std::count(p.begin(), p.end(), C("-v -w y")) == 1);
  CHECK(p.size() == 2);

  // the identity substitution projects to prime implicates
  CHECK(project({C("a b"), C("-b")}, Substitution::identity()) == ProjectedClauseSet{C("a"), C("-b")});
}

TEST_CASE("local projection") {
  CHECK(local_project({}, xor2()).empty());
  const auto both = join(block(xor2(), "x"), block(xor2(), "y"));
  const auto lp = local_project(both, xor2());
  CHECK(derivable_by_weakening(lp, C("x")));
  CHECK(std::count(lp.begin(), lp.end(), C("x")) == 1);
  CHECK(std::count(lp.begin(), lp.end(), C("y")) == 1);
  for (const auto& d : samples(7, 40, xor2())) {
    const auto l = local_project(d, xor2());
    for (const auto& c : project(d, xor2())) CHECK(derivable_by_weakening(l, c));
    for (const auto& c : l)
      CHECK(std::none_of(l.begin(), l.end(), [&](const Clause& o) { return o != c && o.subset_of(c); }));
  }
  Configuration big;
  for (int i = 0; i < 13; ++i) big.push_back(Clause{Lit::pos(Var::named("q" + std::to_string(i) + "#1"))});
  CHECK_THROWS_AS(local_project(big, xor2()), BudgetExceeded);
}

TEST_CASE("unsubstitute") {
  const auto peb = pebbling_contradiction(build_pyramid(2));
  for (auto fn : {"or:2", "xor:2", "thr:4:2", "none"}) {
    auto f = Substitution::parse(fn);
    CHECK(unsubstitute(substitute(peb, f), f) == peb);
  }
  CHECK_THROWS_AS(unsubstitute(CnfFormula{C("x#1")}, xor2()), Error);
}

TEST_CASE("projection axioms, xor") {
  std::mt19937_64 rng(2024);
  auto report = projection_axiom_suite(xor2(), samples(11, 60, xor2()), rng);
  CHECK(report.checks > 300);
  CHECK(report.ok());
  CHECK(violations_jsonl(report).empty());
}

TEST_CASE("projection axioms, other functions") {
  for (auto fn : {"or:2", "thr:3:2", "none"}) {
    auto f = Substitution::parse(fn);
    std::mt19937_64 rng(5);
    auto report = projection_axiom_suite(f, samples(3, 25, f), rng);
    INFO(fn << "\n" << violations_jsonl(report));
    CHECK(report.ok());
  }
}

TEST_CASE("space-respecting check") {
  auto single = space_respecting_check(xor2(), {block(xor2(), "x")});
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0].projected_vars == 1);
  CHECK(single.rows[0].clauses == 2);
  CHECK(single.asserted);

  const auto many = samples(99, 60, xor2());
  auto r = space_respecting_check(xor2(), many);
  CHECK(r.ok());
  CHECK(r.max_ratio <= 1.0);
  CHECK(violations_jsonl(r, many).empty());
  const auto csv = space_report_csv(r);
  CHECK(csv.rfind("id,clauses,projected_vars,within_bound\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 61);

  // or is authoritarian: a single clause x#1 v x#2 ... projects to several variables
  auto or2 = Substitution::parse("or:2");
  Configuration wide{C("a#1 b#1 c#1")};
  auto o = space_respecting_check(or2, {wide});
  CHECK_FALSE(o.asserted);
  CHECK(o.rows[0].projected_vars == 3);
  CHECK_FALSE(o.rows[0].within_bound);
  CHECK(o.ok());
  CHECK(violations_jsonl(o, {wide}).find("\"projected_vars\":3") != std::string::npos);
}

TEST_CASE("extraction round trip") {
  ProofBuilder b(CnfFormula{C("x"), C("-x")});
  b.download(C("x"));
  b.download(C("-x"));
  b.resolve(C("x"), C("-x"), Var::named("x"));
  const auto pi = b.finish();
  for (bool local : {false, true}) {
    auto lifted = lift_refutation(pi, xor2()).refutation;
    auto in = check_refutation(lifted);
    auto out = extract_refutation(lifted, xor2(), local);
    CHECK(out.refutation.target == pi.target);
    auto m = check_refutation(out.refutation);
    CHECK(m.downloads <= in.downloads);
    CHECK(m.variable_space <= (local ? out.projected_var_bound : out.union_var_bound));
  }

  for (auto g : {build_path(3), build_path(5), build_pyramid(2)}) {
    for (auto fn : {"xor:2", "or:2"}) {
      auto f = Substitution::parse(fn);
      auto lifted = lift_refutation(constant_space_refutation(g), f).refutation;
      auto in = check_refutation(lifted);
      auto out = extract_refutation(lifted, f, false);
      CHECK(out.refutation.target == pebbling_contradiction(g));
      auto m = check_refutation(out.refutation);
      CHECK(m.downloads <= in.downloads);
      CHECK(m.variable_space <= out.union_var_bound);
    }
  }

  Dag pyr = build_pyramid(2);
  auto compiled = pebbling_to_refutation(pyr, greedy_black_strategy(pyr), xor2()).refutation;
  auto out = extract_refutation(compiled, xor2(), false);
  CHECK(check_refutation(out.refutation).downloads <= check_refutation(compiled).downloads);
}

TEST_CASE("extraction with local projections") {
  auto or2 = Substitution::parse("or:2");
  Dag g = build_path(3);
  auto lifted = lift_refutation(constant_space_refutation(g), or2).refutation;
  auto out = extract_refutation(lifted, or2, true);
  auto m = check_refutation(out.refutation);
  CHECK(m.downloads <= check_refutation(lifted).downloads);
  CHECK(m.variable_space <= out.projected_var_bound);
}
