#include <fstream>
#include <sstream>

#include "doctest.h"
#include "peblab/formulas.hpp"
#include "peblab/resolution.hpp"

using namespace peblab;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

// The command-line test runs `peblab check` on the same cases.
TEST_CASE("golden proof traces") {
  const std::string dir = std::string(PEBLAB_GOLDEN) + "/check/";
  std::istringstream cases(slurp(dir + "cases.txt"));
  std::size_t seen = 0;
  for (std::string line; std::getline(cases, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream in(line);
    std::string proof, flag, value, graph, fn = "none", formula;
    int code = -1;
    in >> proof >> code;
    while (in >> flag >> value) {
      if (flag == "--formula") formula = value;
      if (flag == "--graph") graph = value;
      if (flag == "--fn") fn = value;
    }
    const CnfFormula target = formula.empty()
                                  ? substitute(pebbling_contradiction(dag_from_spec(graph)), Substitution::parse(fn))
                                  : from_dimacs(slurp(dir + formula));
    bool accepted = true;
    try {
      check_refutation(parse_proof_trace(target, slurp(dir + proof)));
    } catch (const Error&) {
      accepted = false;
    }
    INFO(proof);
    CHECK(accepted == (code == 0));
    ++seen;
  }
  CHECK(seen >= 10);
}

TEST_CASE("bundled 2-DNF trace matches the golden file") {
  const auto r = handcrafted_kdnf_refutation();
  CHECK(write_proof_trace(r) == write_proof_trace(parse_proof_trace(
                                    r.target, slurp(std::string(PEBLAB_GOLDEN) + "/check/kdnf2_ok.proof"))));
}
