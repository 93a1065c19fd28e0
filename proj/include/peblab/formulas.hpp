#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "peblab/boolfunc.hpp"
#include "peblab/clause.hpp"
#include "peblab/dag.hpp"

namespace peblab {

// Source axioms, one implication per non-source vertex and the negated sink.
// Variables are named after the vertices.
CnfFormula pebbling_contradiction(const Dag& g);

// F[f]: each clause C = a1 v ... v ak becomes every disjunction C1 v ... v Ck
// with Ci drawn from the clause set substituted for ai.
CnfFormula substitute(const CnfFormula& f, const Substitution& s);
CnfFormula substitute(const CnfFormula& f, const BooleanFunction& fn);

// Replaces every clause of width > 3 by the chain ~y0, (y{i-1} v ai v ~yi), ym
// over fresh variables private to that clause.
CnfFormula extended_3cnf(const CnfFormula& f);

// Every clause of width >= 4 comes with all clauses ~ai v ~aj over its literals.
bool is_weight_constrained(const CnfFormula& f);

using Assignment = std::vector<std::pair<Var, bool>>;

bool evaluate(const Clause& c, const Assignment& a);
bool evaluate(const CnfFormula& f, const Assignment& a);

struct SatResult {
  bool satisfiable = false;
  Assignment model;  // variables in name order; empty when unsatisfiable
};

// Complete search. The model returned is the lexicographically first one in
// name order, with false before true.
SatResult brute_force_sat(const CnfFormula& f, std::size_t max_vars = 26);

bool is_minimally_unsat(const CnfFormula& f, std::size_t max_vars = 26);

// DIMACS with "c var <n> <name>" comments recording the variable names.
// Variables are numbered in name order.
std::string to_dimacs(const CnfFormula& f);
// Variables without a name comment are called "x<n>".
CnfFormula from_dimacs(std::string_view text);

}  // namespace peblab
