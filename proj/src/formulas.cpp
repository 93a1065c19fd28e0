#include "peblab/formulas.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>
#include <unordered_map>

namespace peblab {

CnfFormula pebbling_contradiction(const Dag& g) {
  std::vector<Var> var(g.size());
  for (Vertex v = 0; v < g.size(); ++v) var[v] = Var::named(g.name(v));
  std::vector<Clause> clauses;
  for (Vertex v = 0; v < g.size(); ++v) {
    std::vector<Lit> lits;
    for (Vertex u : g.preds(v)) lits.push_back(Lit::neg(var[u]));
    lits.push_back(Lit::pos(var[v]));
    clauses.emplace_back(std::move(lits));
  }
  clauses.push_back(Clause{Lit::neg(var[g.sink()])});
  return CnfFormula(std::move(clauses));
}

CnfFormula substitute(const CnfFormula& f, const Substitution& s) {
  if (s.is_identity()) return f;
  std::vector<Clause> out;
  for (const auto& c : f) {
    // cross product, one factor per literal
    std::vector<std::vector<Lit>> partial{{}};
    for (Lit l : c) {
      std::vector<std::vector<Lit>> next;
      for (const auto& p : partial)
        for (const auto& piece : s.clauses_for(l)) {
          auto q = p;
          q.insert(q.end(), piece.begin(), piece.end());
          next.push_back(std::move(q));
        }
      partial = std::move(next);
    }
    for (auto& lits : partial)
      if (auto clause = Clause::make(std::move(lits))) out.push_back(std::move(*clause));
  }
  return CnfFormula(std::move(out));
}

CnfFormula substitute(const CnfFormula& f, const BooleanFunction& fn) { return substitute(f, Substitution(fn)); }

CnfFormula extended_3cnf(const CnfFormula& f) {
  std::string prefix = "y";
  auto vars = f.variables();
  auto clashes = [&] {
    return std::any_of(vars.begin(), vars.end(), [&](Var v) { return v.name().rfind(prefix, 0) == 0; });
  };
  while (clashes()) prefix = "_" + prefix;

  std::vector<Clause> out;
  std::size_t wide = 0;
  for (const auto& c : f) {
    if (c.width() <= 3) {
      out.push_back(c);
      continue;
    }
    ++wide;
    auto aux = [&](std::size_t i) { return Var::named(prefix + std::to_string(wide) + "_" + std::to_string(i)); };
    std::vector<Lit> lits(c.begin(), c.end());
    std::sort(lits.begin(), lits.end(), canonical_less);
    const std::size_t m = lits.size();
    out.push_back(Clause{Lit::neg(aux(0))});
    for (std::size_t i = 1; i <= m; ++i) out.push_back(Clause{Lit::pos(aux(i - 1)), lits[i - 1], Lit::neg(aux(i))});
    out.push_back(Clause{Lit::pos(aux(m))});
  }
  return CnfFormula(std::move(out));
}

bool is_weight_constrained(const CnfFormula& f) {
  for (const auto& c : f) {
    if (c.width() < 4) continue;
    auto lits = c.lits();
    for (std::size_t i = 0; i < lits.size(); ++i)
      for (std::size_t j = i + 1; j < lits.size(); ++j)
        if (!f.contains(Clause{~lits[i], ~lits[j]})) return false;
  }
  return true;
}

bool evaluate(const Clause& c, const Assignment& a) {
  for (Lit l : c)
    for (const auto& [v, value] : a)
      if (v == l.var() && value == l.positive()) return true;
  return false;
}

bool evaluate(const CnfFormula& f, const Assignment& a) {
  return std::all_of(f.begin(), f.end(), [&](const Clause& c) { return evaluate(c, a); });
}

namespace {

// DPLL with unit propagation, branching on a variable of a shortest open
// clause. Decides satisfiability only; the caller fixes a prefix.
class Dpll {
 public:
  Dpll(std::vector<std::vector<std::pair<std::size_t, bool>>> clauses, std::size_t nvars, std::size_t budget)
      : clauses_(std::move(clauses)), value_(nvars, -1), budget_(budget) {}

  // Values already fixed in `value` stay fixed. On success `value` is a model.
  bool solve(std::vector<int>& value) {
    value_ = value;
    trail_.clear();
    if (!search()) return false;
    value = value_;
    return true;
  }

 private:
  bool propagate() {
    for (bool changed = true; changed;) {
      changed = false;
      for (const auto& row : clauses_) {
        std::size_t open = 0, last = 0;
        bool pos_last = false, sat = false;
        for (auto [j, pos] : row) {
          if (value_[j] < 0) {
            ++open;
            last = j;
            pos_last = pos;
          } else if ((value_[j] == 1) == pos) {
            sat = true;
            break;
          }
        }
        if (sat) continue;
        if (open == 0) return false;
        if (open == 1) {
          value_[last] = pos_last ? 1 : 0;
          trail_.push_back(last);
          changed = true;
        }
      }
    }
    return true;
  }

  bool search() {
    if (++nodes_ > budget_) throw BudgetExceeded("brute-force SAT search", nodes_);
    const std::size_t mark = trail_.size();
    auto undo = [&] {
      for (std::size_t k = mark; k < trail_.size(); ++k) value_[trail_[k]] = -1;
      trail_.resize(mark);
    };
    if (!propagate()) {
      undo();
      return false;
    }
    const std::vector<std::pair<std::size_t, bool>>* best = nullptr;
    std::size_t best_open = 0;
    for (const auto& row : clauses_) {
      std::size_t open = 0;
      bool sat = false;
      for (auto [j, pos] : row) {
        if (value_[j] < 0) ++open;
        else if ((value_[j] == 1) == pos) sat = true;
      }
      if (!sat && (!best || open < best_open)) {
        best = &row;
        best_open = open;
      }
    }
    if (!best) return true;
    std::size_t var = 0;
    bool first = false;
    for (auto [j, pos] : *best)
      if (value_[j] < 0) {
        var = j;
        first = pos;
        break;
      }
    for (bool choice : {first, !first}) {
      value_[var] = choice ? 1 : 0;
      trail_.push_back(var);
      if (search()) return true;
      value_[var] = -1;
      trail_.pop_back();
    }
    undo();
    return false;
  }

  std::vector<std::vector<std::pair<std::size_t, bool>>> clauses_;
  std::vector<int> value_;
  std::vector<std::size_t> trail_;
  std::size_t nodes_ = 0;
  std::size_t budget_;
};

}  // namespace

SatResult brute_force_sat(const CnfFormula& f, std::size_t max_vars) {
  const auto vars = f.variables();
  if (vars.size() > max_vars)
    throw BudgetExceeded("brute-force SAT on " + std::to_string(vars.size()) + " variables", vars.size());
  std::unordered_map<Var, std::size_t> index;
  for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = i;
  std::vector<std::vector<std::pair<std::size_t, bool>>> clauses;
  for (const auto& c : f) {
    if (c.empty()) return {};
    auto& row = clauses.emplace_back();
    for (Lit l : c) row.emplace_back(index[l.var()], l.positive());
  }
  Dpll solver(std::move(clauses), vars.size(), default_budget());
  std::vector<int> model(vars.size(), -1);
  if (!solver.solve(model)) return {};
  // Fix variables in name order to the smallest value that keeps a model.
  std::vector<int> prefix(vars.size(), -1);
  for (std::size_t k = 0; k < vars.size(); ++k) {
    prefix[k] = 0;
    if (model[k] != 0) {
      auto trial = prefix;
      if (solver.solve(trial)) model = trial;
      else prefix[k] = 1;
    }
    prefix[k] = model[k] == 0 ? 0 : 1;
  }
  SatResult r{true, {}};
  for (std::size_t k = 0; k < vars.size(); ++k) r.model.emplace_back(vars[k], model[k] == 1);
  return r;
}

bool is_minimally_unsat(const CnfFormula& f, std::size_t max_vars) {
  if (brute_force_sat(f, max_vars).satisfiable) return false;
  for (const auto& c : f)
    if (!brute_force_sat(f.without(c), max_vars).satisfiable) return false;
  return true;
}

std::string to_dimacs(const CnfFormula& f) {
  const auto vars = f.variables();
  std::unordered_map<Var, long> number;
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    number[vars[i]] = static_cast<long>(i + 1);
    out += "c var " + std::to_string(i + 1) + " " + vars[i].name() + "\n";
  }
  std::vector<std::vector<long>> rows;
  for (const auto& c : f) {
    std::vector<long> row;
    for (Lit l : c) row.push_back(l.positive() ? number[l.var()] : -number[l.var()]);
    std::sort(row.begin(), row.end(), [](long a, long b) { return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a > b; });
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  out += "p cnf " + std::to_string(vars.size()) + " " + std::to_string(rows.size()) + "\n";
  for (const auto& row : rows) {
    for (long x : row) out += std::to_string(x) + " ";
    out += "0\n";
  }
  return out;
}

CnfFormula from_dimacs(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::map<long, std::string> names;
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  long declared_vars = 0, declared_clauses = 0;
  std::vector<Clause> clauses;
  std::vector<long> pending;
  auto var_of = [&](long n) {
    auto it = names.find(n);
    return Var::named(it != names.end() ? it->second : "x" + std::to_string(n));
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;
    if (first == "c") {
      std::string tag, name;
      long n = 0;
      if (tokens >> tag && tag == "var") {
        if (!(tokens >> n >> name) || n <= 0) throw ParseError(lineno, "malformed variable comment");
        names[n] = name;
      }
      continue;
    }
    if (first == "p") {
      std::string fmt;
      if (header || !(tokens >> fmt >> declared_vars >> declared_clauses) || fmt != "cnf" || declared_vars < 0 ||
          declared_clauses < 0)
        throw ParseError(lineno, "malformed or repeated 'p cnf' header");
      header = true;
      continue;
    }
    if (!header) throw ParseError(lineno, "clause before 'p cnf' header");
    std::istringstream nums(line);
    std::string tok;
    while (nums >> tok) {
      long x = 0;
      std::size_t pos = 0;
      try {
        x = std::stol(tok, &pos);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != tok.size()) throw ParseError(lineno, "bad literal '" + tok + "'");
      if (std::abs(x) > declared_vars) throw ParseError(lineno, "literal " + tok + " exceeds declared variable count");
      if (x == 0) {
        std::vector<Lit> lits;
        for (long y : pending) lits.emplace_back(var_of(std::abs(y)), y > 0);
        auto c = Clause::make(std::move(lits));
        if (!c) throw ParseError(lineno, "tautological clause");
        clauses.push_back(std::move(*c));
        pending.clear();
      } else {
        pending.push_back(x);
      }
    }
  }
  if (!header) throw ParseError(lineno, "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(lineno, "last clause is not terminated by 0");
  if (static_cast<long>(clauses.size()) != declared_clauses)
    throw ParseError(lineno, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                 std::to_string(clauses.size()));
  return CnfFormula(std::move(clauses));
}

}  // namespace peblab
