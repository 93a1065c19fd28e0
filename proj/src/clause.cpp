#include "peblab/clause.hpp"

#include <algorithm>
#include <sstream>

namespace peblab {
namespace {

// Sorts, dedups and reports whether the literal list is a tautology.
bool normalize(std::vector<Lit>& lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i].var() == lits[i - 1].var()) return false;
  return true;
}

}  // namespace

Clause::Clause(std::initializer_list<Lit> lits) : Clause(std::vector<Lit>(lits)) {}

Clause::Clause(std::vector<Lit> lits) : lits_(std::move(lits)) {
  if (!normalize(lits_)) throw TrivialClause("clause contains a literal and its negation");
}

std::optional<Clause> Clause::make(std::vector<Lit> lits) {
  if (!normalize(lits)) return std::nullopt;
  Clause c;
  c.lits_ = std::move(lits);
  return c;
}

Clause Clause::parse(std::string_view text) {
  std::vector<Lit> lits;
  std::istringstream in{std::string(text)};
  std::string tok;
  while (in >> tok) lits.push_back(Lit::parse(tok));
  return Clause(std::move(lits));
}

bool Clause::contains(Lit l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

bool Clause::mentions(Var v) const { return contains(Lit::pos(v)) || contains(Lit::neg(v)); }

bool Clause::subset_of(const Clause& other) const {
  return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
}

std::vector<Var> Clause::vars() const {
  std::vector<Var> out;
  out.reserve(lits_.size());
  for (Lit l : lits_) out.push_back(l.var());
  return out;
}

std::string Clause::str() const {
  std::vector<Lit> sorted = lits_;
  std::sort(sorted.begin(), sorted.end(), canonical_less);
  std::string out;
  for (Lit l : sorted) {
    if (!out.empty()) out += ' ';
    out += l.str();
  }
  return out;
}

std::optional<Clause> join(const Clause& a, const Clause& b) {
  std::vector<Lit> lits(a.begin(), a.end());
  lits.insert(lits.end(), b.begin(), b.end());
  return Clause::make(std::move(lits));
}

CnfFormula::CnfFormula(std::vector<Clause> clauses) : clauses_(std::move(clauses)) {
  std::sort(clauses_.begin(), clauses_.end());
  clauses_.erase(std::unique(clauses_.begin(), clauses_.end()), clauses_.end());
}

CnfFormula::CnfFormula(std::initializer_list<Clause> clauses)
    : CnfFormula(std::vector<Clause>(clauses)) {}

CnfFormula CnfFormula::parse(std::string_view text) {
  std::vector<Clause> clauses;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto stop = text.find_first_of(";\n", start);
    if (stop == std::string_view::npos) stop = text.size();
    auto piece = text.substr(start, stop - start);
    if (piece.find_first_not_of(" \t\r") != std::string_view::npos)
      clauses.push_back(Clause::parse(piece));
    start = stop + 1;
  }
  return CnfFormula(std::move(clauses));
}

bool CnfFormula::contains(const Clause& c) const {
  return std::binary_search(clauses_.begin(), clauses_.end(), c);
}

std::size_t CnfFormula::width() const {
  std::size_t w = 0;
  for (const auto& c : clauses_) w = std::max(w, c.width());
  return w;
}

std::vector<Var> CnfFormula::variables() const {
  std::vector<Var> vars;
  for (const auto& c : clauses_)
    for (Lit l : c) vars.push_back(l.var());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  std::sort(vars.begin(), vars.end(), name_less);
  return vars;
}

void CnfFormula::insert(Clause c) {
  auto it = std::lower_bound(clauses_.begin(), clauses_.end(), c);
  if (it == clauses_.end() || *it != c) clauses_.insert(it, std::move(c));
}

CnfFormula CnfFormula::without(const Clause& c) const {
  CnfFormula out = *this;
  auto it = std::lower_bound(out.clauses_.begin(), out.clauses_.end(), c);
  if (it != out.clauses_.end() && *it == c) out.clauses_.erase(it);
  return out;
}

}  // namespace peblab
