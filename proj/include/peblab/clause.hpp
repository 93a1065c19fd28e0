#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "peblab/error.hpp"
#include "peblab/literal.hpp"

namespace peblab {

class TrivialClause : public Error {
 public:
  using Error::Error;
};

// A nontrivial disjunction of literals, stored sorted by literal code with no
// duplicates. Construction rejects clauses mentioning x and ~x together.
class Clause {
 public:
  Clause() = default;
  Clause(std::initializer_list<Lit> lits);
  explicit Clause(std::vector<Lit> lits);
  // Space-separated signed names, e.g. "-u -v x". Empty text is the empty clause.
  static Clause parse(std::string_view text);
  // Like the constructor but returns nullopt for a tautology.
  static std::optional<Clause> make(std::vector<Lit> lits);

  std::span<const Lit> lits() const { return lits_; }
  std::size_t width() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  bool contains(Lit l) const;
  bool mentions(Var v) const;
  bool subset_of(const Clause& other) const;
  std::vector<Var> vars() const;

  // Canonical text: literals in name order, space separated.
  std::string str() const;

  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }

  friend bool operator==(const Clause&, const Clause&) = default;
  friend auto operator<=>(const Clause&, const Clause&) = default;

 private:
  std::vector<Lit> lits_;
};

// Union of two clauses; nullopt when the union is a tautology.
std::optional<Clause> join(const Clause& a, const Clause& b);

// Sorted-unique set of clauses.
class CnfFormula {
 public:
  CnfFormula() = default;
  explicit CnfFormula(std::vector<Clause> clauses);
  CnfFormula(std::initializer_list<Clause> clauses);
  // One clause per line (or ';'-separated), literal syntax as Clause::parse.
  static CnfFormula parse(std::string_view text);

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  bool contains(const Clause& c) const;
  std::size_t width() const;
  // Variables sorted by name.
  std::vector<Var> variables() const;

  void insert(Clause c);
  CnfFormula without(const Clause& c) const;

  auto begin() const { return clauses_.begin(); }
  auto end() const { return clauses_.end(); }

  friend bool operator==(const CnfFormula&, const CnfFormula&) = default;

 private:
  std::vector<Clause> clauses_;
};

}  // namespace peblab
