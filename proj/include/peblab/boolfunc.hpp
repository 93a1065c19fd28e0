#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "peblab/clause.hpp"
#include "peblab/error.hpp"

namespace peblab {

class ConstantFunction : public Error {
 public:
  using Error::Error;
};

// A clause over positional variables 0..m-1: literal i is present when bit i
// of `mask` is set, and is negative when bit i of `neg` is also set.
struct LocalClause {
  std::uint32_t mask = 0;
  std::uint32_t neg = 0;
  friend bool operator==(const LocalClause&, const LocalClause&) = default;
  friend auto operator<=>(const LocalClause&, const LocalClause&) = default;
};

// Prime implicates of the Boolean function whose models are the set bits of
// `models` (indexed by assignment, bit i of the index = variable i), i.e. the
// maximal subcubes of the complement, read as clauses. Requires m <= 24.
std::vector<LocalClause> prime_implicates(const std::vector<bool>& models, unsigned m);

// Truth table of arity 1..16. Bit a of the table is f(a), where bit i-1 of a
// is the value of x_i.
class BooleanFunction {
 public:
  static constexpr unsigned kMaxArity = 16;

  BooleanFunction(unsigned arity, std::vector<bool> table, std::string name = "");

  static BooleanFunction or_fn(unsigned d);
  static BooleanFunction xor_fn(unsigned d);
  // At least k of d inputs true.
  static BooleanFunction threshold(unsigned d, unsigned k);
  // Majority of n (odd) inputs.
  static BooleanFunction majority(unsigned n);
  // `hex` is the table read as a big-endian hexadecimal number.
  static BooleanFunction from_hex(unsigned arity, std::string_view hex);
  // "or:d", "xor:d", "thr:d:k", "maj:n", "tt:<arity>:<hex>".
  static BooleanFunction parse(std::string_view literal);

  unsigned arity() const { return arity_; }
  bool operator()(std::uint32_t assignment) const { return table_.at(assignment); }
  const std::vector<bool>& table() const { return table_; }
  bool is_constant() const;
  const std::string& name() const { return name_; }

  friend bool operator==(const BooleanFunction& a, const BooleanFunction& b) {
    return a.arity_ == b.arity_ && a.table_ == b.table_;
  }

 private:
  unsigned arity_;
  std::vector<bool> table_;
  std::string name_;
};

enum class Polarity { Positive, Negative };

// The canonical CNF of f(vars) (Positive) or of its negation (Negative): all
// prime implicates, sorted.
std::vector<Clause> canonical_clauses(const BooleanFunction& f, std::span<const Var> vars, Polarity polarity);

bool is_k_nonauthoritarian(const BooleanFunction& f, unsigned k);

// The substitution x -> f(x#1, ..., x#d), or the identity substitution that
// leaves every variable alone.
class Substitution {
 public:
  static Substitution identity();
  explicit Substitution(BooleanFunction f);
  // "none" or "id" for the identity, otherwise BooleanFunction::parse.
  static Substitution parse(std::string_view literal);

  bool is_identity() const { return !f_.has_value(); }
  const BooleanFunction& function() const;
  unsigned arity() const { return f_ ? f_->arity() : 1; }
  std::string name() const;

  // The variables x#1..x#d standing for x (just x for the identity).
  std::vector<Var> block(Var x) const;
  // Base variable of a substituted variable, if it has the x#i shape.
  std::optional<Var> base_of(Var v) const;
  // Clause sets substituted for a literal: Cl[f(x)] for x, Cl[~f(x)] for ~x.
  std::vector<Clause> clauses_for(Lit l) const;
  // Positional prime implicates of f and of ~f.
  const std::vector<LocalClause>& local_clauses(bool positive) const { return positive ? pos_ : neg_; }

 private:
  Substitution() = default;
  std::optional<BooleanFunction> f_;
  std::vector<LocalClause> pos_, neg_;
};

}  // namespace peblab
