#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "peblab/boolfunc.hpp"
#include "peblab/clause.hpp"
#include "peblab/dag.hpp"
#include "peblab/pebbling.hpp"

namespace peblab {

class PivotAbsent : public Error {
 public:
  using Error::Error;
};

class TrivialResolvent : public Error {
 public:
  using Error::Error;
};

// Resolves c1 (containing pivot) with c2 (containing ~pivot).
Clause resolve(const Clause& c1, const Clause& c2, Var pivot);

// A conjunction of literals, sorted by code, never containing x and ~x.
using Term = std::vector<Lit>;

// A disjunction of terms. A clause is the special case of unit terms only.
class KDnfLine {
 public:
  KDnfLine() = default;
  explicit KDnfLine(std::vector<Term> terms);
  static KDnfLine of(const Clause& c);
  // Space-separated terms; a multi-literal term is written "(a&-b)".
  static KDnfLine parse(std::string_view text);

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  bool contains(const Term& t) const;
  bool is_clause() const;
  // Unit-term lines only.
  Clause as_clause() const;
  std::size_t literal_count() const;
  std::size_t max_term() const;
  std::vector<Var> vars() const;
  std::string str() const;

  friend bool operator==(const KDnfLine&, const KDnfLine&) = default;
  friend auto operator<=>(const KDnfLine&, const KDnfLine&) = default;

 private:
  std::vector<Term> terms_;
};

enum class ProofSystem { Resolution, KDnf };
enum class StepKind { Download, Infer, Erase };
enum class Rule { None, Resolution, Weakening, Cut, AndIntro, AndElim };

// Premises are stored by content: configurations are sets of lines.
struct ProofStep {
  StepKind kind = StepKind::Download;
  Rule rule = Rule::None;
  KDnfLine line;
  std::vector<KDnfLine> premises;
  std::optional<Var> pivot;

  static ProofStep download(const Clause& c);
  static ProofStep resolution(const Clause& result, const Clause& a, const Clause& b, Var pivot);
  static ProofStep weakening(const Clause& result, const Clause& from);
  static ProofStep erase(const Clause& c);

  friend bool operator==(const ProofStep&, const ProofStep&) = default;
};

struct Refutation {
  CnfFormula target;
  std::vector<ProofStep> steps;
  ProofSystem system = ProofSystem::Resolution;
  unsigned k = 1;

  friend bool operator==(const Refutation&, const Refutation&) = default;
};

struct Measures {
  std::size_t length = 0;  // downloads + inferences
  std::size_t downloads = 0;
  std::size_t inferences = 0;
  std::size_t width = 0;  // widest line, in literals
  std::size_t clause_space = 0;
  std::size_t variable_space = 0;
  std::size_t total_space = 0;
  std::size_t formula_space = 0;  // lines per configuration, k-DNF reading
  std::size_t semantically_checked = 0;  // inferences verified by truth table

  friend bool operator==(const Measures&, const Measures&) = default;
};

class IllegalStep : public Error {
 public:
  IllegalStep(std::size_t index, const std::string& reason)
      : Error("step " + std::to_string(index) + ": " + reason), index_(index), reason_(reason) {}
  // 1-based.
  std::size_t index() const { return index_; }
  const std::string& reason() const { return reason_; }

 private:
  std::size_t index_;
  std::string reason_;
};

class MissingBottom : public Error {
 public:
  using Error::Error;
};

struct CheckOptions {
  // Verify each inference by truth table when it mentions at most this many
  // variables. Zero disables the check.
  std::size_t semantic_vars = 20;
};

Measures check_refutation(const Refutation& r, CheckOptions options = {});

// D_0, D_1, ..., D_tau without legality checks.
std::vector<std::set<KDnfLine>> replay_configurations(const Refutation& r);
// Measures computed from scratch on each replayed configuration.
Measures measures_from_configurations(const Refutation& r);

// Premises entail the conclusion, by truth table. Requires at most 24 variables.
bool entails(const std::vector<KDnfLine>& premises, const KDnfLine& conclusion);

// Header "proof resolution" or "proof kdnf <k>", then one step per line:
//   d <line>            r <clause> <- i j pivot v     w <line> <- i
//   cut <line> <- i j   andi <line> <- i j            ande <line> <- i
//   e i
// Ids are 1-based step ordinals and must name a line currently held.
// Lines starting with '#' are comments. The target formula is supplied separately.
Refutation parse_proof_trace(const CnfFormula& target, std::string_view text);
std::string write_proof_trace(const Refutation& r);

// Incremental construction of a resolution refutation.
class ProofBuilder {
 public:
  explicit ProofBuilder(CnfFormula target, std::set<Clause> initial = {});

  const CnfFormula& target() const { return target_; }
  const std::set<Clause>& memory() const { return memory_; }
  bool has(const Clause& c) const { return memory_.count(c) != 0; }
  std::size_t peak() const { return peak_; }
  const std::vector<ProofStep>& steps() const { return steps_; }

  void download(const Clause& c);
  Clause resolve(const Clause& a, const Clause& b, Var pivot);
  void weaken(const Clause& from, const Clause& to);
  void erase(const Clause& c);
  // Replays a step produced elsewhere, with the same checks.
  void apply(const ProofStep& step);

  Refutation finish() const;

 private:
  void require(const Clause& c) const;
  void push(ProofStep step);

  CnfFormula target_;
  std::set<Clause> memory_;
  std::vector<ProofStep> steps_;
  std::size_t peak_ = 0;
};

class SaturationFailure : public Error {
 public:
  using Error::Error;
};

struct SaturationOptions {
  std::size_t variable_cap = 16;
  std::size_t max_width = std::numeric_limits<std::size_t>::max();
  std::size_t budget = default_budget();
};

// Resolution closure with subsumption. Every clause ever produced keeps its
// derivation so an implied clause can be spliced into a host proof.
class Saturation {
 public:
  explicit Saturation(const std::vector<Clause>& premises, SaturationOptions options = {});

  // The subsumption-minimal closure, sorted.
  std::vector<Clause> clauses() const;
  bool refuted() const;
  // Some resolvent was dropped for exceeding max_width.
  bool truncated() const { return truncated_; }
  // Narrowest closure clause contained in c.
  std::optional<Clause> witness(const Clause& c) const;
  bool implies(const Clause& c) const { return witness(c).has_value(); }

  // Emits a derivation of `target` (closure clause, then weakening if needed).
  // Premise leaves must be held by `builder` or be axioms of its target, which
  // are then downloaded and erased after use. Intermediate clauses are erased.
  void derive(ProofBuilder& builder, const Clause& target) const;

 private:
  struct Node {
    Clause clause;
    int left = -1, right = -1;
    Var pivot;
  };
  std::vector<Node> nodes_;
  std::map<Clause, int> index_;
  std::vector<int> active_;
  bool truncated_ = false;
};

// Saturation with the given variable cap and default budget.
Saturation saturate(const std::vector<Clause>& premises, std::size_t variable_cap = 16);

struct CompileConstants {
  std::size_t block_size = 0;           // max |Cl[f(v)]|
  std::size_t placement_length = 0;     // max steps counted per placement
  std::size_t placement_workspace = 0;  // extra clauses held during a placement
  std::size_t sink_length = 0;
  std::size_t sink_workspace = 0;
  std::size_t k_length = 0;  // length <= time * k_length
  std::size_t k_space = 0;   // clause space <= space * k_space
};

struct CompiledRefutation {
  Refutation refutation;
  CompileConstants constants;
};

class IncompletePebbling : public Error {
 public:
  using Error::Error;
};

// Black pebbling in time tau and space s to a refutation of Peb_G[f] in
// length <= tau * k_length and clause space <= s * k_space.
CompiledRefutation pebbling_to_refutation(const Dag& g, const BwPebbling& p, const Substitution& f);
// Constants for every indegree up to max_indegree, independent of any graph.
CompileConstants compile_constants(const Substitution& f, std::size_t max_indegree);

// Expands the topologically latest vertex of the current all-negative clause.
Refutation constant_space_refutation(const Dag& g);

struct LiftedRefutation {
  Refutation refutation;
  double c = 0;  // observed: length(out) = length(in) * 2^(c * d * width(in))
};

LiftedRefutation lift_refutation(const Refutation& r, const Substitution& f);

// Smallest w <= cap whose width-w resolution closure contains the empty
// clause, or nullopt.
std::optional<std::size_t> min_width(const CnfFormula& f, std::size_t cap, std::size_t budget = default_budget());

// Exact minimal clause space by exhaustive search, or nullopt above cap.
std::optional<std::size_t> min_clause_space(const CnfFormula& f, std::size_t cap, std::size_t budget = default_budget());

// A 2-DNF refutation of Peb over the 2-vertex path substituted with xor of
// arity 2, using k-cut, and-introduction and and-elimination.
Refutation handcrafted_kdnf_refutation();

}  // namespace peblab
