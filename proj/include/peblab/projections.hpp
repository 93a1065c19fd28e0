#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "peblab/boolfunc.hpp"
#include "peblab/clause.hpp"
#include "peblab/resolution.hpp"

namespace peblab {

// A set of clauses over substituted variables x#1..x#d.
using Configuration = std::vector<Clause>;
// Clauses over base variables, sorted.
using ProjectedClauseSet = std::vector<Clause>;

class InternalContractViolation : public Error {
 public:
  using Error::Error;
};

// d |= OR_{x^nu in c} f^nu(x#1..x#d), and no strict subclause of c has this property.
bool precisely_implies(const Configuration& d, const Clause& c, const Substitution& f);

// Every clause over the base variables mentioned by d that d implies
// precisely: the prime implicates of the set of base assignments that d allows.
ProjectedClauseSet project(const Configuration& d, const Substitution& f);

// Union of project(d') over all subsets d' of d. With `minimize`, clauses
// having a strict subclause in the union are dropped. Requires |d| <= 12.
ProjectedClauseSet local_project(const Configuration& d, const Substitution& f, bool minimize = true);

// Some clause of s is contained in c.
bool derivable_by_weakening(const ProjectedClauseSet& s, const Clause& c);

std::vector<Var> projected_vars(const ProjectedClauseSet& s);

// The formula F with substitute(F, f) == g, read off clause by clause.
CnfFormula unsubstitute(const CnfFormula& g, const Substitution& f);

struct ExtractedRefutation {
  Refutation refutation;
  // max over t of |Vars(C_{t-1} u C_t)|, and max over t of |Vars(C_t)|
  std::size_t union_var_bound = 0;
  std::size_t projected_var_bound = 0;
};

// Replays a resolution refutation of F[f], keeping the projected clause sets
// C_t as the configurations of a resolution refutation of F.
ExtractedRefutation extract_refutation(const Refutation& r_f, const Substitution& f, bool use_local);

// Seeded random configuration over base variables b1..b<max_base>.
Configuration random_configuration(std::mt19937_64& rng, const Substitution& f, std::size_t max_clauses,
                                   std::size_t max_base);

struct ProjectionViolation {
  std::size_t sample = 0;
  std::string property;
  std::string detail;
};

struct AxiomSuiteReport {
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::vector<ProjectionViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Completeness, nontriviality, monotonicity and incremental soundness of
// project and local_project on every sample, with extra configurations
// derived from each sample using `rng`.
AxiomSuiteReport projection_axiom_suite(const Substitution& f, const std::vector<Configuration>& samples,
                                        std::mt19937_64& rng);

struct SpaceRow {
  std::size_t id = 0;
  std::size_t clauses = 0;
  std::size_t projected_vars = 0;
  bool within_bound = false;
};

struct SpaceReport {
  bool asserted = false;  // f is non-authoritarian, so the bound must hold
  std::vector<SpaceRow> rows;
  double max_ratio = 0;
  bool ok() const;
};

// |Vars(local_project(D))| <= |D| for every sample.
SpaceReport space_respecting_check(const Substitution& f, const std::vector<Configuration>& samples);

// CSV with header "id,clauses,projected_vars,within_bound".
std::string space_report_csv(const SpaceReport& r);
// One JSON object per violating row or property failure.
std::string violations_jsonl(const SpaceReport& r, const std::vector<Configuration>& samples);
std::string violations_jsonl(const AxiomSuiteReport& r);

}  // namespace peblab
