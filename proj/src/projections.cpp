#include "peblab/projections.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "peblab/formulas.hpp"

namespace peblab {
namespace {

constexpr unsigned kMaxEnumVars = 24;
constexpr std::size_t kMaxLocalClauses = 12;

Var base_var(const Substitution& f, Var v) {
  auto b = f.base_of(v);
  if (!b) throw Error("variable " + v.name() + " is not a substituted variable");
  return *b;
}

std::vector<Var> sorted_by_name(std::set<Var> vars) {
  std::vector<Var> out(vars.begin(), vars.end());
  std::sort(out.begin(), out.end(), name_less);
  return out;
}

std::set<Var> mentioned_bases(const Configuration& d, const Substitution& f) {
  std::set<Var> out;
  for (const auto& c : d)
    for (Lit l : c) out.insert(base_var(f, l.var()));
  return out;
}

// Bit i of the result is set when base assignment i (bit j = value of
// base[j]) extends to an assignment satisfying d.
std::vector<bool> image_set(const Configuration& d, const std::vector<Var>& base, const Substitution& f) {
  std::vector<Var> vars;
  std::vector<std::vector<unsigned>> positions;  // per base var, its block's bit positions
  for (Var x : base) {
    auto& pos = positions.emplace_back();
    for (Var v : f.block(x)) {
      pos.push_back(static_cast<unsigned>(vars.size()));
      vars.push_back(v);
    }
  }
  std::map<Var, unsigned> bit;
  for (unsigned i = 0; i < vars.size(); ++i) bit[vars[i]] = i;
  if (vars.size() > kMaxEnumVars)
    throw BudgetExceeded("projection over " + std::to_string(vars.size()) + " substituted variables", 0);

  struct Masks {
    std::uint32_t pos = 0, neg = 0;
  };
  std::vector<Masks> clauses;
  for (const auto& c : d) {
    Masks m;
    for (Lit l : c) {
      auto it = bit.find(l.var());
      if (it == bit.end()) throw Error("variable " + l.var().name() + " outside the projected blocks");
      (l.positive() ? m.pos : m.neg) |= 1u << it->second;
    }
    clauses.push_back(m);
  }

  std::vector<bool> image(std::size_t{1} << base.size(), false);
  const std::uint32_t total = 1u << vars.size();
  for (std::uint32_t a = 0; a < total; ++a) {
    bool ok = true;
    for (const auto& m : clauses)
      if (!((a & m.pos) | (~a & m.neg))) {
        ok = false;
        break;
      }
    if (!ok) continue;
    std::size_t beta = 0;
    for (std::size_t j = 0; j < base.size(); ++j) {
      std::uint32_t local = 0;
      for (std::size_t i = 0; i < positions[j].size(); ++i) local |= ((a >> positions[j][i]) & 1u) << i;
      const bool value = f.is_identity() ? local != 0 : f.function()(local);
      if (value) beta |= std::size_t{1} << j;
    }
    image[beta] = true;
  }
  return image;
}

bool satisfies(std::size_t beta, const Clause& c, const std::vector<Var>& base) {
  for (Lit l : c) {
    auto j = static_cast<std::size_t>(std::find(base.begin(), base.end(), l.var()) - base.begin());
    if (((beta >> j) & 1u) == (l.positive() ? 1u : 0u)) return true;
  }
  return false;
}

bool image_implies(const std::vector<bool>& image, const Clause& c, const std::vector<Var>& base) {
  for (std::size_t beta = 0; beta < image.size(); ++beta)
    if (image[beta] && !satisfies(beta, c, base)) return false;
  return true;
}

Clause without(const Clause& c, Lit l) {
  std::vector<Lit> lits;
  for (Lit x : c)
    if (x != l) lits.push_back(x);
  return Clause(std::move(lits));
}

ProjectedClauseSet minimize(std::set<Clause> s) {
  ProjectedClauseSet out;
  for (const auto& c : s)
    if (std::none_of(s.begin(), s.end(), [&](const Clause& o) { return o != c && o.subset_of(c); })) out.push_back(c);
  return out;
}

Configuration as_configuration(const std::set<KDnfLine>& lines) {
  Configuration out;
  for (const auto& l : lines) out.push_back(l.as_clause());
  return out;
}

std::set<Var> vars_of(const ProjectedClauseSet& s) {
  std::set<Var> out;
  for (const auto& c : s)
    for (Lit l : c) out.insert(l.var());
  return out;
}

// Moves memory from C_{t-1} to C_t. The new clauses must follow by weakening
// from C_{t-1}, or, when `axiom` is given, by the download case of the
// lemma: weakening from C_{t-1} u {A}, or resolving A against ~a v C.
class Backbone {
 public:
  explicit Backbone(ProofBuilder& b) : b_(b) {}

  void step(const std::set<Clause>& next, const std::optional<Clause>& axiom, std::size_t t) {
    const std::set<Clause> prev = b_.memory();
    std::vector<Clause> fresh;
    for (const auto& c : next)
      if (!prev.count(c)) fresh.push_back(c);
    const bool all_weak =
        std::all_of(fresh.begin(), fresh.end(), [&](const Clause& c) { return source(prev, c).has_value(); });
    if (all_weak || !axiom) {
      if (!all_weak) throw InternalContractViolation(at(t) + "a new projected clause is not a weakening");
      for (const auto& c : prev)
        if (std::none_of(next.begin(), next.end(), [&](const Clause& n) { return c.subset_of(n); })) b_.erase(c);
      for (const auto& c : fresh) b_.weaken(*source(b_.memory(), c), c);
    } else {
      const Clause& a = *axiom;
      if (!b_.has(a)) b_.download(a);
      std::vector<Clause> hard;
      for (const auto& c : fresh) {
        if (b_.has(c)) continue;
        if (auto s = source(b_.memory(), c)) {
          b_.weaken(*s, c);
        } else {
          hard.push_back(c);
        }
      }
      for (const auto& c : hard) derive_through(a, c, prev, next, t);
    }
    for (const auto& c : std::set<Clause>(b_.memory()))
      if (!next.count(c)) b_.erase(c);
  }

 private:
  static std::string at(std::size_t t) { return "step " + std::to_string(t) + ": "; }

  // Narrowest held clause contained in c.
  static std::optional<Clause> source(const std::set<Clause>& held, const Clause& c) {
    std::optional<Clause> best;
    for (const auto& h : held)
      if (h.subset_of(c) && (!best || h.width() < best->width())) best = h;
    return best;
  }

  // Resolve A successively with ~a v c for every a in A \ c.
  void derive_through(const Clause& a, const Clause& c, const std::set<Clause>& prev, const std::set<Clause>& next,
                      std::size_t t) {
    Clause current = a;
    bool current_fresh = false;
    for (Lit l : a) {
      if (c.contains(l)) continue;
      auto side_lits = std::vector<Lit>(c.lits().begin(), c.lits().end());
      side_lits.push_back(~l);
      auto side = Clause::make(std::move(side_lits));
      if (!side) throw InternalContractViolation(at(t) + "clause " + c.str() + " clashes with the axiom");
      auto from = source(prev, *side);
      if (!from || !b_.has(*from))
        throw InternalContractViolation(at(t) + "no subclause of " + side->str() + " in the previous projection");
      const bool side_fresh = !b_.has(*side);
      if (side_fresh) b_.weaken(*from, *side);
      const bool result_fresh =
          !b_.has(l.positive() ? peblab::resolve(current, *side, l.var()) : peblab::resolve(*side, current, l.var()));
      Clause result = b_.resolve(current, *side, l.var());
      if (side_fresh && !next.count(*side)) b_.erase(*side);
      if (current_fresh && !next.count(current)) b_.erase(current);
      current = std::move(result);
      current_fresh = result_fresh;
    }
    if (current != c) throw InternalContractViolation(at(t) + "resolution chain ended at " + current.str());
  }

  ProofBuilder& b_;
};

}  // namespace

bool precisely_implies(const Configuration& d, const Clause& c, const Substitution& f) {
  auto bases = mentioned_bases(d, f);
  for (Lit l : c) bases.insert(l.var());
  const auto base = sorted_by_name(bases);
  const auto image = image_set(d, base, f);
  if (!image_implies(image, c, base)) return false;
  for (Lit l : c)
    if (image_implies(image, without(c, l), base)) return false;
  return true;
}

ProjectedClauseSet project(const Configuration& d, const Substitution& f) {
  const auto base = sorted_by_name(mentioned_bases(d, f));
  const auto image = image_set(d, base, f);
  ProjectedClauseSet out;
  for (const auto& lc : prime_implicates(image, static_cast<unsigned>(base.size()))) {
    std::vector<Lit> lits;
    for (std::size_t j = 0; j < base.size(); ++j)
      if (lc.mask >> j & 1u) lits.emplace_back(base[j], !(lc.neg >> j & 1u));
    out.emplace_back(std::move(lits));
  }
  std::sort(out.begin(), out.end());
  return out;
}

ProjectedClauseSet local_project(const Configuration& d, const Substitution& f, bool minimize_result) {
  if (d.size() > kMaxLocalClauses)
    throw BudgetExceeded("local projection of " + std::to_string(d.size()) + " clauses", 0);
  std::set<Clause> all;
  for (std::uint32_t mask = 0; mask < (1u << d.size()); ++mask) {
    Configuration sub;
    for (std::size_t i = 0; i < d.size(); ++i)
      if (mask >> i & 1u) sub.push_back(d[i]);
    for (auto& c : project(sub, f)) all.insert(std::move(c));
  }
  if (minimize_result) return minimize(std::move(all));
  return {all.begin(), all.end()};
}

bool derivable_by_weakening(const ProjectedClauseSet& s, const Clause& c) {
  return std::any_of(s.begin(), s.end(), [&](const Clause& p) { return p.subset_of(c); });
}

std::vector<Var> projected_vars(const ProjectedClauseSet& s) { return sorted_by_name(vars_of(s)); }

namespace {

// The clause A with `line` in A[f].
Clause axiom_of(const Clause& line, const Substitution& f) {
  std::map<Var, std::vector<Lit>> parts;
  for (Lit l : line) parts[base_var(f, l.var())].push_back(l);
  std::vector<Lit> lits;
  for (auto& [x, ls] : parts) {
    const Clause part(ls);
    auto pos = f.clauses_for(Lit::pos(x));
    auto neg = f.clauses_for(Lit::neg(x));
    if (std::find(pos.begin(), pos.end(), part) != pos.end()) {
      lits.push_back(Lit::pos(x));
    } else if (std::find(neg.begin(), neg.end(), part) != neg.end()) {
      lits.push_back(Lit::neg(x));
    } else {
      throw Error("clause " + line.str() + " is not a substituted clause");
    }
  }
  return Clause(std::move(lits));
}

}  // namespace

CnfFormula unsubstitute(const CnfFormula& g, const Substitution& f) {
  if (f.is_identity()) return g;
  std::vector<Clause> out;
  for (const auto& line : g) out.push_back(axiom_of(line, f));
  CnfFormula base(std::move(out));
  if (substitute(base, f) != g) throw Error("formula is not of the form F[f]");
  return base;
}

ExtractedRefutation extract_refutation(const Refutation& r_f, const Substitution& f, bool use_local) {
  if (r_f.system != ProofSystem::Resolution) throw Error("extraction needs a resolution refutation");
  check_refutation(r_f, {0});
  const CnfFormula base = unsubstitute(r_f.target, f);
  const auto configs = replay_configurations(r_f);

  auto projection = [&](const std::set<KDnfLine>& lines) {
    const auto d = as_configuration(lines);
    auto p = use_local ? local_project(d, f, false) : project(d, f);
    return std::set<Clause>(p.begin(), p.end());
  };

  ExtractedRefutation out;
  ProofBuilder b(base);
  Backbone backbone(b);
  std::set<Clause> prev;
  for (std::size_t t = 1; t < configs.size(); ++t) {
    const auto& s = r_f.steps[t - 1];
    const auto next = projection(configs[t]);
    std::optional<Clause> axiom;
    if (s.kind == StepKind::Download) axiom = f.is_identity() ? s.line.as_clause() : axiom_of(s.line.as_clause(), f);
    backbone.step(next, axiom, t);
    if (b.memory() != next) throw InternalContractViolation("step " + std::to_string(t) + ": memory differs from the projection");

    std::set<Clause> both = prev;
    both.insert(next.begin(), next.end());
    out.union_var_bound = std::max(out.union_var_bound, vars_of({both.begin(), both.end()}).size());
    out.projected_var_bound = std::max(out.projected_var_bound, vars_of({next.begin(), next.end()}).size());
    prev = next;
  }
  out.refutation = b.finish();
  return out;
}

Configuration random_configuration(std::mt19937_64& rng, const Substitution& f, std::size_t max_clauses,
                                   std::size_t max_base) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  std::vector<Var> base;
  const std::size_t n = pick(1, max_base);
  for (std::size_t i = 1; i <= n; ++i) base.push_back(Var::named("b" + std::to_string(i)));
  std::vector<Var> vars;
  for (Var x : base)
    for (Var v : f.block(x)) vars.push_back(v);

  std::set<Clause> out;
  const std::size_t m = pick(1, max_clauses);
  for (std::size_t tries = 0; out.size() < m && tries < 8 * m; ++tries) {
    if (pick(0, 1)) {
      // a line of some substituted axiom
      std::vector<Lit> a;
      for (Var x : base)
        if (pick(0, 2)) a.emplace_back(x, pick(0, 1) == 0);
      if (a.empty()) continue;
      auto lines = substitute(CnfFormula{Clause(a)}, f).clauses();
      out.insert(lines[pick(0, lines.size() - 1)]);
    } else {
      std::vector<Lit> lits;
      for (Var v : vars)
        if (pick(0, 3) == 0) lits.emplace_back(v, pick(0, 1) == 0);
      if (lits.empty()) continue;
      out.insert(Clause(lits));
    }
  }
  return {out.begin(), out.end()};
}

namespace {

struct Suite {
  const Substitution& f;
  AxiomSuiteReport& report;
  std::size_t sample;

  void fail(const std::string& property, const std::string& detail) {
    report.violations.push_back({sample, property, detail});
  }

  static std::string show(const Configuration& d) {
    std::string s = "{";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? ", " : "") + d[i].str();
    return s + "}";
  }

  void completeness(const Configuration& d, const ProjectedClauseSet& p, const char* name) {
    const auto base = sorted_by_name(mentioned_bases(d, f));
    const auto image = image_set(d, base, f);
    std::size_t total = 1;
    for (std::size_t i = 0; i < base.size(); ++i) total *= 3;
    for (std::size_t code = 0; code < total; ++code) {
      std::vector<Lit> lits;
      std::size_t rest = code;
      for (Var x : base) {
        if (rest % 3 == 1) lits.push_back(Lit::pos(x));
        if (rest % 3 == 2) lits.push_back(Lit::neg(x));
        rest /= 3;
      }
      const Clause c(lits);
      if (!image_implies(image, c, base)) continue;
      ++report.checks;
      if (!derivable_by_weakening(p, c)) fail(std::string("completeness/") + name, show(d) + " implies " + c.str());
    }
  }

  void monotone(const Configuration& d, const Configuration& stronger, bool local) {
    const auto p = local ? local_project(d, f) : project(d, f);
    const auto q = local ? local_project(stronger, f) : project(stronger, f);
    for (const auto& c : p) {
      ++report.checks;
      if (!derivable_by_weakening(q, c))
        fail(local ? "monotonicity/local" : "monotonicity", show(stronger) + " loses " + c.str());
    }
  }

  void incremental(const Configuration& d, const Clause& axiom, const Clause& line, bool local) {
    Configuration more = d;
    if (std::find(more.begin(), more.end(), line) == more.end()) more.push_back(line);
    const auto before = local ? local_project(d, f) : project(d, f);
    const auto after = local ? local_project(more, f) : project(more, f);
    for (const auto& c : after)
      for (Lit a : axiom) {
        if (c.contains(a)) continue;
        std::vector<Lit> lits(c.lits().begin(), c.lits().end());
        lits.push_back(~a);
        auto side = Clause::make(std::move(lits));
        ++report.checks;
        if (!side) continue;  // c contains ~a: trivially c itself
        if (!derivable_by_weakening(before, *side))
          fail(local ? "incremental-soundness/local" : "incremental-soundness",
               show(d) + " + " + line.str() + ": " + side->str());
      }
  }
};

}  // namespace

AxiomSuiteReport projection_axiom_suite(const Substitution& f, const std::vector<Configuration>& samples,
                                        std::mt19937_64& rng) {
  AxiomSuiteReport report;
  report.samples = samples.size();
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

  Suite empty{f, report, 0};
  report.checks += 2;
  if (!project({}, f).empty()) empty.fail("nontriviality", "project of the empty set");
  if (!local_project({}, f).empty()) empty.fail("nontriviality/local", "local projection of the empty set");

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& d = samples[i];
    Suite s{f, report, i};
    const bool local_ok = d.size() < kMaxLocalClauses;
    const auto p = project(d, f);
    s.completeness(d, p, "project");
    if (local_ok) {
      const auto lp = local_project(d, f);
      s.completeness(d, lp, "local");
      for (const auto& c : p) {
        ++report.checks;
        if (!derivable_by_weakening(lp, c)) s.fail("local-contains-project", c.str());
      }
    }

    // D' |= D: add an implied clause, or shrink one clause
    std::vector<Var> vars;
    for (const auto& c : d)
      for (Lit l : c) vars.push_back(l.var());
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    if (!d.empty()) {
      const Clause& victim = d[pick(0, d.size() - 1)];
      std::vector<Lit> grown(victim.lits().begin(), victim.lits().end());
      grown.emplace_back(vars[pick(0, vars.size() - 1)], pick(0, 1) == 0);
      Configuration added = d;
      if (auto g = Clause::make(std::move(grown)); g && std::find(d.begin(), d.end(), *g) == d.end()) added.push_back(*g);
      Configuration shrunk = d;
      auto& target = shrunk[pick(0, shrunk.size() - 1)];
      if (target.width() > 1) target = without(target, target.lits()[pick(0, target.width() - 1)]);
      std::sort(shrunk.begin(), shrunk.end());
      shrunk.erase(std::unique(shrunk.begin(), shrunk.end()), shrunk.end());
      for (const auto* stronger : {&added, &shrunk}) {
        s.monotone(d, *stronger, false);
        if (local_ok && stronger->size() <= kMaxLocalClauses) s.monotone(d, *stronger, true);
      }
    }

    // a random axiom over the sample's base variables plus one fresh variable
    std::vector<Var> bases;
    for (Var x : mentioned_bases(d, f)) bases.push_back(x);
    bases.push_back(Var::named("b0"));
    std::vector<Lit> a;
    for (Var x : bases)
      if (pick(0, 1)) a.emplace_back(x, pick(0, 1) == 0);
    if (a.empty()) a.emplace_back(bases.back(), true);
    const Clause axiom(a);
    const auto lines = substitute(CnfFormula{axiom}, f).clauses();
    const Clause& line = lines[pick(0, lines.size() - 1)];
    s.incremental(d, axiom, line, false);
    if (d.size() < kMaxLocalClauses) s.incremental(d, axiom, line, true);
  }
  return report;
}

bool SpaceReport::ok() const {
  return !asserted || std::all_of(rows.begin(), rows.end(), [](const SpaceRow& r) { return r.within_bound; });
}

SpaceReport space_respecting_check(const Substitution& f, const std::vector<Configuration>& samples) {
  SpaceReport out;
  out.asserted = !f.is_identity() && is_k_nonauthoritarian(f.function(), 1);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto n = vars_of(local_project(samples[i], f)).size();
    SpaceRow row{i, samples[i].size(), n, n <= samples[i].size()};
    if (row.clauses) out.max_ratio = std::max(out.max_ratio, static_cast<double>(n) / static_cast<double>(row.clauses));
    out.rows.push_back(row);
  }
  return out;
}

std::string space_report_csv(const SpaceReport& r) {
  std::ostringstream os;
  os << "id,clauses,projected_vars,within_bound\n";
  for (const auto& row : r.rows)
    os << row.id << ',' << row.clauses << ',' << row.projected_vars << ',' << (row.within_bound ? "yes" : "no") << '\n';
  return os.str();
}

std::string violations_jsonl(const SpaceReport& r, const std::vector<Configuration>& samples) {
  std::string out;
  for (const auto& row : r.rows) {
    if (row.within_bound) continue;
    nlohmann::json j{{"id", row.id}, {"clauses", row.clauses}, {"projected_vars", row.projected_vars}};
    auto& lines = j["configuration"] = nlohmann::json::array();
    if (row.id < samples.size())
      for (const auto& c : samples[row.id]) lines.push_back(c.str());
    out += j.dump() + "\n";
  }
  return out;
}

std::string violations_jsonl(const AxiomSuiteReport& r) {
  std::string out;
  for (const auto& v : r.violations)
    out += nlohmann::json{{"sample", v.sample}, {"property", v.property}, {"detail", v.detail}}.dump() + "\n";
  return out;
}

}  // namespace peblab
