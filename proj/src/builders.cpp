#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "peblab/formulas.hpp"
#include "peblab/resolution.hpp"

namespace peblab {
namespace {

// Steps for one placement (or for the final sink step) over generic vertex
// names, instantiated by renaming.
struct Template {
  std::vector<ProofStep> steps;
  std::size_t length = 0;
  std::size_t workspace = 0;
};

Var generic_pred(std::size_t i) { return Var::named("$p" + std::to_string(i + 1)); }
Var generic_target() { return Var::named("$t"); }

std::vector<Clause> block_clauses(const Substitution& f, Lit l) { return f.clauses_for(l); }

std::size_t counted(const std::vector<ProofStep>& steps) {
  return static_cast<std::size_t>(std::count_if(steps.begin(), steps.end(), [](const ProofStep& s) { return s.kind != StepKind::Erase; }));
}

SaturationOptions wide_open() {
  SaturationOptions o;
  o.variable_cap = std::numeric_limits<std::size_t>::max();
  return o;
}

Template placement_template(const Substitution& f, std::size_t indegree) {
  std::set<Clause> initial;
  std::vector<Lit> axiom;
  for (std::size_t i = 0; i < indegree; ++i) {
    for (auto& c : block_clauses(f, Lit::pos(generic_pred(i)))) initial.insert(c);
    axiom.push_back(Lit::neg(generic_pred(i)));
  }
  axiom.push_back(Lit::pos(generic_target()));
  const CnfFormula block = substitute(CnfFormula{Clause(axiom)}, f);
  ProofBuilder b(block, initial);
  for (const auto& c : block)
    if (!b.has(c)) b.download(c);
  std::vector<Clause> premises(b.memory().begin(), b.memory().end());
  Saturation sat(premises, wide_open());
  const auto goal = block_clauses(f, Lit::pos(generic_target()));
  for (const auto& c : goal) sat.derive(b, c);
  const auto held = b.memory();
  for (const auto& c : held)
    if (!initial.count(c) && std::find(goal.begin(), goal.end(), c) == goal.end()) b.erase(c);
  return {b.steps(), counted(b.steps()), b.peak() - initial.size()};
}

Template sink_template(const Substitution& f) {
  const auto have = block_clauses(f, Lit::pos(generic_target()));
  std::set<Clause> initial(have.begin(), have.end());
  const CnfFormula block = substitute(CnfFormula{Clause{Lit::neg(generic_target())}}, f);
  ProofBuilder b(block, initial);
  for (const auto& c : block)
    if (!b.has(c)) b.download(c);
  std::vector<Clause> premises(b.memory().begin(), b.memory().end());
  Saturation sat(premises, wide_open());
  sat.derive(b, Clause{});
  return {b.steps(), counted(b.steps()), b.peak() - initial.size()};
}

using Renaming = std::unordered_map<Var, Var>;

Clause rename(const Clause& c, const Renaming& map) {
  std::vector<Lit> lits;
  for (Lit l : c) {
    auto it = map.find(l.var());
    lits.emplace_back(it == map.end() ? l.var() : it->second, l.positive());
  }
  return Clause(std::move(lits));
}

ProofStep rename(const ProofStep& s, const Renaming& map) {
  ProofStep out = s;
  out.line = KDnfLine::of(rename(s.line.as_clause(), map));
  for (auto& p : out.premises) p = KDnfLine::of(rename(p.as_clause(), map));
  if (s.pivot) {
    auto it = map.find(*s.pivot);
    if (it != map.end()) out.pivot = it->second;
  }
  return out;
}

void map_block(Renaming& map, const Substitution& f, Var generic, Var actual) {
  auto from = f.block(generic);
  auto to = f.block(actual);
  for (std::size_t i = 0; i < from.size(); ++i) map[from[i]] = to[i];
}

}  // namespace

CompileConstants compile_constants(const Substitution& f, std::size_t max_indegree) {
  CompileConstants k;
  k.block_size = std::max(block_clauses(f, Lit::pos(generic_target())).size(),
                          block_clauses(f, Lit::neg(generic_target())).size());
  for (std::size_t d = 0; d <= max_indegree; ++d) {
    auto t = placement_template(f, d);
    k.placement_length = std::max(k.placement_length, t.length);
    k.placement_workspace = std::max(k.placement_workspace, t.workspace);
  }
  auto s = sink_template(f);
  k.sink_length = s.length;
  k.sink_workspace = s.workspace;
  k.k_length = k.placement_length + k.sink_length;
  k.k_space = std::max({k.block_size, k.placement_workspace, k.block_size + k.sink_workspace});
  return k;
}

CompiledRefutation pebbling_to_refutation(const Dag& g, const BwPebbling& p, const Substitution& f) {
  try {
    validate_bw(g, p, true);
  } catch (const Error& e) {
    throw IncompletePebbling(std::string("not a complete black pebbling: ") + e.what());
  }
  std::vector<Var> var(g.size());
  for (Vertex v = 0; v < g.size(); ++v) var[v] = Var::named(g.name(v));

  std::unordered_map<std::size_t, Template> templates;
  auto placement = [&](std::size_t d) -> const Template& {
    auto it = templates.find(d);
    if (it == templates.end()) it = templates.emplace(d, placement_template(f, d)).first;
    return it->second;
  };

  ProofBuilder b(substitute(pebbling_contradiction(g), f));
  for (std::size_t t = 1; t < p.steps.size(); ++t) {
    const auto& before = p.steps[t - 1].black;
    const auto& after = p.steps[t].black;
    for (Vertex v : before)
      if (!after.count(v))
        for (const auto& c : block_clauses(f, Lit::pos(var[v]))) b.erase(c);
    for (Vertex v : after) {
      if (before.count(v)) continue;
      Renaming map;
      const auto preds = g.preds(v);
      for (std::size_t i = 0; i < preds.size(); ++i) map_block(map, f, generic_pred(i), var[preds[i]]);
      map_block(map, f, generic_target(), var[v]);
      for (const auto& s : placement(preds.size()).steps) b.apply(rename(s, map));
    }
  }
  Renaming map;
  map_block(map, f, generic_target(), var[g.sink()]);
  for (const auto& s : sink_template(f).steps) b.apply(rename(s, map));
  return {b.finish(), compile_constants(f, g.max_indegree())};
}

Refutation constant_space_refutation(const Dag& g) {
  std::vector<Var> var(g.size());
  for (Vertex v = 0; v < g.size(); ++v) var[v] = Var::named(g.name(v));
  ProofBuilder b(pebbling_contradiction(g));
  Clause current{Lit::neg(var[g.sink()])};
  b.download(current);
  while (!current.empty()) {
    Vertex latest = 0;
    std::size_t best = 0;
    bool first = true;
    for (Lit l : current) {
      auto v = *g.find(l.var().name());
      if (first || g.topo_rank(v) > best) {
        latest = v;
        best = g.topo_rank(v);
        first = false;
      }
    }
    std::vector<Lit> lits;
    for (Vertex u : g.preds(latest)) lits.push_back(Lit::neg(var[u]));
    lits.push_back(Lit::pos(var[latest]));
    const Clause axiom(std::move(lits));
    b.download(axiom);
    Clause next = b.resolve(axiom, current, var[latest]);
    b.erase(current);
    b.erase(axiom);
    current = std::move(next);
  }
  return b.finish();
}

LiftedRefutation lift_refutation(const Refutation& r, const Substitution& f) {
  if (r.system != ProofSystem::Resolution) throw Error("only resolution refutations can be lifted");
  const Measures in = check_refutation(r, {0});
  if (f.is_identity()) return {r, 0};
  const std::size_t d = f.arity();
  auto lifted = [&](const KDnfLine& l) { return substitute(CnfFormula{l.as_clause()}, f).clauses(); };

  ProofBuilder b(substitute(r.target, f));
  for (const auto& s : r.steps) {
    switch (s.kind) {
      case StepKind::Download:
        for (const auto& c : lifted(s.line))
          if (!b.has(c)) b.download(c);
        break;
      case StepKind::Erase:
        for (const auto& c : lifted(s.line)) b.erase(c);
        break;
      case StepKind::Infer: {
        std::vector<Clause> goals;
        for (const auto& c : lifted(s.line))
          if (!b.has(c)) goals.push_back(c);
        if (goals.empty()) break;
        std::vector<Clause> premises;
        for (const auto& p : s.premises)
          for (const auto& c : lifted(p)) premises.push_back(c);
        // narrowest derivation: raise the width cap until every goal follows
        auto opt = wide_open();
        for (opt.max_width = d * in.width;; ++opt.max_width) {
          Saturation sat(premises, opt);
          if (std::all_of(goals.begin(), goals.end(), [&](const Clause& c) { return sat.implies(c); })) {
            for (const auto& c : goals) sat.derive(b, c);
            break;
          }
          if (!sat.truncated()) throw SaturationFailure("lifted inference is not implied by its premises");
        }
        break;
      }
    }
  }
  LiftedRefutation out{b.finish(), 0};
  const auto len = static_cast<double>(counted(out.refutation.steps));
  if (in.length && in.width)
    out.c = std::log2(std::max(1.0, len / static_cast<double>(in.length))) / static_cast<double>(d * in.width);
  return out;
}

Refutation handcrafted_kdnf_refutation() {
  // blocks v1#1 v1#2 and v2#1 v2#2; comments give the step ids
  static const char* kTrace =
      "proof kdnf 2\n"
      "d v1#1 v1#2\n"                                  // 1
      "d v1#1 -v1#2 v2#1 v2#2\n"                       // 2
      "cut v1#1 v2#1 v2#2 <- 1 2\n"                    // 3
      "e 2\n"                                          // 4
      "d -v1#1 -v1#2\n"                                // 5
      "d -v1#1 v1#2 v2#1 v2#2\n"                       // 6
      "cut -v1#1 v2#1 v2#2 <- 5 6\n"                   // 7
      "e 6\n"                                          // 8
      "cut v2#1 v2#2 <- 3 7\n"                         // 9
      "e 3\n"                                          // 10
      "e 7\n"                                          // 11
      "d v1#1 -v1#2 -v2#1 -v2#2\n"                     // 12
      "cut v1#1 -v2#1 -v2#2 <- 1 12\n"                 // 13
      "e 12\n"                                         // 14
      "d -v1#1 v1#2 -v2#1 -v2#2\n"                     // 15
      "cut -v1#1 -v2#1 -v2#2 <- 5 15\n"                // 16
      "e 15\n"                                         // 17
      "cut -v2#1 -v2#2 <- 13 16\n"                     // 18
      "e 13\n"                                         // 19
      "e 16\n"                                         // 20
      "e 1\n"                                          // 21
      "e 5\n"                                          // 22
      "d -v2#1 v2#2\n"                                 // 23
      "cut v2#2 <- 9 23\n"                             // 24
      "cut -v2#1 <- 18 24\n"                           // 25
      "andi (-v2#1&v2#2) <- 25 24\n"                   // 26
      "e 24\n"                                         // 27
      "e 25\n"                                         // 28
      "ande v2#2 <- 26\n"                              // 29
      "e 29\n"                                         // 30
      "d v2#1 -v2#2\n"                                 // 31
      "cut <- 26 31\n";                                // 32
  const CnfFormula target = substitute(pebbling_contradiction(build_path(2)), BooleanFunction::xor_fn(2));
  return parse_proof_trace(target, kTrace);
}

}  // namespace peblab
