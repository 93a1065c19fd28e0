#include "peblab/resolution.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace peblab {
namespace {

Term normalize_term(Term t) {
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  if (t.empty()) throw Error("empty term");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (t[i].var() == t[i - 1].var()) throw Error("trivial term mentions " + t[i].var().name() + " twice");
  return t;
}

std::vector<Term> canonical_terms(const std::vector<Term>& terms) {
  auto out = terms;
  for (auto& t : out) std::sort(t.begin(), t.end(), canonical_less);
  std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), canonical_less);
  });
  return out;
}

std::vector<Term> minus(const std::vector<Term>& from, const std::vector<Term>& drop) {
  std::vector<Term> out;
  std::set_difference(from.begin(), from.end(), drop.begin(), drop.end(), std::back_inserter(out));
  return out;
}

std::vector<Term> unite(const std::vector<Term>& a, const std::vector<Term>& b) {
  std::vector<Term> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool includes(const std::vector<Term>& big, const std::vector<Term>& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

bool term_subset(const Term& small, const Term& big) { return std::includes(big.begin(), big.end(), small.begin(), small.end()); }

std::string check_resolution(const KDnfLine& out, const std::vector<KDnfLine>& prem, std::optional<Var> pivot) {
  if (prem.size() != 2) return "resolution needs two premises";
  if (!prem[0].is_clause() || !prem[1].is_clause() || !out.is_clause()) return "resolution on non-clause lines";
  const Clause a = prem[0].as_clause(), b = prem[1].as_clause(), c = out.as_clause();
  std::vector<Var> candidates;
  if (pivot) candidates.push_back(*pivot);
  else candidates = a.vars();
  std::string why = "no pivot resolves the premises to the stated clause";
  for (Var v : candidates) {
    for (int order = 0; order < 2; ++order) {
      const Clause& p = order ? b : a;
      const Clause& q = order ? a : b;
      if (!p.contains(Lit::pos(v)) || !q.contains(Lit::neg(v))) continue;
      try {
        if (resolve(p, q, v) == c) return "";
        why = "resolvent differs from the stated clause";
      } catch (const TrivialResolvent& e) {
        why = e.what();
      }
    }
  }
  if (pivot && !(a.mentions(*pivot) && b.mentions(*pivot))) return "pivot " + pivot->name() + " absent from a premise";
  return why;
}

std::string check_weakening(const KDnfLine& out, const std::vector<KDnfLine>& prem) {
  if (prem.size() != 1) return "weakening needs one premise";
  return includes(out.terms(), prem[0].terms()) ? "" : "premise is not contained in the weakened line";
}

std::string check_cut(const KDnfLine& out, const std::vector<KDnfLine>& prem, unsigned k) {
  if (prem.size() != 2) return "cut needs two premises";
  std::string why = "no term of one premise is cut against the other";
  for (int order = 0; order < 2; ++order) {
    const auto& p = prem[order].terms();
    const auto& q = prem[1 - order].terms();
    for (const Term& t : p) {
      std::vector<Term> negs;
      for (Lit a : t) negs.push_back({~a});
      std::sort(negs.begin(), negs.end());
      if (!includes(q, negs)) continue;
      if (t.size() > k) {
        why = "cut term wider than k";
        continue;
      }
      if (unite(minus(p, {t}), minus(q, negs)) == out.terms()) return "";
      why = "cut result differs from the stated line";
    }
  }
  return why;
}

std::string check_and_intro(const KDnfLine& out, const std::vector<KDnfLine>& prem, unsigned k) {
  if (prem.size() != 2) return "and-introduction needs two premises";
  std::string why = "premises do not share the side formula";
  const auto& p = prem[0].terms();
  const auto& q = prem[1].terms();
  for (const Term& t : p)
    for (const Term& u : q) {
      auto g = minus(p, {t});
      if (g != minus(q, {u})) continue;
      Term both;
      std::set_union(t.begin(), t.end(), u.begin(), u.end(), std::back_inserter(both));
      bool trivial = false;
      for (std::size_t i = 1; i < both.size(); ++i) trivial |= both[i].var() == both[i - 1].var();
      if (trivial) {
        why = "conjunction is trivial";
        continue;
      }
      if (both.size() > k) {
        why = "conjunction of " + std::to_string(both.size()) + " literals exceeds k = " + std::to_string(k);
        continue;
      }
      if (unite(g, {both}) == out.terms()) return "";
      why = "and-introduction result differs from the stated line";
    }
  return why;
}

std::string check_and_elim(const KDnfLine& out, const std::vector<KDnfLine>& prem) {
  if (prem.size() != 1) return "and-elimination needs one premise";
  const auto& p = prem[0].terms();
  for (const Term& t : p) {
    auto g = minus(p, {t});
    if (!includes(out.terms(), g)) continue;
    auto extra = minus(out.terms(), g);
    if (extra.size() == 1 && term_subset(extra[0], t)) return "";
    if (extra.empty() && std::any_of(g.begin(), g.end(), [&](const Term& u) { return term_subset(u, t); })) return "";
  }
  return "no term of the premise is shortened to give the stated line";
}

struct Tracker {
  std::set<KDnfLine> config;
  std::unordered_map<Var, std::size_t> vars;
  std::size_t total = 0;

  bool add(const KDnfLine& l) {
    if (!config.insert(l).second) return false;
    total += l.literal_count();
    for (Var v : l.vars()) ++vars[v];
    return true;
  }
  bool remove(const KDnfLine& l) {
    if (!config.erase(l)) return false;
    total -= l.literal_count();
    for (Var v : l.vars())
      if (--vars[v] == 0) vars.erase(v);
    return true;
  }
  void record(Measures& m) const {
    m.clause_space = std::max(m.clause_space, config.size());
    m.formula_space = m.clause_space;
    m.total_space = std::max(m.total_space, total);
    m.variable_space = std::max(m.variable_space, vars.size());
  }
};

}  // namespace

Clause resolve(const Clause& c1, const Clause& c2, Var pivot) {
  if (!c1.contains(Lit::pos(pivot)) || !c2.contains(Lit::neg(pivot)))
    throw PivotAbsent("pivot " + pivot.name() + " must be positive in the first and negative in the second clause");
  std::vector<Lit> lits;
  for (Lit l : c1)
    if (l.var() != pivot) lits.push_back(l);
  for (Lit l : c2)
    if (l.var() != pivot) lits.push_back(l);
  auto out = Clause::make(std::move(lits));
  if (!out) throw TrivialResolvent("resolving " + c1.str() + " and " + c2.str() + " on " + pivot.name() + " is trivial");
  return *out;
}

KDnfLine::KDnfLine(std::vector<Term> terms) {
  for (auto& t : terms) t = normalize_term(std::move(t));
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  terms_ = std::move(terms);
}

KDnfLine KDnfLine::of(const Clause& c) {
  KDnfLine l;
  for (Lit x : c) l.terms_.push_back({x});
  return l;
}

KDnfLine KDnfLine::parse(std::string_view text) {
  std::vector<Term> terms;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  };
  for (skip(); i < text.size(); skip()) {
    if (text[i] == '(') {
      auto close = text.find(')', i);
      if (close == std::string_view::npos) throw Error("unterminated term in '" + std::string(text) + "'");
      auto body = text.substr(i + 1, close - i - 1);
      Term t;
      for (std::size_t s = 0;;) {
        auto amp = body.find('&', s);
        auto piece = body.substr(s, amp == std::string_view::npos ? amp : amp - s);
        while (!piece.empty() && piece.front() == ' ') piece.remove_prefix(1);
        while (!piece.empty() && piece.back() == ' ') piece.remove_suffix(1);
        t.push_back(Lit::parse(piece));
        if (amp == std::string_view::npos) break;
        s = amp + 1;
      }
      terms.push_back(std::move(t));
      i = close + 1;
    } else {
      auto end = text.find_first_of(" \t", i);
      if (end == std::string_view::npos) end = text.size();
      terms.push_back({Lit::parse(text.substr(i, end - i))});
      i = end;
    }
  }
  return KDnfLine(std::move(terms));
}

bool KDnfLine::contains(const Term& t) const { return std::binary_search(terms_.begin(), terms_.end(), t); }

bool KDnfLine::is_clause() const {
  if (!std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.size() == 1; })) return false;
  for (std::size_t i = 1; i < terms_.size(); ++i)
    if (terms_[i][0].var() == terms_[i - 1][0].var()) return false;
  return true;
}

Clause KDnfLine::as_clause() const {
  if (!is_clause()) throw Error("line " + str() + " is not a clause");
  std::vector<Lit> lits;
  for (const auto& t : terms_) lits.push_back(t[0]);
  return Clause(std::move(lits));
}

std::size_t KDnfLine::literal_count() const {
  std::size_t n = 0;
  for (const auto& t : terms_) n += t.size();
  return n;
}

std::size_t KDnfLine::max_term() const {
  std::size_t n = 0;
  for (const auto& t : terms_) n = std::max(n, t.size());
  return n;
}

std::vector<Var> KDnfLine::vars() const {
  std::vector<Var> out;
  for (const auto& t : terms_)
    for (Lit l : t) out.push_back(l.var());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string KDnfLine::str() const {
  std::string out;
  for (const auto& t : canonical_terms(terms_)) {
    if (!out.empty()) out += ' ';
    if (t.size() == 1) {
      out += t[0].str();
      continue;
    }
    out += '(';
    for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "&" : "") + t[i].str();
    out += ')';
  }
  return out;
}

ProofStep ProofStep::download(const Clause& c) { return {StepKind::Download, Rule::None, KDnfLine::of(c), {}, {}}; }

ProofStep ProofStep::resolution(const Clause& result, const Clause& a, const Clause& b, Var pivot) {
  return {StepKind::Infer, Rule::Resolution, KDnfLine::of(result), {KDnfLine::of(a), KDnfLine::of(b)}, pivot};
}

ProofStep ProofStep::weakening(const Clause& result, const Clause& from) {
  return {StepKind::Infer, Rule::Weakening, KDnfLine::of(result), {KDnfLine::of(from)}, {}};
}

ProofStep ProofStep::erase(const Clause& c) { return {StepKind::Erase, Rule::None, KDnfLine::of(c), {}, {}}; }

bool entails(const std::vector<KDnfLine>& premises, const KDnfLine& conclusion) {
  std::vector<Var> vars = conclusion.vars();
  for (const auto& p : premises) {
    auto v = p.vars();
    vars.insert(vars.end(), v.begin(), v.end());
  }
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  if (vars.size() > 24) throw BudgetExceeded("truth-table entailment over " + std::to_string(vars.size()) + " variables", 0);
  // each term as (mask, value) over the local variable numbering
  using Compiled = std::vector<std::pair<std::uint32_t, std::uint32_t>>;
  auto compile = [&](const KDnfLine& l) {
    Compiled out;
    for (const auto& t : l.terms()) {
      std::uint32_t mask = 0, value = 0;
      for (Lit x : t) {
        auto bit = 1u << (std::lower_bound(vars.begin(), vars.end(), x.var()) - vars.begin());
        mask |= bit;
        if (x.positive()) value |= bit;
      }
      out.emplace_back(mask, value);
    }
    return out;
  };
  auto holds = [](const Compiled& c, std::uint32_t a) {
    return std::any_of(c.begin(), c.end(), [a](auto mv) { return (a & mv.first) == mv.second; });
  };
  std::vector<Compiled> prem;
  for (const auto& p : premises) prem.push_back(compile(p));
  const Compiled concl = compile(conclusion);
  const std::uint64_t n = std::uint64_t{1} << vars.size();
  for (std::uint64_t a = 0; a < n; ++a) {
    auto x = static_cast<std::uint32_t>(a);
    if (holds(concl, x)) continue;
    if (std::all_of(prem.begin(), prem.end(), [&](const Compiled& c) { return holds(c, x); })) return false;
  }
  return true;
}

Measures check_refutation(const Refutation& r, CheckOptions options) {
  const bool kdnf = r.system == ProofSystem::KDnf;
  Tracker tr;
  Measures m;
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& s = r.steps[i];
    auto fail = [&](const std::string& reason) { throw IllegalStep(i + 1, reason); };
    if (!kdnf && !s.line.is_clause()) fail("line " + s.line.str() + " is not a clause");
    if (kdnf && s.line.max_term() > r.k) fail("line " + s.line.str() + " has a term wider than k");
    switch (s.kind) {
      case StepKind::Download:
        if (!s.line.is_clause() || !r.target.contains(s.line.as_clause()))
          fail("downloaded line " + s.line.str() + " is not an axiom");
        tr.add(s.line);
        ++m.downloads;
        break;
      case StepKind::Erase:
        if (!tr.remove(s.line)) fail("erased line " + s.line.str() + " is not held");
        break;
      case StepKind::Infer: {
        for (const auto& p : s.premises)
          if (!tr.config.count(p)) fail("premise " + p.str() + " is not held");
        std::string why;
        switch (s.rule) {
          case Rule::Resolution:
            why = check_resolution(s.line, s.premises, s.pivot);
            break;
          case Rule::Weakening:
            why = check_weakening(s.line, s.premises);
            break;
          case Rule::Cut:
          case Rule::AndIntro:
          case Rule::AndElim:
            if (!kdnf) {
              why = "k-DNF rule in a resolution proof";
              break;
            }
            why = s.rule == Rule::Cut        ? check_cut(s.line, s.premises, r.k)
                  : s.rule == Rule::AndIntro ? check_and_intro(s.line, s.premises, r.k)
                                             : check_and_elim(s.line, s.premises);
            break;
          case Rule::None:
            why = "inference without a rule";
        }
        if (!why.empty()) fail(why);
        if (options.semantic_vars) {
          std::unordered_set<Var> vs;
          for (Var v : s.line.vars()) vs.insert(v);
          for (const auto& p : s.premises)
            for (Var v : p.vars()) vs.insert(v);
          if (vs.size() <= options.semantic_vars) {
            if (!entails(s.premises, s.line)) fail("inference is unsound");
            ++m.semantically_checked;
          }
        }
        tr.add(s.line);
        ++m.inferences;
        break;
      }
    }
    if (s.kind != StepKind::Erase) m.width = std::max(m.width, s.line.literal_count());
    tr.record(m);
  }
  m.length = m.downloads + m.inferences;
  if (!tr.config.count(KDnfLine{})) throw MissingBottom("the final configuration does not contain the empty clause");
  return m;
}

std::vector<std::set<KDnfLine>> replay_configurations(const Refutation& r) {
  std::vector<std::set<KDnfLine>> out{{}};
  for (const auto& s : r.steps) {
    auto next = out.back();
    if (s.kind == StepKind::Erase) next.erase(s.line);
    else next.insert(s.line);
    out.push_back(std::move(next));
  }
  return out;
}

Measures measures_from_configurations(const Refutation& r) {
  Measures m;
  for (const auto& s : r.steps) {
    if (s.kind == StepKind::Download) ++m.downloads;
    if (s.kind == StepKind::Infer) ++m.inferences;
  }
  m.length = m.downloads + m.inferences;
  for (const auto& config : replay_configurations(r)) {
    std::set<Var> vars;
    std::size_t total = 0;
    for (const auto& l : config) {
      total += l.literal_count();
      m.width = std::max(m.width, l.literal_count());
      for (Var v : l.vars()) vars.insert(v);
    }
    m.clause_space = std::max(m.clause_space, config.size());
    m.total_space = std::max(m.total_space, total);
    m.variable_space = std::max(m.variable_space, vars.size());
  }
  m.formula_space = m.clause_space;
  return m;
}

ProofBuilder::ProofBuilder(CnfFormula target, std::set<Clause> initial)
    : target_(std::move(target)), memory_(std::move(initial)), peak_(memory_.size()) {}

void ProofBuilder::require(const Clause& c) const {
  if (!has(c)) throw Error("proof builder: clause " + c.str() + " is not held");
}

void ProofBuilder::push(ProofStep step) {
  steps_.push_back(std::move(step));
  peak_ = std::max(peak_, memory_.size());
}

void ProofBuilder::download(const Clause& c) {
  if (!target_.contains(c)) throw Error("proof builder: " + c.str() + " is not an axiom");
  memory_.insert(c);
  push(ProofStep::download(c));
}

Clause ProofBuilder::resolve(const Clause& a, const Clause& b, Var pivot) {
  require(a);
  require(b);
  bool swap = !a.contains(Lit::pos(pivot));
  Clause r = peblab::resolve(swap ? b : a, swap ? a : b, pivot);
  memory_.insert(r);
  push(ProofStep::resolution(r, a, b, pivot));
  return r;
}

void ProofBuilder::weaken(const Clause& from, const Clause& to) {
  require(from);
  if (!from.subset_of(to)) throw Error("proof builder: " + from.str() + " does not weaken to " + to.str());
  memory_.insert(to);
  push(ProofStep::weakening(to, from));
}

void ProofBuilder::erase(const Clause& c) {
  require(c);
  memory_.erase(c);
  push(ProofStep::erase(c));
}

void ProofBuilder::apply(const ProofStep& step) {
  Clause c = step.line.as_clause();
  switch (step.kind) {
    case StepKind::Download:
      download(c);
      return;
    case StepKind::Erase:
      erase(c);
      return;
    case StepKind::Infer:
      if (step.rule == Rule::Resolution && step.pivot && step.premises.size() == 2) {
        resolve(step.premises[0].as_clause(), step.premises[1].as_clause(), *step.pivot);
        return;
      }
      if (step.rule == Rule::Weakening && step.premises.size() == 1) {
        weaken(step.premises[0].as_clause(), c);
        return;
      }
      throw Error("proof builder: unsupported inference");
  }
}

Refutation ProofBuilder::finish() const { return Refutation{target_, steps_, ProofSystem::Resolution, 1}; }

}  // namespace peblab
