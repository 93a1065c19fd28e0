#include <algorithm>
#include <map>
#include <sstream>

#include "peblab/resolution.hpp"

namespace peblab {
namespace {

std::vector<std::string> split(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string join_tokens(const std::vector<std::string>& toks, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to; ++i) out += (i > from ? " " : "") + toks[i];
  return out;
}

const std::map<std::string, Rule, std::less<>> kRules = {
    {"r", Rule::Resolution}, {"w", Rule::Weakening}, {"cut", Rule::Cut}, {"andi", Rule::AndIntro}, {"ande", Rule::AndElim}};

const char* keyword(Rule r) {
  switch (r) {
    case Rule::Resolution:
      return "r";
    case Rule::Weakening:
      return "w";
    case Rule::Cut:
      return "cut";
    case Rule::AndIntro:
      return "andi";
    case Rule::AndElim:
      return "ande";
    case Rule::None:
      break;
  }
  throw Error("inference without a rule");
}

}  // namespace

Refutation parse_proof_trace(const CnfFormula& target, std::string_view text) {
  Refutation r;
  r.target = target;
  std::istringstream in{std::string(text)};
  std::map<std::size_t, KDnfLine> by_id;
  std::set<KDnfLine> held;
  std::size_t lineno = 0;
  bool header_allowed = true;
  for (std::string raw; std::getline(in, raw);) {
    ++lineno;
    if (!raw.empty() && raw[0] == '#') continue;
    auto toks = split(raw);
    if (toks.empty()) continue;
    auto bad = [&](const std::string& why) { return ParseError(lineno, why); };
    if (toks[0] == "proof") {
      if (!header_allowed) throw bad("'proof' header after the first step");
      header_allowed = false;
      if (toks.size() == 2 && toks[1] == "resolution") {
        r.system = ProofSystem::Resolution;
        r.k = 1;
      } else if (toks.size() == 3 && toks[1] == "kdnf") {
        r.system = ProofSystem::KDnf;
        try {
          r.k = static_cast<unsigned>(std::stoul(toks[2]));
        } catch (const std::exception&) {
          throw bad("bad k in header");
        }
        if (r.k < 1) throw bad("k must be positive");
      } else {
        throw bad("header must be 'proof resolution' or 'proof kdnf <k>'");
      }
      continue;
    }
    header_allowed = false;
    const std::size_t id = r.steps.size() + 1;
    auto reference = [&](const std::string& tok) -> const KDnfLine& {
      std::size_t ref = 0;
      try {
        std::size_t pos = 0;
        ref = std::stoul(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw bad("bad step id '" + tok + "'");
      }
      auto it = by_id.find(ref);
      if (it == by_id.end() || !held.count(it->second)) throw bad("step " + tok + " does not name a held line");
      return it->second;
    };
    auto line_of = [&](std::size_t from, std::size_t to) {
      try {
        return KDnfLine::parse(join_tokens(toks, from, to));
      } catch (const ParseError&) {
        throw;
      } catch (const Error& e) {
        throw bad(e.what());
      }
    };
    ProofStep step;
    if (toks[0] == "d") {
      step.kind = StepKind::Download;
      step.line = line_of(1, toks.size());
    } else if (toks[0] == "e") {
      if (toks.size() != 2) throw bad("erase takes one step id");
      step.kind = StepKind::Erase;
      step.line = reference(toks[1]);
    } else if (auto rule = kRules.find(toks[0]); rule != kRules.end()) {
      auto arrow = std::find(toks.begin(), toks.end(), "<-");
      if (arrow == toks.end()) throw bad("inference without '<-'");
      const auto a = static_cast<std::size_t>(arrow - toks.begin());
      step.kind = StepKind::Infer;
      step.rule = rule->second;
      step.line = line_of(1, a);
      std::size_t i = a + 1;
      for (; i < toks.size() && toks[i] != "pivot"; ++i) step.premises.push_back(reference(toks[i]));
      if (i < toks.size()) {
        if (step.rule != Rule::Resolution || i + 2 != toks.size()) throw bad("malformed pivot");
        step.pivot = Var::named(toks[i + 1]);
      }
      const std::size_t want = (step.rule == Rule::Weakening || step.rule == Rule::AndElim) ? 1 : 2;
      if (step.premises.size() != want) throw bad("'" + toks[0] + "' takes " + std::to_string(want) + " premise ids");
    } else {
      throw bad("unknown step '" + toks[0] + "'");
    }
    if (step.kind == StepKind::Erase) {
      held.erase(step.line);
    } else {
      held.insert(step.line);
      by_id[id] = step.line;
    }
    r.steps.push_back(std::move(step));
  }
  return r;
}

std::string write_proof_trace(const Refutation& r) {
  std::string out = r.system == ProofSystem::KDnf ? "proof kdnf " + std::to_string(r.k) + "\n" : "proof resolution\n";
  std::map<KDnfLine, std::size_t> latest;
  auto id_of = [&](const KDnfLine& l) {
    auto it = latest.find(l);
    if (it == latest.end()) throw Error("proof step refers to a line that is not held: " + l.str());
    return std::to_string(it->second);
  };
  auto with_line = [](std::string head, const KDnfLine& l) { return l.empty() ? head : head + " " + l.str(); };
  for (std::size_t i = 0; i < r.steps.size(); ++i) {
    const auto& s = r.steps[i];
    switch (s.kind) {
      case StepKind::Download:
        out += with_line("d", s.line);
        break;
      case StepKind::Erase:
        out += "e " + id_of(s.line);
        break;
      case StepKind::Infer:
        out += with_line(keyword(s.rule), s.line) + " <-";
        for (const auto& p : s.premises) out += " " + id_of(p);
        if (s.pivot) out += " pivot " + s.pivot->name();
        break;
    }
    out += '\n';
    if (s.kind == StepKind::Erase) latest.erase(s.line);
    else latest[s.line] = i + 1;
  }
  return out;
}

}  // namespace peblab
