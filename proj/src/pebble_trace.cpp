#include <algorithm>
#include <iterator>
#include <map>
#include <sstream>

#include "peblab/pebbling.hpp"

namespace peblab {
namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string t; in >> t;) out.push_back(t);
  return out;
}

VertexSet preds_of(const Dag& g, Vertex v) {
  auto p = g.preds(v);
  return VertexSet(p.begin(), p.end());
}

std::string join_names(const Dag& g, const VertexSet& s) {
  std::string out;
  for (Vertex v : s) out += " " + g.name(v);
  return out;
}

// Subconfigurations created by numbered moves, looked up by number.
template <class Sub>
class IdTable {
 public:
  void created(const Sub& s) { by_id_.push_back(s); }
  const Sub& live(std::size_t line, const std::string& tok, const std::set<Sub>& cur) const {
    std::size_t id = 0;
    try {
      std::size_t pos = 0;
      id = std::stoul(tok, &pos);
      if (pos != tok.size()) id = 0;
    } catch (const std::exception&) {
      id = 0;
    }
    if (id == 0 || id > by_id_.size()) throw ParseError(line, "no subconfiguration numbered '" + tok + "'");
    const Sub& s = by_id_[id - 1];
    if (!cur.count(s)) throw ParseError(line, "subconfiguration " + tok + " is no longer present");
    return s;
  }
  // Most recent number of a subconfiguration equal to s.
  std::size_t id_of(const Sub& s) const {
    for (std::size_t i = by_id_.size(); i-- > 0;)
      if (by_id_[i] == s) return i + 1;
    throw Error("internal: subconfiguration without a number");
  }

 private:
  std::vector<Sub> by_id_;
};

}  // namespace

PebblingTrace parse_pebbling_trace(const Dag& g, std::string_view text) {
  PebblingTrace trace;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  bool header_allowed = true;

  BwConfiguration bw;
  LabelledConfiguration lab;
  BlobConfiguration blob;
  IdTable<SubConfig> lab_ids;
  IdTable<BlobSubConfig> blob_ids;

  auto vertex = [&](const std::string& name) {
    auto v = g.find(name);
    if (!v) throw ParseError(lineno, "unknown vertex '" + name + "'");
    return *v;
  };

  while (std::getline(in, raw)) {
    ++lineno;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    auto tok = tokenize(raw);
    if (tok.empty()) continue;
    if (tok[0] == "game") {
      if (!header_allowed || tok.size() != 2) throw ParseError(lineno, "misplaced or malformed game header");
      if (tok[1] == "bw") trace.kind = GameKind::BlackWhite;
      else if (tok[1] == "labelled") trace.kind = GameKind::Labelled;
      else if (tok[1] == "blob") trace.kind = GameKind::Blob;
      else throw ParseError(lineno, "unknown game '" + tok[1] + "'");
      header_allowed = false;
      continue;
    }
    header_allowed = false;
    const std::string& op = tok[0];
    switch (trace.kind) {
      case GameKind::BlackWhite: {
        if (tok.size() != 2) throw ParseError(lineno, "expected '<move> <vertex>'");
        Vertex v = vertex(tok[1]);
        if (op == "B+") bw.black.insert(v);
        else if (op == "B-") bw.black.erase(v);
        else if (op == "W+") bw.white.insert(v);
        else if (op == "W-") bw.white.erase(v);
        else throw ParseError(lineno, "unknown move '" + op + "'");
        if (trace.bw.steps.empty()) trace.bw.steps.push_back({});
        trace.bw.steps.push_back(bw);
        break;
      }
      case GameKind::Labelled: {
        if (op == "I" && tok.size() == 2) {
          SubConfig s{vertex(tok[1]), {}};
          s.support = preds_of(g, s.black);
          lab.insert(s);
          lab_ids.created(s);
        } else if (op == "M" && tok.size() == 3) {
          const SubConfig x = lab_ids.live(lineno, tok[1], lab);
          const SubConfig y = lab_ids.live(lineno, tok[2], lab);
          SubConfig s{x.black, x.support};
          s.support.insert(y.support.begin(), y.support.end());
          s.support.erase(y.black);
          lab.insert(s);
          lab_ids.created(s);
        } else if (op == "E" && tok.size() == 2) {
          lab.erase(lab_ids.live(lineno, tok[1], lab));
        } else {
          throw ParseError(lineno, "expected 'I v', 'M i j' or 'E i'");
        }
        if (trace.labelled.steps.empty()) trace.labelled.steps.push_back({});
        trace.labelled.steps.push_back(lab);
        break;
      }
      case GameKind::Blob: {
        if (op == "I" && tok.size() == 2) {
          Vertex v = vertex(tok[1]);
          BlobSubConfig s{{v}, preds_of(g, v)};
          blob.insert(s);
          blob_ids.created(s);
        } else if (op == "M" && (tok.size() == 3 || tok.size() == 4)) {
          const BlobSubConfig x = blob_ids.live(lineno, tok[1], blob);
          const BlobSubConfig y = blob_ids.live(lineno, tok[2], blob);
          VertexSet pivots;
          for (Vertex v : x.white)
            if (y.blob.count(v)) pivots.insert(v);
          Vertex v = 0;
          if (tok.size() == 4) {
            v = vertex(tok[3]);
            if (!pivots.count(v)) throw ParseError(lineno, "merger vertex must be white in the first and black in the second");
          } else if (pivots.size() == 1) {
            v = *pivots.begin();
          } else {
            throw ParseError(lineno, "merger vertex is ambiguous or missing; write 'M i j v'");
          }
          BlobSubConfig s{x.blob, x.white};
          s.white.erase(v);
          for (Vertex b : y.blob)
            if (b != v) s.blob.insert(b);
          s.white.insert(y.white.begin(), y.white.end());
          blob.insert(s);
          blob_ids.created(s);
        } else if (op == "F" && tok.size() >= 2) {
          blob_ids.live(lineno, tok[1], blob);
          BlobSubConfig s;
          bool whites = false;
          for (std::size_t i = 2; i < tok.size(); ++i) {
            if (tok[i] == "/") {
              if (whites) throw ParseError(lineno, "inflation has more than one '/'");
              whites = true;
            } else {
              (whites ? s.white : s.blob).insert(vertex(tok[i]));
            }
          }
          if (!whites) throw ParseError(lineno, "inflation needs '<blob...> / <white...>'");
          blob.insert(s);
          blob_ids.created(s);
        } else if (op == "E" && tok.size() == 2) {
          blob.erase(blob_ids.live(lineno, tok[1], blob));
        } else {
          throw ParseError(lineno, "expected 'I v', 'M i j [v]', 'F i ... / ...' or 'E i'");
        }
        if (trace.blob.steps.empty()) trace.blob.steps.push_back({});
        trace.blob.steps.push_back(blob);
        break;
      }
    }
  }
  // An empty trace is the one-configuration pebbling.
  if (trace.bw.steps.empty()) trace.bw.steps.push_back({});
  if (trace.labelled.steps.empty()) trace.labelled.steps.push_back({});
  if (trace.blob.steps.empty()) trace.blob.steps.push_back({});
  return trace;
}

std::string write_bw_trace(const Dag& g, const BwPebbling& p) {
  std::string out = "game bw\n";
  for (std::size_t t = 1; t < p.steps.size(); ++t) {
    const auto& a = p.steps[t - 1];
    const auto& b = p.steps[t];
    auto emit = [&](const char* op, const VertexSet& from, const VertexSet& to) {
      for (Vertex v : to)
        if (!from.count(v)) out += std::string(op) + " " + g.name(v) + "\n";
    };
    emit("B-", b.black, a.black);
    emit("W-", b.white, a.white);
    emit("B+", a.black, b.black);
    emit("W+", a.white, b.white);
  }
  return out;
}

namespace {

template <class Sub>
void diff(const std::set<Sub>& a, const std::set<Sub>& b, std::vector<Sub>& added, std::vector<Sub>& removed) {
  added.clear();
  removed.clear();
  std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(added));
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(removed));
}

}  // namespace

std::string write_labelled_trace(const Dag& g, const LabelledPebbling& p) {
  std::string out = "game labelled\n";
  IdTable<SubConfig> ids;
  std::vector<SubConfig> added, removed;
  for (std::size_t t = 1; t < p.steps.size(); ++t) {
    const auto& a = p.steps[t - 1];
    diff(a, p.steps[t], added, removed);
    for (const auto& s : removed) out += "E " + std::to_string(ids.id_of(s)) + "\n";
    for (const auto& s : added) {
      std::string line;
      if (s.support == preds_of(g, s.black)) line = "I " + g.name(s.black);
      for (const auto& x : a) {
        if (!line.empty()) break;
        if (x.black != s.black) continue;
        for (const auto& y : a) {
          if (!x.support.count(y.black) || y.support.count(x.black)) continue;
          VertexSet u = x.support;
          u.insert(y.support.begin(), y.support.end());
          u.erase(y.black);
          if (u == s.support) {
            line = "M " + std::to_string(ids.id_of(x)) + " " + std::to_string(ids.id_of(y));
            break;
          }
        }
      }
      if (line.empty()) throw Error("step " + std::to_string(t) + " has no labelled-game move");
      out += line + "\n";
      ids.created(s);
    }
  }
  return out;
}

std::string write_blob_trace(const Dag& g, const BlobPebbling& p) {
  std::string out = "game blob\n";
  IdTable<BlobSubConfig> ids;
  std::vector<BlobSubConfig> added, removed;
  for (std::size_t t = 1; t < p.steps.size(); ++t) {
    const auto& a = p.steps[t - 1];
    diff(a, p.steps[t], added, removed);
    for (const auto& s : removed) out += "E " + std::to_string(ids.id_of(s)) + "\n";
    for (const auto& s : added) {
      std::string line;
      if (s.blob.size() == 1 && s.white == preds_of(g, *s.blob.begin())) line = "I " + g.name(*s.blob.begin());
      for (const auto& x : a) {
        if (!line.empty()) break;
        for (const auto& y : a) {
          if (!line.empty()) break;
          for (Vertex v : x.white) {
            if (!y.blob.count(v)) continue;
            BlobSubConfig m{x.blob, x.white};
            m.white.erase(v);
            for (Vertex b : y.blob)
              if (b != v) m.blob.insert(b);
            m.white.insert(y.white.begin(), y.white.end());
            if (m == s) {
              line = "M " + std::to_string(ids.id_of(x)) + " " + std::to_string(ids.id_of(y)) + " " + g.name(v);
              break;
            }
          }
        }
      }
      for (const auto& x : a) {
        if (!line.empty()) break;
        if (std::includes(s.blob.begin(), s.blob.end(), x.blob.begin(), x.blob.end()) &&
            std::includes(s.white.begin(), s.white.end(), x.white.begin(), x.white.end()))
          line = "F " + std::to_string(ids.id_of(x)) + join_names(g, s.blob) + " /" + join_names(g, s.white);
      }
      if (line.empty()) throw Error("step " + std::to_string(t) + " has no blob-game move");
      out += line + "\n";
      ids.created(s);
    }
  }
  return out;
}

}  // namespace peblab
