#include "peblab/dag.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <sstream>
#include <unordered_map>

namespace peblab {

Dag Dag::build(std::vector<std::string> names, std::vector<std::pair<Vertex, Vertex>> edges,
               std::span<const std::size_t> edge_lines) {
  auto line_of = [&](std::size_t i) -> std::size_t { return i < edge_lines.size() ? edge_lines[i] : 0; };
  if (names.empty()) throw DagError(DagError::Kind::NoVertices, 0, "graph has no vertices");
  Dag g;
  g.names_ = std::move(names);
  const std::size_t n = g.names_.size();
  {
    std::unordered_map<std::string_view, Vertex> seen;
    for (Vertex v = 0; v < n; ++v)
      if (!seen.emplace(g.names_[v], v).second)
        throw DagError(DagError::Kind::DuplicateVertex, 0, "duplicate vertex '" + g.names_[v] + "'");
  }
  g.preds_.assign(n, {});
  g.succs_.assign(n, {});
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [from, to] = edges[i];
    if (from >= n || to >= n) throw DagError(DagError::Kind::UnknownVertex, line_of(i), "edge endpoint out of range");
    if (from == to) throw DagError(DagError::Kind::Cycle, line_of(i), "cycle detected: self-loop on '" + g.names_[from] + "'");
    if (std::find(g.preds_[to].begin(), g.preds_[to].end(), from) != g.preds_[to].end())
      throw DagError(DagError::Kind::DuplicateEdge, line_of(i),
                     "duplicate edge " + g.names_[from] + " -> " + g.names_[to]);
    g.preds_[to].push_back(from);
    g.succs_[from].push_back(to);
  }
  for (auto& p : g.preds_) std::sort(p.begin(), p.end());
  for (auto& s : g.succs_) std::sort(s.begin(), s.end());
  g.edges_ = std::move(edges);
  std::sort(g.edges_.begin(), g.edges_.end(),
            [](auto a, auto b) { return std::pair(a.second, a.first) < std::pair(b.second, b.first); });

  // Kahn's algorithm with a name-ordered ready queue.
  auto by_name = [&](Vertex a, Vertex b) { return g.names_[a] > g.names_[b]; };
  std::priority_queue<Vertex, std::vector<Vertex>, decltype(by_name)> ready(by_name);
  std::vector<std::size_t> indeg(n);
  for (Vertex v = 0; v < n; ++v) {
    indeg[v] = g.preds_[v].size();
    if (indeg[v] == 0) ready.push(v);
  }
  while (!ready.empty()) {
    Vertex v = ready.top();
    ready.pop();
    g.topo_.push_back(v);
    for (Vertex s : g.succs_[v])
      if (--indeg[s] == 0) ready.push(s);
  }
  if (g.topo_.size() != n) {
    Vertex stuck = 0;
    for (Vertex v = 0; v < n; ++v)
      if (indeg[v] > 0) {
        stuck = v;
        break;
      }
    std::size_t line = edge_lines.empty() ? 0 : *std::max_element(edge_lines.begin(), edge_lines.end());
    throw DagError(DagError::Kind::Cycle, line, "cycle detected through vertex '" + g.names_[stuck] + "'");
  }
  g.topo_rank_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) g.topo_rank_[g.topo_[i]] = i;

  std::vector<Vertex> sinks;
  for (Vertex v = 0; v < n; ++v)
    if (g.succs_[v].empty()) sinks.push_back(v);
  if (sinks.size() != 1) {
    std::string list;
    for (Vertex v : sinks) list += (list.empty() ? "" : ", ") + g.names_[v];
    throw DagError(DagError::Kind::MultipleSinks, 0, "expected exactly one sink, found: " + list);
  }
  g.sink_ = sinks.front();
  for (const auto& p : g.preds_) g.max_indegree_ = std::max(g.max_indegree_, p.size());

  // Reachability, filled in reverse topological order.
  g.reach_.assign(n, std::vector<bool>(n, false));
  for (auto it = g.topo_.rbegin(); it != g.topo_.rend(); ++it) {
    Vertex v = *it;
    for (Vertex s : g.succs_[v]) {
      g.reach_[v][s] = true;
      for (Vertex t = 0; t < n; ++t)
        if (g.reach_[s][t]) g.reach_[v][t] = true;
    }
  }
  return g;
}

std::optional<Vertex> Dag::find(std::string_view name) const {
  for (Vertex v = 0; v < names_.size(); ++v)
    if (names_[v] == name) return v;
  return std::nullopt;
}

std::vector<Vertex> Dag::sources() const {
  std::vector<Vertex> out;
  for (Vertex v = 0; v < size(); ++v)
    if (is_source(v)) out.push_back(v);
  return out;
}

bool Dag::reaches(Vertex from, Vertex to) const { return reach_.at(from).at(to); }

Dag build_pyramid(std::size_t height) {
  const std::size_t n = (height + 1) * (height + 2) / 2;
  // Layers listed bottom-up: the bottom layer has height+1 vertices.
  std::vector<std::vector<Vertex>> layer(height + 1);
  std::vector<std::string> names;
  for (std::size_t k = height + 1; k-- > 0;) {
    for (std::size_t i = 0; i <= k; ++i) {
      layer[k].push_back(names.size());
      if (n <= 26)
        names.emplace_back(1, static_cast<char>('z' - (n - 1) + names.size()));
      else
        names.push_back("p" + std::to_string(k) + "_" + std::to_string(i));
    }
  }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t k = 0; k < height; ++k)
    for (std::size_t i = 0; i <= k; ++i) {
      edges.emplace_back(layer[k + 1][i], layer[k][i]);
      edges.emplace_back(layer[k + 1][i + 1], layer[k][i]);
    }
  return Dag::build(std::move(names), std::move(edges));
}

Dag build_binary_tree(std::size_t height) {
  // Leaves first so declaration order is topological.
  std::vector<std::string> paths{""};
  std::vector<std::vector<std::string>> levels{paths};
  for (std::size_t d = 0; d < height; ++d) {
    std::vector<std::string> next;
    for (const auto& p : levels.back()) {
      next.push_back(p + "l");
      next.push_back(p + "r");
    }
    levels.push_back(std::move(next));
  }
  std::vector<std::string> names;
  std::unordered_map<std::string, Vertex> index;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it)
    for (const auto& p : *it) {
      index[p] = names.size();
      names.push_back(p.empty() ? "root" : p);
    }
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t d = 0; d < height; ++d)
    for (const auto& p : levels[d]) {
      edges.emplace_back(index[p + "l"], index[p]);
      edges.emplace_back(index[p + "r"], index[p]);
    }
  return Dag::build(std::move(names), std::move(edges));
}

Dag build_path(std::size_t n) {
  if (n == 0) throw Error("path needs at least one vertex");
  std::vector<std::string> names;
  std::vector<std::pair<Vertex, Vertex>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("v" + std::to_string(i + 1));
    if (i > 0) edges.emplace_back(i - 1, i);
  }
  return Dag::build(std::move(names), std::move(edges));
}

Dag parse_dag(std::string_view text) {
  std::vector<std::string> names;
  std::unordered_map<std::string, Vertex> index;
  std::vector<std::pair<Vertex, Vertex>> edges;
  std::vector<std::size_t> edge_lines;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string kind;
    if (!(tokens >> kind)) continue;
    std::vector<std::string> args;
    for (std::string a; tokens >> a;) args.push_back(a);
    if (kind == "v") {
      if (args.size() != 1) throw DagError(DagError::Kind::Syntax, lineno, "expected 'v <name>'");
      if (!index.emplace(args[0], names.size()).second)
        throw DagError(DagError::Kind::DuplicateVertex, lineno, "duplicate vertex '" + args[0] + "'");
      names.push_back(args[0]);
    } else if (kind == "e") {
      if (args.size() != 2) throw DagError(DagError::Kind::Syntax, lineno, "expected 'e <from> <to>'");
      auto from = index.find(args[0]);
      auto to = index.find(args[1]);
      if (from == index.end() || to == index.end())
        throw DagError(DagError::Kind::UnknownVertex, lineno,
                       "unknown vertex '" + (from == index.end() ? args[0] : args[1]) + "'");
      edges.emplace_back(from->second, to->second);
      edge_lines.push_back(lineno);
    } else {
      throw DagError(DagError::Kind::Syntax, lineno, "unknown directive '" + kind + "'");
    }
  }
  return Dag::build(std::move(names), std::move(edges), edge_lines);
}

std::string serialize_dag(const Dag& g) {
  std::string out;
  for (Vertex v = 0; v < g.size(); ++v) out += "v " + g.name(v) + "\n";
  for (auto [from, to] : g.edges()) out += "e " + g.name(from) + " " + g.name(to) + "\n";
  return out;
}

Dag dag_from_spec(std::string_view spec) {
  auto colon = spec.find(':');
  if (colon == std::string_view::npos) throw Error("graph spec must look like family:param, got '" + std::string(spec) + "'");
  auto family = spec.substr(0, colon);
  auto arg = std::string(spec.substr(colon + 1));
  if (family == "file") {
    std::ifstream in(arg);
    if (!in) throw Error("cannot open DAG file '" + arg + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_dag(buf.str());
  }
  std::size_t pos = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(arg, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != arg.size()) throw Error("bad graph parameter '" + arg + "'");
  if (family == "pyramid") return build_pyramid(value);
  if (family == "tree") return build_binary_tree(value);
  if (family == "path") return build_path(value);
  throw Error("unknown graph family '" + std::string(family) + "'");
}

}  // namespace peblab
