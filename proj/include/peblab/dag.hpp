#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "peblab/error.hpp"

namespace peblab {

using Vertex = std::size_t;

class DagError : public Error {
 public:
  enum class Kind { Cycle, MultipleSinks, NoVertices, DuplicateVertex, UnknownVertex, DuplicateEdge, Syntax };
  DagError(Kind kind, std::size_t line, const std::string& what)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), kind_(kind), line_(line) {}
  Kind kind() const { return kind_; }
  std::size_t line() const { return line_; }

 private:
  Kind kind_;
  std::size_t line_;
};

// Immutable directed acyclic graph with a unique sink. Vertices are numbered
// in declaration order, which is also the canonical vertex order.
class Dag {
 public:
  // Validates acyclicity, the unique sink and unique names. `lines` optionally
  // gives source line numbers for edges so errors can point at them.
  static Dag build(std::vector<std::string> names, std::vector<std::pair<Vertex, Vertex>> edges,
                   std::span<const std::size_t> edge_lines = {});

  std::size_t size() const { return names_.size(); }
  const std::string& name(Vertex v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Vertex> find(std::string_view name) const;

  std::span<const Vertex> preds(Vertex v) const { return preds_.at(v); }
  std::span<const Vertex> succs(Vertex v) const { return succs_.at(v); }
  const std::vector<std::pair<Vertex, Vertex>>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  bool is_source(Vertex v) const { return preds_.at(v).empty(); }
  std::vector<Vertex> sources() const;
  Vertex sink() const { return sink_; }
  std::size_t max_indegree() const { return max_indegree_; }

  // Kahn order, ties broken by vertex name.
  const std::vector<Vertex>& topological_order() const { return topo_; }
  std::size_t topo_rank(Vertex v) const { return topo_rank_.at(v); }
  // True iff a directed path of length >= 1 leads from `from` to `to`.
  bool reaches(Vertex from, Vertex to) const;

  friend bool operator==(const Dag&, const Dag&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::pair<Vertex, Vertex>> edges_;
  std::vector<std::vector<Vertex>> preds_, succs_;
  std::vector<Vertex> topo_;
  std::vector<std::size_t> topo_rank_;
  std::vector<std::vector<bool>> reach_;
  Vertex sink_ = 0;
  std::size_t max_indegree_ = 0;
};

// Pyramid of the given height; layer k from the sink has k+1 vertices and
// every non-source has its two neighbours in the layer below as predecessors.
// Up to 26 vertices are named with the last letters of the alphabet bottom-up
// (height 2 gives u..z); larger pyramids use "p<layer>_<index>".
Dag build_pyramid(std::size_t height);
// Complete binary tree directed towards the root "root"; children are named by
// their path from the root ("l", "r", "ll", "lr", ...).
Dag build_binary_tree(std::size_t height);
// v1 -> v2 -> ... -> vn.
Dag build_path(std::size_t n);

// Line-oriented DAG format: "v <name>", "e <from> <to>", '#' comments.
Dag parse_dag(std::string_view text);
std::string serialize_dag(const Dag& g);

// "pyramid:H", "tree:H", "path:N" or "file:<path>".
Dag dag_from_spec(std::string_view spec);

}  // namespace peblab
