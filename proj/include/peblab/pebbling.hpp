#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "peblab/dag.hpp"
#include "peblab/error.hpp"

namespace peblab {

using VertexSet = std::set<Vertex>;

// A transition that matches none of the game's rules. `step` is the 1-based
// index of the offending transition (configuration t-1 -> t).
class IllegalMove : public Error {
 public:
  IllegalMove(std::size_t step, const std::string& rule)
      : Error("illegal move at step " + std::to_string(step) + ": " + rule), step_(step), rule_(rule) {}
  std::size_t step() const { return step_; }
  const std::string& rule() const { return rule_; }

 private:
  std::size_t step_;
  std::string rule_;
};

class WrongEndpoints : public Error {
 public:
  using Error::Error;
};

class WhitePebbleInBlackOnly : public Error {
 public:
  WhitePebbleInBlackOnly(std::size_t step)
      : Error("white pebble present at configuration " + std::to_string(step) + " of a black-only pebbling"),
        step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct PebblingCost {
  std::size_t time = 0;
  std::size_t space = 0;
  friend bool operator==(const PebblingCost&, const PebblingCost&) = default;
};

// ---------------------------------------------------------------------------
// Black-white pebble game

struct BwConfiguration {
  VertexSet black;
  VertexSet white;
  friend bool operator==(const BwConfiguration&, const BwConfiguration&) = default;
  friend auto operator<=>(const BwConfiguration&, const BwConfiguration&) = default;
};

struct BwPebbling {
  std::vector<BwConfiguration> steps;
  friend bool operator==(const BwPebbling&, const BwPebbling&) = default;
};

// Checks a complete pebbling move by move. Time is the number of transitions,
// space the largest number of pebbles on the graph at once.
PebblingCost validate_bw(const Dag& g, const BwPebbling& p, bool black_only);

struct PriceResult {
  std::size_t price = 0;
  BwPebbling witness;     // a pebbling of space `price`, shortest among those found first
  std::size_t visited = 0;  // configurations expanded over all space bounds tried
};

// Exact pebbling prices by breadth-first search over configurations, trying
// space bounds 1, 2, ... in turn. Moves are explored removals first, then
// placements, each in vertex order, so witnesses are reproducible.
PriceResult optimal_black_price(const Dag& g, std::size_t budget = default_budget());
PriceResult optimal_bw_price(const Dag& g, std::size_t budget = default_budget());

// Pebbles predecessors recursively in vertex order, places the vertex, then
// drops the predecessors this call introduced.
BwPebbling greedy_black_strategy(const Dag& g);

// ---------------------------------------------------------------------------
// Labelled pebble game

// Black pebble on `black` supported by white pebbles on `support`.
struct SubConfig {
  Vertex black = 0;
  VertexSet support;
  friend bool operator==(const SubConfig&, const SubConfig&) = default;
  friend auto operator<=>(const SubConfig&, const SubConfig&) = default;
};
using LabelledConfiguration = std::set<SubConfig>;

struct LabelledPebbling {
  std::vector<LabelledConfiguration> steps;
};

struct LabelledCost {
  std::size_t time = 0;
  std::size_t space = 0;
  std::size_t max_subconfigs = 0;  // b of the tightest (b, w) bound
  std::size_t max_support = 0;     // w of the tightest (b, w) bound
};

LabelledCost validate_labelled(const Dag& g, const LabelledPebbling& p);

// Renders a complete black pebbling as a labelled one: each placement on v
// introduces <v, pred(v)>, merges away the predecessors one at a time and
// erases the intermediate subconfigurations; each removal erases <v, {}>.
LabelledPebbling labelled_from_black(const Dag& g, const BwPebbling& black);

struct BoundedSpaceReport {
  std::size_t bw_price = 0;
  LabelledCost cost;
  std::size_t bound = 0;  // b * (w + 1)
  bool price_within_space = false;
  bool space_within_bound = false;
  bool holds() const { return price_within_space && space_within_bound; }
};

// Checks the price consequences of simulating a labelled pebbling by a
// black-white one: BW-Peb(G) <= space(L) and space(L) <= b(w+1).
BoundedSpaceReport check_bounded_space_consequence(const Dag& g, const LabelledPebbling& p,
                                                   std::size_t budget = default_budget());

// ---------------------------------------------------------------------------
// Blob-pebble game

struct BlobSubConfig {
  VertexSet blob;
  VertexSet white;
  friend bool operator==(const BlobSubConfig&, const BlobSubConfig&) = default;
  friend auto operator<=>(const BlobSubConfig&, const BlobSubConfig&) = default;
};
using BlobConfiguration = std::set<BlobSubConfig>;

struct BlobPebbling {
  std::vector<BlobConfiguration> steps;
};

// Largest m such that some ordering B_1..B_m of distinct blobs has strictly
// expanding unions. Exhaustive search memoized on the covered vertex set.
std::size_t blob_black_cost(const BlobConfiguration& c, std::size_t budget = default_budget());
// Size of the union over subconfigurations of whites lying below every blob vertex.
std::size_t blob_white_cost(const Dag& g, const BlobConfiguration& c);
std::size_t blob_space(const Dag& g, const BlobConfiguration& c, std::size_t budget = default_budget());

PebblingCost validate_blob(const Dag& g, const BlobPebbling& p, std::size_t budget = default_budget());

// ---------------------------------------------------------------------------
// Trace files

enum class GameKind { BlackWhite, Labelled, Blob };

struct PebblingTrace {
  GameKind kind = GameKind::BlackWhite;
  BwPebbling bw;
  LabelledPebbling labelled;
  BlobPebbling blob;
};

// Line format. Optional header "game bw|labelled|blob" (default bw).
//   bw:       B+ v | B- v | W+ v | W- v
//   labelled: I v | M i j | E i
//   blob:     I v | M i j [v] | F i <blob...> / <white...> | E i
// Subconfigurations are referred to by the 1-based number of the move that
// created them. Moves are applied literally; rule checking is left to the
// validators, except that references must name live subconfigurations.
PebblingTrace parse_pebbling_trace(const Dag& g, std::string_view text);

std::string write_bw_trace(const Dag& g, const BwPebbling& p);
std::string write_labelled_trace(const Dag& g, const LabelledPebbling& p);
std::string write_blob_trace(const Dag& g, const BlobPebbling& p);

}  // namespace peblab
