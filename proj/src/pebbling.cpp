#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <iterator>
#include <map>
#include <unordered_map>

#include "peblab/pebbling.hpp"

namespace peblab {
namespace {

bool subset(const VertexSet& a, const VertexSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

bool disjoint(const VertexSet& a, const VertexSet& b) {
  for (Vertex v : a)
    if (b.count(v)) return false;
  return true;
}

VertexSet pred_set(const Dag& g, Vertex v) {
  auto p = g.preds(v);
  return VertexSet(p.begin(), p.end());
}

void check_range(const Dag& g, const VertexSet& s, std::size_t t) {
  for (Vertex v : s)
    if (v >= g.size()) throw IllegalMove(t, "vertex " + std::to_string(v) + " is not in the graph");
}

std::size_t bw_space(const BwConfiguration& c) { return c.black.size() + c.white.size(); }

}  // namespace

// ---------------------------------------------------------------------------

PebblingCost validate_bw(const Dag& g, const BwPebbling& p, bool black_only) {
  if (p.steps.empty()) throw WrongEndpoints("pebbling has no configurations");
  PebblingCost cost;
  for (std::size_t t = 0; t < p.steps.size(); ++t) {
    const auto& c = p.steps[t];
    check_range(g, c.black, t);
    check_range(g, c.white, t);
    if (!disjoint(c.black, c.white)) throw IllegalMove(t, "vertex carries both a black and a white pebble");
    if (black_only && !c.white.empty()) throw WhitePebbleInBlackOnly(t);
    cost.space = std::max(cost.space, bw_space(c));
  }
  if (!p.steps.front().black.empty() || !p.steps.front().white.empty())
    throw WrongEndpoints("pebbling must start from the empty configuration");

  for (std::size_t t = 1; t < p.steps.size(); ++t) {
    const auto& a = p.steps[t - 1];
    const auto& b = p.steps[t];
    VertexSet occupied = set_union(a.black, a.white);
    auto preds_covered = [&](Vertex v) {
      for (Vertex u : g.preds(v))
        if (!occupied.count(u)) return false;
      return true;
    };
    const bool same_white = a.white == b.white;
    const bool same_black = a.black == b.black;
    if (same_white && b.black.size() == a.black.size() + 1 && subset(a.black, b.black)) {
      Vertex v = 0;
      for (Vertex x : b.black)
        if (!a.black.count(x)) v = x;
      if (!preds_covered(v)) throw IllegalMove(t, "rule 1: black placement on " + g.name(v) + " with an unpebbled predecessor");
    } else if (same_white && a.black.size() == b.black.size() + 1 && subset(b.black, a.black)) {
      // rule 2: black removal is always allowed
    } else if (same_black && b.white.size() == a.white.size() + 1 && subset(a.white, b.white)) {
      // rule 3: white placement is always allowed
    } else if (same_black && a.white.size() == b.white.size() + 1 && subset(b.white, a.white)) {
      Vertex v = 0;
      for (Vertex x : a.white)
        if (!b.white.count(x)) v = x;
      if (!preds_covered(v)) throw IllegalMove(t, "rule 4: white removal from " + g.name(v) + " with an unpebbled predecessor");
    } else {
      throw IllegalMove(t, "configuration must change by exactly one pebble");
    }
  }
  const auto& last = p.steps.back();
  if (last.black != VertexSet{g.sink()} || !last.white.empty())
    throw WrongEndpoints("pebbling must end with a single black pebble on the sink " + g.name(g.sink()));
  cost.time = p.steps.size() - 1;
  return cost;
}

namespace {

struct MaskState {
  std::uint64_t black = 0, white = 0;
  friend bool operator==(const MaskState&, const MaskState&) = default;
};
struct MaskHash {
  std::size_t operator()(const MaskState& s) const noexcept {
    return std::hash<std::uint64_t>()(s.black * 0x9E3779B97F4A7C15ull ^ s.white);
  }
};

VertexSet from_mask(std::uint64_t m) {
  VertexSet out;
  for (Vertex v = 0; m; ++v, m >>= 1)
    if (m & 1) out.insert(v);
  return out;
}

PriceResult price_search(const Dag& g, bool allow_white, std::size_t budget) {
  const std::size_t n = g.size();
  if (n > 64) throw Error("exhaustive pebbling search supports at most 64 vertices");
  std::vector<std::uint64_t> pred_mask(n, 0);
  for (Vertex v = 0; v < n; ++v)
    for (Vertex u : g.preds(v)) pred_mask[v] |= std::uint64_t{1} << u;
  const MaskState goal{std::uint64_t{1} << g.sink(), 0};

  PriceResult result;
  for (std::size_t s = 1; s <= n; ++s) {
    std::unordered_map<MaskState, MaskState, MaskHash> parent;
    std::deque<MaskState> queue;
    const MaskState start{};
    parent.emplace(start, start);
    queue.push_back(start);
    bool found = false;
    while (!queue.empty() && !found) {
      MaskState cur = queue.front();
      queue.pop_front();
      if (++result.visited > budget) throw BudgetExceeded("pebbling price search", result.visited);
      const std::uint64_t occ = cur.black | cur.white;
      const auto count = static_cast<std::size_t>(std::popcount(occ));
      std::vector<MaskState> next;
      // removals first, then placements; vertex order within each kind
      for (Vertex v = 0; v < n; ++v)
        if (cur.black >> v & 1) next.push_back({cur.black & ~(std::uint64_t{1} << v), cur.white});
      if (allow_white)
        for (Vertex v = 0; v < n; ++v)
          if ((cur.white >> v & 1) && (pred_mask[v] & occ) == pred_mask[v])
            next.push_back({cur.black, cur.white & ~(std::uint64_t{1} << v)});
      if (count < s) {
        for (Vertex v = 0; v < n; ++v)
          if (!(occ >> v & 1) && (pred_mask[v] & occ) == pred_mask[v])
            next.push_back({cur.black | std::uint64_t{1} << v, cur.white});
        if (allow_white)
          for (Vertex v = 0; v < n; ++v)
            if (!(occ >> v & 1)) next.push_back({cur.black, cur.white | std::uint64_t{1} << v});
      }
      for (const auto& nx : next) {
        if (!parent.emplace(nx, cur).second) continue;
        if (nx == goal) {
          found = true;
          break;
        }
        queue.push_back(nx);
      }
    }
    if (found) {
      std::vector<MaskState> chain{goal};
      while (!(chain.back() == start)) chain.push_back(parent.at(chain.back()));
      std::reverse(chain.begin(), chain.end());
      result.price = s;
      for (const auto& m : chain) result.witness.steps.push_back({from_mask(m.black), from_mask(m.white)});
      return result;
    }
  }
  throw Error("no complete pebbling found");  // unreachable: s = n always succeeds
}

}  // namespace

PriceResult optimal_black_price(const Dag& g, std::size_t budget) { return price_search(g, false, budget); }

PriceResult optimal_bw_price(const Dag& g, std::size_t budget) { return price_search(g, true, budget); }

BwPebbling greedy_black_strategy(const Dag& g) {
  BwPebbling p;
  BwConfiguration cur;
  p.steps.push_back(cur);
  std::function<void(Vertex)> pebble = [&](Vertex v) {
    if (cur.black.count(v)) return;
    const VertexSet before = cur.black;
    for (Vertex u : g.preds(v)) pebble(u);
    cur.black.insert(v);
    p.steps.push_back(cur);
    for (Vertex u : g.preds(v))
      if (!before.count(u) && cur.black.count(u)) {
        cur.black.erase(u);
        p.steps.push_back(cur);
      }
  };
  pebble(g.sink());
  return p;
}

// ---------------------------------------------------------------------------

LabelledCost validate_labelled(const Dag& g, const LabelledPebbling& p) {
  if (p.steps.empty()) throw WrongEndpoints("pebbling has no configurations");
  if (!p.steps.front().empty()) throw WrongEndpoints("labelled pebbling must start empty");
  if (p.steps.back() != LabelledConfiguration{SubConfig{g.sink(), {}}})
    throw WrongEndpoints("labelled pebbling must end with <" + g.name(g.sink()) + ", {}>");
  LabelledCost cost;
  for (std::size_t t = 0; t < p.steps.size(); ++t) {
    VertexSet covered;
    for (const auto& s : p.steps[t]) {
      check_range(g, s.support, t);
      if (s.black >= g.size()) throw IllegalMove(t, "vertex out of range");
      if (s.support.count(s.black)) throw IllegalMove(t, "subconfiguration supports its own black vertex");
      covered.insert(s.black);
      covered.insert(s.support.begin(), s.support.end());
      cost.max_support = std::max(cost.max_support, s.support.size());
    }
    cost.space = std::max(cost.space, covered.size());
    cost.max_subconfigs = std::max(cost.max_subconfigs, p.steps[t].size());
  }
  for (std::size_t t = 1; t < p.steps.size(); ++t) {
    const auto& a = p.steps[t - 1];
    const auto& b = p.steps[t];
    std::vector<SubConfig> added, removed;
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(added));
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(removed));
    if (added.empty() && removed.size() == 1) continue;  // erasure
    if (added.size() != 1 || !removed.empty())
      throw IllegalMove(t, "configuration must gain or lose exactly one subconfiguration");
    const SubConfig& s = added.front();
    if (s.support == pred_set(g, s.black)) continue;  // introduction
    bool merged = false;
    for (const auto& x : a) {
      if (x.black != s.black) continue;
      for (const auto& y : a) {
        if (!x.support.count(y.black) || y.support.count(x.black)) continue;
        VertexSet u = set_union(x.support, y.support);
        u.erase(y.black);
        if (u == s.support) merged = true;
      }
    }
    if (!merged) {
      std::string desc = "<" + g.name(s.black) + ", {";
      bool first = true;
      for (Vertex v : s.support) {
        desc += (first ? "" : ",") + g.name(v);
        first = false;
      }
      throw IllegalMove(t, "subconfiguration " + desc + "}> is neither an introduction nor a merger");
    }
  }
  cost.time = p.steps.size() - 1;
  return cost;
}

LabelledPebbling labelled_from_black(const Dag& g, const BwPebbling& black) {
  validate_bw(g, black, true);
  LabelledPebbling out;
  LabelledConfiguration cur;
  out.steps.push_back(cur);
  for (std::size_t t = 1; t < black.steps.size(); ++t) {
    const auto& a = black.steps[t - 1].black;
    const auto& b = black.steps[t].black;
    if (b.size() < a.size()) {
      for (Vertex v : a)
        if (!b.count(v)) cur.erase(SubConfig{v, {}});
      out.steps.push_back(cur);
      continue;
    }
    Vertex v = 0;
    for (Vertex x : b)
      if (!a.count(x)) v = x;
    SubConfig sc{v, pred_set(g, v)};
    cur.insert(sc);
    out.steps.push_back(cur);
    while (!sc.support.empty()) {
      SubConfig next{v, sc.support};
      next.support.erase(next.support.begin());
      bool fresh = cur.insert(next).second;
      if (fresh) out.steps.push_back(cur);
      cur.erase(sc);
      out.steps.push_back(cur);
      sc = next;
    }
  }
  return out;
}

BoundedSpaceReport check_bounded_space_consequence(const Dag& g, const LabelledPebbling& p, std::size_t budget) {
  BoundedSpaceReport r;
  r.cost = validate_labelled(g, p);
  r.bw_price = optimal_bw_price(g, budget).price;
  r.bound = r.cost.max_subconfigs * (r.cost.max_support + 1);
  r.price_within_space = r.bw_price <= r.cost.space;
  r.space_within_bound = r.cost.space <= r.bound;
  return r;
}

// ---------------------------------------------------------------------------

std::size_t blob_black_cost(const BlobConfiguration& c, std::size_t budget) {
  std::vector<VertexSet> blobs;
  for (const auto& s : c) blobs.push_back(s.blob);
  std::sort(blobs.begin(), blobs.end());
  blobs.erase(std::unique(blobs.begin(), blobs.end()), blobs.end());
  std::map<VertexSet, std::size_t> memo;
  std::size_t visited = 0;
  std::function<std::size_t(const VertexSet&)> best = [&](const VertexSet& covered) -> std::size_t {
    if (auto it = memo.find(covered); it != memo.end()) return it->second;
    if (++visited > budget) throw BudgetExceeded("blob black cost search", visited);
    std::size_t m = 0;
    for (const auto& b : blobs)
      if (!subset(b, covered)) m = std::max(m, 1 + best(set_union(covered, b)));
    memo.emplace(covered, m);
    return m;
  };
  return best({});
}

std::size_t blob_white_cost(const Dag& g, const BlobConfiguration& c) {
  VertexSet charged;
  for (const auto& s : c)
    for (Vertex w : s.white) {
      bool below_all = true;
      for (Vertex b : s.blob)
        if (!g.reaches(w, b)) below_all = false;
      if (below_all) charged.insert(w);
    }
  return charged.size();
}

std::size_t blob_space(const Dag& g, const BlobConfiguration& c, std::size_t budget) {
  return blob_black_cost(c, budget) + blob_white_cost(g, c);
}

PebblingCost validate_blob(const Dag& g, const BlobPebbling& p, std::size_t budget) {
  if (p.steps.empty()) throw WrongEndpoints("pebbling has no configurations");
  if (!p.steps.front().empty()) throw WrongEndpoints("blob pebbling must start empty");
  if (p.steps.back() != BlobConfiguration{BlobSubConfig{{g.sink()}, {}}})
    throw WrongEndpoints("blob pebbling must end with <{" + g.name(g.sink()) + "}, {}>");
  PebblingCost cost;
  for (std::size_t t = 0; t < p.steps.size(); ++t) {
    for (const auto& s : p.steps[t]) {
      check_range(g, s.blob, t);
      check_range(g, s.white, t);
      if (s.blob.empty()) throw IllegalMove(t, "empty blob");
      if (!disjoint(s.blob, s.white)) throw IllegalMove(t, "blob and its white support overlap");
    }
    cost.space = std::max(cost.space, blob_space(g, p.steps[t], budget));
  }
  for (std::size_t t = 1; t < p.steps.size(); ++t) {
    const auto& a = p.steps[t - 1];
    const auto& b = p.steps[t];
    std::vector<BlobSubConfig> added, removed;
    std::set_difference(b.begin(), b.end(), a.begin(), a.end(), std::back_inserter(added));
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(removed));
    if (added.empty() && removed.size() == 1) continue;  // erasure
    if (added.size() != 1 || !removed.empty())
      throw IllegalMove(t, "configuration must gain or lose exactly one subconfiguration");
    const BlobSubConfig& s = added.front();
    if (s.blob.size() == 1 && s.white == pred_set(g, *s.blob.begin())) continue;  // introduction
    bool ok = false;
    for (const auto& x : a) {
      if (subset(x.blob, s.blob) && subset(x.white, s.white)) ok = true;  // inflation
      for (const auto& y : a) {
        if (ok) break;
        for (Vertex v : x.white) {
          if (!y.blob.count(v)) continue;
          VertexSet w1 = x.white, b2 = y.blob;
          w1.erase(v);
          b2.erase(v);
          if (!disjoint(x.blob, y.white)) continue;
          if (set_union(x.blob, b2) == s.blob && set_union(w1, y.white) == s.white) ok = true;
        }
      }
      if (ok) break;
    }
    if (!ok) throw IllegalMove(t, "new blob subconfiguration is not an introduction, merger or inflation");
  }
  cost.time = p.steps.size() - 1;
  return cost;
}

}  // namespace peblab
