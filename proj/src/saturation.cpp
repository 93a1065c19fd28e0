#include <algorithm>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "peblab/resolution.hpp"

namespace peblab {

Saturation::Saturation(const std::vector<Clause>& premises, SaturationOptions options) {
  std::unordered_set<Var> vars;
  for (const auto& c : premises)
    for (Lit l : c) vars.insert(l.var());
  if (vars.size() > options.variable_cap)
    throw BudgetExceeded("saturation over " + std::to_string(vars.size()) + " variables, cap " +
                             std::to_string(options.variable_cap),
                         0);

  // given-clause loop, narrowest clause first
  std::set<std::pair<std::size_t, int>> passive;
  auto add = [&](Clause c, int left, int right, Var pivot) {
    if (index_.count(c)) return;
    const int id = static_cast<int>(nodes_.size());
    index_.emplace(c, id);
    passive.emplace(c.width(), id);
    nodes_.push_back({std::move(c), left, right, pivot});
  };
  for (const auto& c : premises) add(c, -1, -1, Var{});

  std::size_t generated = 0;
  while (!passive.empty()) {
    const int g = passive.begin()->second;
    passive.erase(passive.begin());
    const Clause given = nodes_[g].clause;
    if (std::any_of(active_.begin(), active_.end(), [&](int a) { return nodes_[a].clause.subset_of(given); })) continue;
    std::erase_if(active_, [&](int a) { return given.subset_of(nodes_[a].clause); });
    if (given.empty()) {
      active_ = {g};
      break;
    }
    const auto others = active_;
    active_.push_back(g);
    for (int a : others) {
      const Clause other = nodes_[a].clause;
      for (Lit l : given) {
        if (!other.contains(~l)) continue;
        std::vector<Lit> lits;
        for (Lit x : given)
          if (x != l) lits.push_back(x);
        for (Lit x : other)
          if (x != ~l) lits.push_back(x);
        auto r = Clause::make(std::move(lits));
        if (!r) continue;
        if (r->width() > options.max_width) {
          truncated_ = true;
          continue;
        }
        if (++generated > options.budget) throw BudgetExceeded("resolution saturation", generated);
        add(std::move(*r), g, a, l.var());
      }
    }
  }
  std::sort(active_.begin(), active_.end(), [&](int a, int b) { return nodes_[a].clause < nodes_[b].clause; });
}

std::vector<Clause> Saturation::clauses() const {
  std::vector<Clause> out;
  for (int a : active_) out.push_back(nodes_[a].clause);
  return out;
}

bool Saturation::refuted() const { return index_.count(Clause{}) != 0; }

std::optional<Clause> Saturation::witness(const Clause& c) const {
  std::optional<Clause> best;
  for (int a : active_) {
    const Clause& d = nodes_[a].clause;
    if (!d.subset_of(c)) continue;
    if (!best || d.width() < best->width() || (d.width() == best->width() && d < *best)) best = d;
  }
  return best;
}

void Saturation::derive(ProofBuilder& builder, const Clause& target) const {
  if (builder.has(target)) return;
  auto w = witness(target);
  if (!w) throw SaturationFailure("clause " + target.str() + " is not implied by the saturated premises");
  const int root = index_.at(*w);

  // post-order over the part of the derivation not already held
  std::vector<int> order;
  std::unordered_set<int> seen, emitted;
  std::function<void(int)> visit = [&](int n) {
    if (!seen.insert(n).second) return;
    const Node& node = nodes_[n];
    if (builder.has(node.clause)) return;
    if (node.left < 0) {
      if (!builder.target().contains(node.clause))
        throw SaturationFailure("premise " + node.clause.str() + " is neither held nor an axiom");
    } else {
      visit(node.left);
      visit(node.right);
    }
    order.push_back(n);
    emitted.insert(n);
  };
  visit(root);

  std::unordered_map<int, int> uses;
  for (int n : order)
    if (nodes_[n].left >= 0) {
      ++uses[nodes_[n].left];
      ++uses[nodes_[n].right];
    }
  for (int n : order) {
    const Node& node = nodes_[n];
    if (node.left < 0) {
      builder.download(node.clause);
      continue;
    }
    builder.resolve(nodes_[node.left].clause, nodes_[node.right].clause, node.pivot);
    for (int child : {node.left, node.right})
      if (emitted.count(child) && --uses[child] == 0) builder.erase(nodes_[child].clause);
  }
  if (*w != target) {
    builder.weaken(*w, target);
    if (emitted.count(root)) builder.erase(*w);
  }
}

Saturation saturate(const std::vector<Clause>& premises, std::size_t variable_cap) {
  SaturationOptions o;
  o.variable_cap = variable_cap;
  return Saturation(premises, o);
}

std::optional<std::size_t> min_width(const CnfFormula& f, std::size_t cap, std::size_t budget) {
  if (f.contains(Clause{})) return 0;
  SaturationOptions opt;
  opt.variable_cap = std::numeric_limits<std::size_t>::max();
  opt.budget = budget;
  for (std::size_t w = std::max<std::size_t>(f.width(), 1); w <= cap; ++w) {
    opt.max_width = w;
    Saturation s(f.clauses(), opt);
    if (s.refuted()) return w;
    if (!s.truncated()) return std::nullopt;  // full closure without the empty clause
  }
  return std::nullopt;
}

std::optional<std::size_t> min_clause_space(const CnfFormula& f, std::size_t cap, std::size_t budget) {
  if (f.contains(Clause{})) return cap >= 1 ? std::optional<std::size_t>(1) : std::nullopt;
  std::vector<Clause> universe;
  std::map<Clause, int> id;
  auto intern = [&](const Clause& c) {
    auto [it, fresh] = id.emplace(c, static_cast<int>(universe.size()));
    if (fresh) universe.push_back(c);
    return it->second;
  };
  std::vector<int> axioms;
  for (const auto& c : f) axioms.push_back(intern(c));
  std::size_t visited = 0;
  for (std::size_t s = 1; s <= cap; ++s) {
    std::set<std::vector<int>> seen{{}};
    std::vector<std::vector<int>> frontier{{}};
    while (!frontier.empty()) {
      std::vector<std::vector<int>> next;
      auto push = [&](std::vector<int> state) {
        std::sort(state.begin(), state.end());
        if (!seen.insert(state).second) return;
        if (++visited > budget) throw BudgetExceeded("clause space search", visited);
        next.push_back(std::move(state));
      };
      for (const auto& state : frontier) {
        for (std::size_t i = 0; i < state.size(); ++i) {
          auto smaller = state;
          smaller.erase(smaller.begin() + static_cast<std::ptrdiff_t>(i));
          push(std::move(smaller));
        }
        if (state.size() >= s) continue;
        auto grow = [&](int c) {
          if (std::binary_search(state.begin(), state.end(), c)) return;
          auto bigger = state;
          bigger.push_back(c);
          push(std::move(bigger));
        };
        for (int a : axioms) grow(a);
        for (std::size_t i = 0; i < state.size(); ++i)
          for (std::size_t j = i + 1; j < state.size(); ++j) {
            const Clause a = universe[state[i]], b = universe[state[j]];
            for (Lit l : a) {
              if (!b.contains(~l)) continue;
              std::vector<Lit> lits;
              for (Lit x : a)
                if (x != l) lits.push_back(x);
              for (Lit x : b)
                if (x != ~l) lits.push_back(x);
              auto res = Clause::make(std::move(lits));
              if (!res) continue;
              if (res->empty()) return s;
              grow(intern(*res));
            }
          }
      }
      frontier = std::move(next);
    }
  }
  return std::nullopt;
}

}  // namespace peblab
