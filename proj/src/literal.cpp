#include "peblab/literal.hpp"

#include <cstdlib>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "peblab/error.hpp"

namespace peblab {
namespace {

struct Interner {
  std::shared_mutex mutex;
  std::deque<std::string> names;
  std::unordered_map<std::string_view, std::uint32_t> ids;
};

Interner& interner() {
  static Interner table;
  return table;
}

}  // namespace

Var Var::named(std::string_view name) {
  if (name.empty()) throw Error("empty variable name");
  auto& t = interner();
  {
    std::shared_lock lock(t.mutex);
    if (auto it = t.ids.find(name); it != t.ids.end()) return Var(it->second);
  }
  std::unique_lock lock(t.mutex);
  if (auto it = t.ids.find(name); it != t.ids.end()) return Var(it->second);
  auto id = static_cast<std::uint32_t>(t.names.size());
  t.names.emplace_back(name);
  t.ids.emplace(t.names.back(), id);
  return Var(id);
}

const std::string& Var::name() const {
  auto& t = interner();
  std::shared_lock lock(t.mutex);
  // deque never relocates elements, so the reference outlives the lock
  return t.names.at(id_);
}

bool name_less(Var a, Var b) { return a != b && a.name() < b.name(); }

Lit Lit::parse(std::string_view text) {
  bool positive = true;
  if (!text.empty() && (text.front() == '-' || text.front() == '~')) {
    positive = false;
    text.remove_prefix(1);
  } else if (!text.empty() && text.front() == '+') {
    text.remove_prefix(1);
  }
  if (text.empty()) throw Error("empty literal");
  return {Var::named(text), positive};
}

Var Lit::var() const { return Var(code_ >> 1); }

std::string Lit::str() const { return positive() ? var().name() : "-" + var().name(); }

bool canonical_less(Lit a, Lit b) {
  if (a.var() == b.var()) return a.positive() && !b.positive();
  return name_less(a.var(), b.var());
}

std::size_t default_budget() {
  static const std::size_t budget = [] {
    if (const char* env = std::getenv("PEBLAB_BUDGET")) {
      char* end = nullptr;
      auto value = std::strtoull(env, &end, 10);
      if (end != env && value > 0) return static_cast<std::size_t>(value);
    }
    return static_cast<std::size_t>(10'000'000);
  }();
  return budget;
}

}  // namespace peblab
