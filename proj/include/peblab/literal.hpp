#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace peblab {

// Propositional variable. Names are opaque strings interned in a process-wide
// table; a Var is just the interned id, so copies and comparisons are cheap.
// Ordering by id is an implementation order; use name_less() for the
// canonical (name) order.
class Var {
 public:
  Var() = default;
  static Var named(std::string_view name);

  const std::string& name() const;
  std::uint32_t id() const { return id_; }

  friend bool operator==(Var, Var) = default;
  friend auto operator<=>(Var, Var) = default;

 private:
  friend class Lit;
  explicit Var(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

bool name_less(Var a, Var b);

class Lit {
 public:
  Lit() = default;
  Lit(Var v, bool positive) : code_((v.id() << 1) | (positive ? 0u : 1u)) {}
  static Lit pos(Var v) { return {v, true}; }
  static Lit neg(Var v) { return {v, false}; }
  // Parses "x", "+x" or "-x".
  static Lit parse(std::string_view text);

  Var var() const;
  bool positive() const { return (code_ & 1u) == 0; }
  Lit operator~() const {
    Lit l;
    l.code_ = code_ ^ 1u;
    return l;
  }
  std::uint32_t code() const { return code_; }
  std::string str() const;

  friend bool operator==(Lit, Lit) = default;
  friend auto operator<=>(Lit, Lit) = default;

 private:
  std::uint32_t code_ = 0;
};

// Canonical literal order: by variable name, positive before negative.
bool canonical_less(Lit a, Lit b);

}  // namespace peblab

template <>
struct std::hash<peblab::Var> {
  std::size_t operator()(peblab::Var v) const noexcept { return v.id(); }
};
template <>
struct std::hash<peblab::Lit> {
  std::size_t operator()(peblab::Lit l) const noexcept { return l.code(); }
};
