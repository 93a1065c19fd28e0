#include "peblab/boolfunc.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <unordered_set>

namespace peblab {
namespace {

unsigned parse_uint(std::string_view text, std::string_view literal) {
  if (text.empty() || text.size() > 6 || !std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw Error("bad number in function literal '" + std::string(literal) + "'");
  return static_cast<unsigned>(std::stoul(std::string(text)));
}

void check_arity(unsigned d) {
  if (d < 1 || d > BooleanFunction::kMaxArity)
    throw Error("function arity must be between 1 and " + std::to_string(BooleanFunction::kMaxArity));
}

template <class Pred>
BooleanFunction tabulate(unsigned d, std::string name, Pred pred) {
  check_arity(d);
  std::vector<bool> table(std::size_t{1} << d);
  for (std::uint32_t a = 0; a < table.size(); ++a) table[a] = pred(a);
  return BooleanFunction(d, std::move(table), std::move(name));
}

}  // namespace

std::vector<LocalClause> prime_implicates(const std::vector<bool>& models, unsigned m) {
  if (m > 24) throw Error("prime implicate computation limited to 24 variables");
  if (models.size() != (std::size_t{1} << m)) throw Error("model table has the wrong size");
  const std::uint32_t full = (1u << m) - 1;
  auto key = [](std::uint32_t fixed, std::uint32_t value) { return (std::uint64_t{fixed} << 32) | value; };
  std::unordered_set<std::uint64_t> cur;
  for (std::uint32_t a = 0; a < models.size(); ++a)
    if (!models[a]) cur.insert(key(full, a));
  std::vector<LocalClause> out;
  while (!cur.empty()) {
    std::unordered_set<std::uint64_t> next;
    for (std::uint64_t c : cur) {
      auto fixed = static_cast<std::uint32_t>(c >> 32);
      auto value = static_cast<std::uint32_t>(c);
      bool merged = false;
      for (std::uint32_t bits = fixed; bits; bits &= bits - 1) {
        std::uint32_t bit = bits & (~bits + 1);
        if (cur.count(key(fixed, value ^ bit))) {
          merged = true;
          next.insert(key(fixed & ~bit, value & ~bit));
        }
      }
      if (!merged) out.push_back({fixed, value & fixed});
    }
    cur = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

BooleanFunction::BooleanFunction(unsigned arity, std::vector<bool> table, std::string name)
    : arity_(arity), table_(std::move(table)), name_(std::move(name)) {
  check_arity(arity);
  if (table_.size() != (std::size_t{1} << arity)) throw Error("truth table size must be 2^arity");
  if (name_.empty()) {
    std::string hex;
    for (std::size_t i = table_.size(); i > 0;) {
      unsigned nibble = 0;
      std::size_t lo = i >= 4 ? i - 4 : 0;
      for (std::size_t j = i; j-- > lo;) nibble = nibble << 1 | (table_[j] ? 1u : 0u);
      hex += "0123456789abcdef"[nibble];
      i = lo;
    }
    name_ = "tt:" + std::to_string(arity) + ":" + hex;
  }
}

BooleanFunction BooleanFunction::or_fn(unsigned d) {
  return tabulate(d, "or:" + std::to_string(d), [](std::uint32_t a) { return a != 0; });
}

BooleanFunction BooleanFunction::xor_fn(unsigned d) {
  return tabulate(d, "xor:" + std::to_string(d), [](std::uint32_t a) { return std::popcount(a) % 2 == 1; });
}

BooleanFunction BooleanFunction::threshold(unsigned d, unsigned k) {
  return tabulate(d, "thr:" + std::to_string(d) + ":" + std::to_string(k),
                  [k](std::uint32_t a) { return static_cast<unsigned>(std::popcount(a)) >= k; });
}

BooleanFunction BooleanFunction::majority(unsigned n) {
  if (n % 2 == 0) throw Error("majority needs an odd number of inputs");
  auto f = threshold(n, n / 2 + 1);
  return BooleanFunction(n, f.table(), "maj:" + std::to_string(n));
}

BooleanFunction BooleanFunction::from_hex(unsigned arity, std::string_view hex) {
  check_arity(arity);
  std::vector<bool> table(std::size_t{1} << arity, false);
  std::size_t bit = 0;
  for (auto it = hex.rbegin(); it != hex.rend(); ++it) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(*it)));
    unsigned v = 0;
    if (c >= '0' && c <= '9') v = static_cast<unsigned>(c - '0');
    else if (c >= 'a' && c <= 'f') v = static_cast<unsigned>(c - 'a' + 10);
    else throw Error("bad hex digit in truth table '" + std::string(hex) + "'");
    for (unsigned j = 0; j < 4; ++j, ++bit) {
      bool set = (v >> j) & 1;
      if (bit < table.size()) table[bit] = set;
      else if (set) throw Error("truth table '" + std::string(hex) + "' is too long for arity " + std::to_string(arity));
    }
  }
  return BooleanFunction(arity, std::move(table));
}

BooleanFunction BooleanFunction::parse(std::string_view literal) {
  std::vector<std::string_view> parts;
  for (std::size_t start = 0;;) {
    auto colon = literal.find(':', start);
    parts.push_back(literal.substr(start, colon == std::string_view::npos ? colon : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  const auto kind = parts[0];
  if (kind == "or" && parts.size() == 2) return or_fn(parse_uint(parts[1], literal));
  if (kind == "xor" && parts.size() == 2) return xor_fn(parse_uint(parts[1], literal));
  if (kind == "maj" && parts.size() == 2) return majority(parse_uint(parts[1], literal));
  if (kind == "thr" && parts.size() == 3) return threshold(parse_uint(parts[1], literal), parse_uint(parts[2], literal));
  if (kind == "tt" && parts.size() == 3) return from_hex(parse_uint(parts[1], literal), parts[2]);
  throw Error("unknown function literal '" + std::string(literal) + "'");
}

bool BooleanFunction::is_constant() const {
  return std::all_of(table_.begin(), table_.end(), [&](bool b) { return b == table_.front(); });
}

std::vector<Clause> canonical_clauses(const BooleanFunction& f, std::span<const Var> vars, Polarity polarity) {
  if (f.is_constant()) throw ConstantFunction("function " + f.name() + " is constant");
  if (vars.size() != f.arity()) throw Error("variable tuple does not match the function's arity");
  std::vector<bool> models = f.table();
  if (polarity == Polarity::Negative) models.flip();
  std::vector<Clause> out;
  for (const auto& lc : prime_implicates(models, f.arity())) {
    std::vector<Lit> lits;
    for (unsigned i = 0; i < f.arity(); ++i)
      if (lc.mask >> i & 1) lits.emplace_back(vars[i], !(lc.neg >> i & 1));
    out.emplace_back(std::move(lits));
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_k_nonauthoritarian(const BooleanFunction& f, unsigned k) {
  const unsigned d = f.arity();
  if (k >= d) return false;  // a full assignment fixes the value
  const std::uint32_t n = 1u << d;
  std::vector<std::uint8_t> seen(n);
  for (std::uint32_t mask = 0; mask < n; ++mask) {
    if (static_cast<unsigned>(std::popcount(mask)) > k) continue;
    std::fill(seen.begin(), seen.end(), 0);
    for (std::uint32_t a = 0; a < n; ++a) seen[a & mask] |= f(a) ? 2 : 1;
    for (std::uint32_t a = 0; a < n; ++a)
      if ((a & ~mask) == 0 && seen[a] != 3) return false;
  }
  return true;
}

Substitution Substitution::identity() { return Substitution(); }

Substitution::Substitution(BooleanFunction f) : f_(std::move(f)) {
  if (f_->is_constant()) throw ConstantFunction("function " + f_->name() + " is constant");
  pos_ = prime_implicates(f_->table(), f_->arity());
  auto flipped = f_->table();
  flipped.flip();
  neg_ = prime_implicates(flipped, f_->arity());
}

Substitution Substitution::parse(std::string_view literal) {
  if (literal == "none" || literal == "id") return identity();
  return Substitution(BooleanFunction::parse(literal));
}

const BooleanFunction& Substitution::function() const {
  if (!f_) throw Error("identity substitution has no function");
  return *f_;
}

std::string Substitution::name() const { return f_ ? f_->name() : "none"; }

std::vector<Var> Substitution::block(Var x) const {
  if (!f_) return {x};
  std::vector<Var> out;
  for (unsigned i = 1; i <= f_->arity(); ++i) out.push_back(Var::named(x.name() + "#" + std::to_string(i)));
  return out;
}

std::optional<Var> Substitution::base_of(Var v) const {
  if (!f_) return v;
  const auto& name = v.name();
  auto hash = name.rfind('#');
  if (hash == std::string::npos || hash == 0 || hash + 1 == name.size()) return std::nullopt;
  for (std::size_t i = hash + 1; i < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return std::nullopt;
  auto index = std::stoul(name.substr(hash + 1));
  if (index < 1 || index > f_->arity()) return std::nullopt;
  return Var::named(name.substr(0, hash));
}

std::vector<Clause> Substitution::clauses_for(Lit l) const {
  if (!f_) return {Clause{l}};
  auto vars = block(l.var());
  std::vector<Clause> out;
  for (const auto& lc : local_clauses(l.positive())) {
    std::vector<Lit> lits;
    for (unsigned i = 0; i < f_->arity(); ++i)
      if (lc.mask >> i & 1) lits.emplace_back(vars[i], !(lc.neg >> i & 1));
    out.emplace_back(std::move(lits));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace peblab
