#include "urmflow/symstate.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>

#include "overloaded.hpp"
#include "urmflow/error.hpp"

namespace urmflow::cfg {

using detail::overloaded;

namespace {

Value checked_add(Value a, Value b) {
  if (a > std::numeric_limits<Value>::max() - b) {
    throw OverflowError("state value overflowed 64 bits");
  }
  return a + b;
}

/// Replaces every occurrence of omega_symbol + o by replacement + o.
void bind(std::vector<Atom>& atoms, std::uint32_t symbol, Atom replacement) {
  for (auto& a : atoms) {
    if (!a.is_const() && a.symbol == symbol) {
      a = Atom{replacement.symbol, checked_add(replacement.offset, a.offset)};
    }
  }
}

void require_var(Var v, std::size_t size, const Command& c) {
  if (v == 0 || v > size) {
    throw ContractError("command " + to_string(c) + " mentions x" +
                        std::to_string(v) + " but states have " +
                        std::to_string(size) + " coordinate(s)");
  }
}

/// Restricts the instances of `atoms` to those where lhs = rhs.
bool unify(std::vector<Atom>& atoms, Atom lhs, Atom rhs) {
  if (lhs.is_const() && rhs.is_const()) return lhs.offset == rhs.offset;
  if (lhs.is_const()) std::swap(lhs, rhs);
  // lhs is symbolic from here on.
  if (rhs.is_const()) {
    if (rhs.offset < lhs.offset) return false;
    bind(atoms, lhs.symbol, Atom::constant(rhs.offset - lhs.offset));
    return true;
  }
  if (lhs.symbol == rhs.symbol) return lhs.offset == rhs.offset;
  // omega_l + o_l = omega_r + o_r: eliminate the symbol carrying the smaller
  // offset, expressing it through the other one with a nonnegative shift.
  if (lhs.offset >= rhs.offset) {
    bind(atoms, rhs.symbol, Atom::sym(lhs.symbol, lhs.offset - rhs.offset));
  } else {
    bind(atoms, lhs.symbol, Atom::sym(rhs.symbol, rhs.offset - lhs.offset));
  }
  return true;
}

}  // namespace

SymState::SymState(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  std::map<std::uint32_t, std::uint32_t> rename;
  for (auto& a : atoms_) {
    if (a.is_const()) continue;
    auto [it, inserted] =
        rename.emplace(a.symbol, static_cast<std::uint32_t>(rename.size() + 1));
    a.symbol = it->second;
  }
  symbols_ = static_cast<std::uint32_t>(rename.size());
}

SymState SymState::ground(std::span<const Value> values) {
  std::vector<Atom> atoms;
  atoms.reserve(values.size());
  for (auto v : values) atoms.push_back(Atom::constant(v));
  return SymState(std::move(atoms));
}

std::vector<Value> SymState::values() const {
  if (!is_ground()) throw ContractError("values() of a symbolic state");
  std::vector<Value> out;
  out.reserve(atoms_.size());
  for (const auto& a : atoms_) out.push_back(a.offset);
  return out;
}

std::string to_string(const Atom& a) {
  if (a.is_const()) return std::to_string(a.offset);
  std::string s = "ω" + std::to_string(a.symbol);
  if (a.offset != 0) s += "+" + std::to_string(a.offset);
  return s;
}

std::string to_string(const SymState& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s[i]);
  }
  return out + ")";
}

std::string to_string(const StateSet& s) {
  if (s.empty()) return "∅";
  std::string out = "{";
  bool first = true;
  for (const auto& st : s) {
    if (!first) out += ", ";
    first = false;
    out += to_string(st);
  }
  return out + "}";
}

std::optional<SymState> apply(const Command& c, const SymState& s) {
  std::vector<Atom> atoms = s.atoms();
  const auto size = atoms.size();
  bool keep = std::visit(
      overloaded{
          [&](const Zero& z) {
            require_var(z.n, size, c);
            atoms[z.n - 1] = Atom::constant(0);
            return true;
          },
          [&](const Copy& cp) {
            require_var(cp.n, size, c);
            require_var(cp.m, size, c);
            atoms[cp.n - 1] = atoms[cp.m - 1];
            return true;
          },
          [&](const Succ& sc) {
            require_var(sc.n, size, c);
            require_var(sc.m, size, c);
            Atom a = atoms[sc.m - 1];
            a.offset = checked_add(a.offset, 1);
            atoms[sc.n - 1] = a;
            return true;
          },
          [&](const GuardVarEq& g) {
            require_var(g.n, size, c);
            require_var(g.m, size, c);
            return unify(atoms, atoms[g.n - 1], atoms[g.m - 1]);
          },
          [&](const GuardConstEq& g) {
            require_var(g.n, size, c);
            return unify(atoms, atoms[g.n - 1], Atom::constant(g.v));
          },
      },
      c);
  if (!keep) return std::nullopt;
  return SymState(std::move(atoms));
}

StateSet transfer(const Command& c, const StateSet& s) {
  StateSet out;
  for (const auto& st : s) {
    if (auto r = apply(c, st)) out.insert(std::move(*r));
  }
  return out;
}

SymState project(const SymState& s, std::size_t k, Padding pad) {
  std::vector<Atom> atoms = s.atoms();
  if (k <= atoms.size()) {
    atoms.resize(k);
  } else {
    std::uint32_t next = s.symbol_count() + 1;
    while (atoms.size() < k) {
      atoms.push_back(pad == Padding::Zero ? Atom::constant(0)
                                           : Atom::sym(next++));
    }
  }
  return SymState(std::move(atoms));
}

StateSet project(const StateSet& s, std::size_t k, Padding pad) {
  StateSet out;
  for (const auto& st : s) out.insert(project(st, k, pad));
  return out;
}

Cardinality cardinality(const StateSet& s) {
  for (const auto& st : s) {
    if (!st.is_ground()) return {true, 0};
  }
  return {false, s.size()};
}

bool subsumes(const SymState& general, const SymState& specific) {
  if (general.size() != specific.size()) return false;
  std::vector<std::optional<Atom>> binding(general.symbol_count() + 1);
  for (std::size_t i = 0; i < general.size(); ++i) {
    const Atom& g = general[i];
    const Atom& s = specific[i];
    if (g.is_const()) {
      if (g != s) return false;
      continue;
    }
    if (s.offset < g.offset) return false;
    Atom image{s.symbol, s.offset - g.offset};
    auto& slot = binding[g.symbol];
    if (!slot) {
      slot = image;
    } else if (*slot != image) {
      return false;
    }
  }
  return true;
}

StateSet ground_set(std::span<const std::vector<Value>> points) {
  StateSet out;
  for (const auto& p : points) out.insert(SymState::ground(p));
  return out;
}

}  // namespace urmflow::cfg
