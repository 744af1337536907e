#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "urmflow/bacfg.hpp"

namespace urmflow::cfg {

/// A coordinate of a symbolic state: either the constant `offset`
/// (symbol == 0) or omega_symbol + offset, where omega_symbol ranges over
/// all naturals.
struct Atom {
  std::uint32_t symbol = 0;
  Value offset = 0;

  static constexpr Atom constant(Value c) { return {0, c}; }
  static constexpr Atom sym(std::uint32_t id, Value offset = 0) {
    return {id, offset};
  }
  constexpr bool is_const() const { return symbol == 0; }

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

/// A vector of atoms denoting the set of ground vectors obtained by
/// instantiating every symbol with a natural. Symbols are always kept in
/// canonical form: renamed 1, 2, ... in order of first occurrence.
class SymState {
 public:
  SymState() = default;
  explicit SymState(std::vector<Atom> atoms);
  static SymState ground(std::span<const Value> values);

  std::size_t size() const noexcept { return atoms_.size(); }
  const Atom& operator[](std::size_t i) const { return atoms_[i]; }
  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  bool is_ground() const noexcept { return symbols_ == 0; }
  std::uint32_t symbol_count() const noexcept { return symbols_; }
  /// Ground values; requires is_ground().
  std::vector<Value> values() const;

  friend auto operator<=>(const SymState&, const SymState&) = default;
  friend bool operator==(const SymState&, const SymState&) = default;

 private:
  std::vector<Atom> atoms_;
  std::uint32_t symbols_ = 0;
};

using StateSet = std::set<SymState>;

/// Per-node state sets, indexed by NodeId.
using NodeMap = std::vector<StateSet>;

std::string to_string(const Atom& a);
std::string to_string(const SymState& s);
std::string to_string(const StateSet& s);

/// Exact image of one symbolic state under a command; nullopt when a guard
/// rejects every instance. Throws ContractError when the command mentions a
/// variable beyond the state length, OverflowError on 64-bit overflow.
std::optional<SymState> apply(const Command& c, const SymState& s);

/// Collecting transfer function f_c lifted to symbolic state sets.
StateSet transfer(const Command& c, const StateSet& s);

enum class Padding {
  Free,  ///< missing coordinates range over all naturals
  Zero,  ///< missing coordinates are 0
};

/// S restricted to k coordinates: truncation when k <= length, otherwise
/// padding with fresh symbols (Free) or zeros (Zero).
SymState project(const SymState& s, std::size_t k, Padding pad = Padding::Free);
StateSet project(const StateSet& s, std::size_t k, Padding pad = Padding::Free);

struct Cardinality {
  bool infinite = false;
  std::size_t count = 0;
  friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

/// Infinite iff some member mentions a symbol; otherwise the number of
/// distinct ground vectors.
Cardinality cardinality(const StateSet& s);

/// True when every instance of `specific` is an instance of `general`,
/// decided by one-way matching of general's symbols.
bool subsumes(const SymState& general, const SymState& specific);

StateSet ground_set(std::span<const std::vector<Value>> points);

}  // namespace urmflow::cfg
