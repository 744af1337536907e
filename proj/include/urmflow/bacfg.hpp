#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

namespace urmflow::cfg {

/// Variables are numbered from 1.
using Var = std::uint32_t;
using Value = std::uint64_t;

/// x_n := 0
struct Zero {
  Var n;
  friend auto operator<=>(const Zero&, const Zero&) = default;
};

/// x_n := x_m
struct Copy {
  Var n;
  Var m;
  friend auto operator<=>(const Copy&, const Copy&) = default;
};

/// x_n := x_m + 1
struct Succ {
  Var n;
  Var m;
  friend auto operator<=>(const Succ&, const Succ&) = default;
};

/// x_n = x_m ?
struct GuardVarEq {
  Var n;
  Var m;
  friend auto operator<=>(const GuardVarEq&, const GuardVarEq&) = default;
};

/// x_n = v ?
struct GuardConstEq {
  Var n;
  Value v;
  friend auto operator<=>(const GuardConstEq&, const GuardConstEq&) = default;
};

using Command = std::variant<Zero, Copy, Succ, GuardVarEq, GuardConstEq>;

/// The no-op edge label, x_1 := x_1.
inline Command epsilon() { return Copy{1, 1}; }

bool is_guard(const Command& c);
Var max_var(const Command& c);
/// Surface syntax used in reports and DOT labels: `x3:=0`, `x1:=x2`,
/// `x1:=x2+1`, `x1=x2?`, `x1=5?`.
std::string to_string(const Command& c);

using NodeId = std::uint32_t;

struct Edge {
  NodeId src;
  Command cmd;
  NodeId dst;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// A basic affine control flow graph (N, E, s, e).
///
/// Nodes carry stable names; edges form a set (re-adding an edge is a no-op)
/// but keep insertion order for deterministic output.
class Bacfg {
 public:
  /// Returns the id of `name`, creating the node if needed.
  NodeId add_node(std::string_view name);
  /// Creates a node whose name starts with `stem` and is not taken yet.
  NodeId fresh_node(std::string_view stem);
  void add_edge(NodeId src, Command cmd, NodeId dst);
  void set_start(NodeId n);
  void set_end(NodeId n);

  std::size_t node_count() const noexcept { return names_.size(); }
  const std::string& name(NodeId n) const { return names_.at(n); }
  std::optional<NodeId> find(std::string_view name) const;
  /// Like find, but throws ContractError for unknown names.
  NodeId node(std::string_view name) const;
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  NodeId start() const;
  NodeId end() const;
  bool has_start() const noexcept { return start_.has_value(); }
  bool has_end() const noexcept { return end_.has_value(); }
  /// k_G: largest variable index on any edge, 0 without edges.
  Var variable_count() const noexcept { return vars_; }
  bool has_guards() const;

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
  std::vector<Edge> edges_;
  std::optional<NodeId> start_;
  std::optional<NodeId> end_;
  Var vars_ = 0;
};

/// Text format, one declaration per line, `#` comments:
///   start NODE | end NODE | node NODE
///   edge SRC DST zero n | copy n m | succ n m | eqv n m | eqc n v
Bacfg parse_bacfg(std::string_view text);
std::string to_text(const Bacfg& g);
/// Graphviz digraph: ellipse nodes, bold start, double-bordered end.
std::string to_dot(const Bacfg& g);

}  // namespace urmflow::cfg
