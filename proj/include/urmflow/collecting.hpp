#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "urmflow/bacfg.hpp"
#include "urmflow/symstate.hpp"

namespace urmflow::cfg {

/// Number of coordinates states carry when `g` runs on inputs of `arity`
/// values: max(k_G, arity). Variables beyond k_G are never touched by edges.
std::size_t working_dimension(const Bacfg& g, std::size_t arity);

/// The initial map: the start node holds the input projected to the working
/// dimension, every other node is empty. All input members must share one
/// length.
NodeMap initial_map(const Bacfg& g, const StateSet& input,
                    Padding pad = Padding::Free);
NodeMap initial_map(const Bacfg& g, std::span<const Value> input,
                    Padding pad = Padding::Free);

/// Map holding exactly `states` at node `at` and nothing elsewhere.
NodeMap singleton_map(const Bacfg& g, NodeId at, const StateSet& states);

/// Delta(X)[v] = union over edges (u,c,v) of f_c(X[u]). No union with X[v].
NodeMap delta_step(const Bacfg& g, const NodeMap& x);

/// F(X)[v] = Delta(X)[v] union X[v].
NodeMap f_step(const Bacfg& g, const NodeMap& x);

/// Delta^0(X), ..., Delta^n(X).
std::vector<NodeMap> delta_iterates(const Bacfg& g, const NodeMap& x,
                                    std::size_t n);

/// Pointwise union.
NodeMap join(const NodeMap& a, const NodeMap& b);
bool is_empty(const NodeMap& x);

enum class Iteration {
  /// Plain Kleene iterates F^i, with F^i accumulated as the union of the
  /// Delta iterates. Convergence is syntactic F^{i+1} = F^i.
  Kleene,
  /// Semi-naive iteration that closes `x_n := x_n + 1` self-loops into a
  /// single symbolic state and stops once every new state is subsumed by a
  /// collected one. Every collected state is reachable, so the result is an
  /// under-approximation until convergence and the collecting semantics
  /// exactly when `exact` is set.
  Accelerated,
};

struct CollectOptions {
  std::uint64_t fuel = 10'000;
  Padding padding = Padding::Free;
  Iteration iteration = Iteration::Kleene;
};

struct CollectResult {
  NodeMap states;
  /// A fixpoint was reached: `states` is the collecting semantics.
  bool exact = false;
  /// F applications performed, counting the one that confirmed convergence
  /// (semi-naive rounds in Accelerated mode).
  std::uint64_t iterations = 0;
};

CollectResult collect(const Bacfg& g, const StateSet& input,
                      const CollectOptions& options);
CollectResult collect(const Bacfg& g, std::span<const Value> input,
                      const CollectOptions& options);

}  // namespace urmflow::cfg
