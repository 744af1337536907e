#include "urmflow/collecting.hpp"

#include <algorithm>

#include "urmflow/error.hpp"

namespace urmflow::cfg {

std::size_t working_dimension(const Bacfg& g, std::size_t arity) {
  return std::max<std::size_t>(g.variable_count(), arity);
}

NodeMap initial_map(const Bacfg& g, const StateSet& input, Padding pad) {
  NodeMap x(g.node_count());
  if (input.empty()) return x;
  const auto arity = input.begin()->size();
  for (const auto& s : input) {
    if (s.size() != arity) {
      throw ContractError("input states have different lengths");
    }
  }
  x[g.start()] = project(input, working_dimension(g, arity), pad);
  return x;
}

NodeMap initial_map(const Bacfg& g, std::span<const Value> input, Padding pad) {
  return initial_map(g, StateSet{SymState::ground(input)}, pad);
}

NodeMap singleton_map(const Bacfg& g, NodeId at, const StateSet& states) {
  NodeMap x(g.node_count());
  x.at(at) = states;
  return x;
}

NodeMap delta_step(const Bacfg& g, const NodeMap& x) {
  if (x.size() != g.node_count()) {
    throw ContractError("node map does not match the graph");
  }
  NodeMap out(g.node_count());
  for (const auto& e : g.edges()) {
    const auto& from = x[e.src];
    if (from.empty()) continue;
    auto& into = out[e.dst];
    for (const auto& s : from) {
      if (auto r = apply(e.cmd, s)) into.insert(std::move(*r));
    }
  }
  return out;
}

NodeMap join(const NodeMap& a, const NodeMap& b) {
  if (a.size() != b.size()) throw ContractError("node maps differ in size");
  NodeMap out = a;
  for (std::size_t v = 0; v < b.size(); ++v) out[v].insert(b[v].begin(), b[v].end());
  return out;
}

NodeMap f_step(const Bacfg& g, const NodeMap& x) {
  return join(delta_step(g, x), x);
}

std::vector<NodeMap> delta_iterates(const Bacfg& g, const NodeMap& x,
                                    std::size_t n) {
  std::vector<NodeMap> out{x};
  out.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) out.push_back(delta_step(g, out.back()));
  return out;
}

bool is_empty(const NodeMap& x) {
  return std::all_of(x.begin(), x.end(),
                     [](const StateSet& s) { return s.empty(); });
}

namespace {

bool included(const NodeMap& sub, const NodeMap& super) {
  for (std::size_t v = 0; v < sub.size(); ++v) {
    for (const auto& s : sub[v]) {
      if (!super[v].contains(s)) return false;
    }
  }
  return true;
}

CollectResult collect_kleene(const Bacfg& g, NodeMap init,
                             std::uint64_t fuel) {
  CollectResult r;
  r.states = init;
  NodeMap current = std::move(init);
  for (std::uint64_t i = 0;; ++i) {
    NodeMap next = delta_step(g, current);
    if (included(next, r.states)) {
      r.exact = true;
      r.iterations = i + 1;  // the application that confirmed the fixpoint
      return r;
    }
    if (i == fuel) {
      r.iterations = fuel;
      return r;
    }
    for (std::size_t v = 0; v < next.size(); ++v) {
      r.states[v].insert(next[v].begin(), next[v].end());
    }
    current = std::move(next);
  }
}

/// Variables n with a self-loop x_n := x_n + 1 at each node.
std::vector<std::vector<Var>> increment_loops(const Bacfg& g) {
  std::vector<std::vector<Var>> loops(g.node_count());
  for (const auto& e : g.edges()) {
    if (e.src != e.dst) continue;
    if (const auto* s = std::get_if<Succ>(&e.cmd); s && s->n == s->m) {
      loops[e.src].push_back(s->n);
    }
  }
  return loops;
}

/// Closes `s` under the increment self-loops `vars`: a constant c becomes
/// omega + c. A symbol shared with another coordinate cannot be widened
/// without losing the correlation and is left alone.
SymState close_loops(const SymState& s, const std::vector<Var>& vars) {
  if (vars.empty()) return s;
  std::vector<Atom> atoms = s.atoms();
  std::uint32_t next = s.symbol_count() + 1;
  for (Var n : vars) {
    if (n > atoms.size()) continue;
    if (atoms[n - 1].is_const()) {
      atoms[n - 1] = Atom::sym(next++, atoms[n - 1].offset);
    }
  }
  return SymState(std::move(atoms));
}

bool covered(const StateSet& set, const SymState& s) {
  if (set.contains(s)) return true;
  return std::any_of(set.begin(), set.end(),
                     [&](const SymState& g) { return subsumes(g, s); });
}

CollectResult collect_accelerated(const Bacfg& g, const NodeMap& init,
                                  std::uint64_t fuel) {
  const auto loops = increment_loops(g);
  CollectResult r;
  r.states.assign(g.node_count(), {});
  NodeMap frontier(g.node_count());
  auto admit = [&](NodeId v, const SymState& s) {
    SymState closed = close_loops(s, loops[v]);
    if (covered(r.states[v], closed)) return;
    r.states[v].insert(closed);
    frontier[v].insert(std::move(closed));
  };
  for (NodeId v = 0; v < init.size(); ++v) {
    for (const auto& s : init[v]) admit(v, s);
  }
  for (std::uint64_t round = 0;; ++round) {
    if (is_empty(frontier)) {
      r.exact = true;
      r.iterations = round;
      return r;
    }
    if (round == fuel) {
      r.iterations = fuel;
      return r;
    }
    NodeMap produced = delta_step(g, frontier);
    frontier.assign(g.node_count(), {});
    for (NodeId v = 0; v < produced.size(); ++v) {
      for (const auto& s : produced[v]) admit(v, s);
    }
  }
}

}  // namespace

CollectResult collect(const Bacfg& g, const StateSet& input,
                      const CollectOptions& options) {
  NodeMap init = initial_map(g, input, options.padding);
  if (options.iteration == Iteration::Accelerated) {
    return collect_accelerated(g, init, options.fuel);
  }
  return collect_kleene(g, std::move(init), options.fuel);
}

CollectResult collect(const Bacfg& g, std::span<const Value> input,
                      const CollectOptions& options) {
  return collect(g, StateSet{SymState::ground(input)}, options);
}

}  // namespace urmflow::cfg
