#include "urmflow/transformers.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "overloaded.hpp"
#include "urmflow/error.hpp"
#include "urmflow/tau.hpp"

namespace urmflow::transformers {

using detail::overloaded;

namespace {

cfg::Var var_index(std::size_t i) {
  if (i == 0 || i > std::numeric_limits<cfg::Var>::max()) {
    throw OverflowError("variable index " + std::to_string(i) + " out of range");
  }
  return static_cast<cfg::Var>(i);
}

/// Copies every node and edge of `src` into `dst` under `prefix`; returns the
/// id map.
std::vector<cfg::NodeId> import(cfg::Bacfg& dst, const cfg::Bacfg& src,
                                const std::string& prefix) {
  std::vector<cfg::NodeId> ids(src.node_count());
  for (cfg::NodeId v = 0; v < src.node_count(); ++v) {
    ids[v] = dst.add_node(prefix + src.name(v));
  }
  for (const auto& e : src.edges()) dst.add_edge(ids[e.src], e.cmd, ids[e.dst]);
  return ids;
}

/// Lays the commands out as a path from `from`; an empty sequence becomes a
/// single epsilon edge. Returns the last node.
cfg::NodeId chain(cfg::Bacfg& g, cfg::NodeId from,
                  const std::vector<cfg::Command>& cmds) {
  if (cmds.empty()) {
    auto to = g.fresh_node("p");
    g.add_edge(from, cfg::epsilon(), to);
    return to;
  }
  for (const auto& c : cmds) {
    auto to = g.fresh_node("p");
    g.add_edge(from, c, to);
    from = to;
  }
  return from;
}

cfg::NodeId chain(cfg::Bacfg& g, cfg::NodeId from, const MacroCmd& m) {
  return chain(g, from, expand_macro(m));
}

}  // namespace

std::vector<cfg::Command> expand_macro(const MacroCmd& m) {
  std::vector<cfg::Command> out;
  std::visit(overloaded{
                 [&](const CopyBlock& c) {
                   if (c.len == 0 || c.dst == c.src) return;
                   var_index(std::size_t{c.dst} + c.len - 1);
                   var_index(std::size_t{c.src} + c.len - 1);
                   for (std::size_t k = 0; k < c.len; ++k) {
                     std::size_t i = c.dst > c.src ? c.len - 1 - k : k;
                     out.push_back(cfg::Copy{var_index(c.dst + i),
                                             var_index(c.src + i)});
                   }
                 },
                 [&](const LoadConsts& l) {
                   for (std::size_t i = 0; i < l.values.size(); ++i) {
                     auto x = var_index(l.start + i);
                     out.push_back(cfg::Zero{x});
                     for (cfg::Value k = 0; k < l.values[i]; ++k) {
                       out.push_back(cfg::Succ{x, x});
                     }
                   }
                 },
                 [&](const ZeroBlock& z) {
                   for (std::size_t i = 0; i < z.len; ++i) {
                     out.push_back(cfg::Zero{var_index(z.start + i)});
                   }
                 },
             },
             m);
  return out;
}

cfg::Bacfg diverging_bacfg(cfg::Var k) {
  if (k == 0) throw ContractError("diverging_bacfg needs k >= 1");
  cfg::Bacfg g;
  auto s = g.add_node("s");
  auto e = g.add_node("e");
  g.add_edge(s, cfg::Copy{k, k}, s);
  g.set_start(s);
  g.set_end(e);
  return g;
}

cfg::Bacfg branch(const cfg::Bacfg& ga, const cfg::Bacfg& gb, cfg::Value c1,
                  cfg::Value c2) {
  if (c1 == c2) {
    throw ContractError("branch needs distinct constants, got c1 = c2 = " +
                        std::to_string(c1));
  }
  cfg::Bacfg g;
  auto s = g.add_node("s");
  auto e = g.add_node("e");
  auto a = import(g, ga, "a/");
  auto b = import(g, gb, "b/");
  g.add_edge(s, cfg::GuardConstEq{1, c1}, a[ga.start()]);
  g.add_edge(s, cfg::GuardConstEq{1, c2}, b[gb.start()]);
  g.add_edge(a[ga.end()], cfg::epsilon(), e);
  g.add_edge(b[gb.end()], cfg::epsilon(), e);
  g.set_start(s);
  g.set_end(e);
  return g;
}

cfg::Bacfg discharge(const cfg::Bacfg& ga, std::size_t n, std::size_t t) {
  if (n == 0) throw ContractError("discharge needs n >= 1");
  cfg::Bacfg g;
  auto s = g.add_node("s");
  g.set_start(s);
  auto v = chain(g, s, CopyBlock{1, 2, n});
  // One past every variable that is written or read: always undefined.
  const std::size_t fresh =
      std::max({n + 1, std::size_t{ga.variable_count()} + 1, t}) + 1;
  auto u = g.fresh_node("p");
  g.add_edge(v, cfg::Copy{var_index(n + 1), var_index(fresh)}, u);
  auto a = import(g, ga, "a/");
  g.add_edge(u, cfg::epsilon(), a[ga.start()]);
  g.set_end(a[ga.end()]);
  return g;
}

cfg::Bacfg smn_compose(const cfg::Bacfg& ga, const urm::Program& b,
                       std::span<const cfg::Value> z, std::size_t n,
                       std::size_t t) {
  if (z.empty()) throw ContractError("smn_compose needs m >= 1 fixed values");
  if (n == 0) throw ContractError("smn_compose needs n >= 1");
  const std::size_t kb = std::max<std::size_t>(b.registers(), 1);
  const std::size_t mm = std::min(z.size(), kb);
  const std::size_t top = std::max<std::size_t>(ga.variable_count(), t);

  cfg::Bacfg g;
  auto s = g.add_node("s");
  g.set_start(s);
  // (1) stash y above every variable tau(b) touches
  auto v = chain(g, s, CopyBlock{var_index(kb + 2), 1, n});
  // (2)-(3) the initial configuration of b on z
  v = chain(g, v, LoadConsts{1, {z.begin(), z.begin() + mm}});
  v = chain(g, v, ZeroBlock{var_index(mm + 1), kb + 1 - mm});
  // (4)
  auto tb = tau::compile(b);
  auto bi = import(g, tb.graph, "b/");
  g.add_edge(v, cfg::epsilon(), bi[tb.graph.start()]);
  v = bi[tb.graph.end()];
  // (5) restore y behind the result
  v = chain(g, v, CopyBlock{2, var_index(kb + 2), n});
  // (6) undefine the rest of Ga's variables
  const std::size_t rest = top > n + 1 ? top - (n + 1) : 0;
  v = chain(g, v, CopyBlock{var_index(n + 2), var_index(kb + n + 2), rest});
  // (7)
  auto a = import(g, ga, "a/");
  g.add_edge(v, cfg::epsilon(), a[ga.start()]);
  g.set_end(a[ga.end()]);
  return g;
}

}  // namespace urmflow::transformers
