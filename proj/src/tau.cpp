#include "urmflow/tau.hpp"

#include <limits>
#include <sstream>

#include "overloaded.hpp"
#include "text_util.hpp"
#include "urmflow/error.hpp"

namespace urmflow::tau {

using detail::overloaded;

TauBacfg compile(const urm::Program& program) {
  TauBacfg out;
  auto& g = out.graph;
  auto& meta = out.meta;
  meta.k_p = program.registers();
  const cfg::Var z = meta.z_index();
  const auto t = program.size();

  std::vector<cfg::NodeId> q(t + 2);
  for (urm::Position i = 1; i <= t + 1; ++i) {
    auto name = "q" + std::to_string(i);
    q[i] = g.add_node(name);
    meta.q_nodes.emplace(i, std::move(name));
  }
  g.set_start(q[1]);
  g.set_end(q[t + 1]);

  for (urm::Position i = 1; i <= t; ++i) {
    std::visit(overloaded{
                   [&](const urm::Zero& ins) {
                     g.add_edge(q[i], cfg::Zero{ins.n}, q[i + 1]);
                   },
                   [&](const urm::Succ& ins) {
                     g.add_edge(q[i], cfg::Succ{ins.n, ins.n}, q[i + 1]);
                   },
                   [&](const urm::Transfer& ins) {
                     g.add_edge(q[i], cfg::Copy{ins.dst, ins.src}, q[i + 1]);
                   },
                   [&](const urm::Jump& ins) {
                     auto name = "inc" + std::to_string(i);
                     auto inc = g.add_node(name);
                     meta.inc_nodes.emplace(i, std::move(name));
                     const auto m = ins.lhs;
                     const auto n = ins.rhs;
                     g.add_edge(q[i], cfg::GuardVarEq{m, n}, q[ins.target]);
                     g.add_edge(q[i], cfg::Succ{z, m}, inc);
                     g.add_edge(q[i], cfg::Succ{z, n}, inc);
                     g.add_edge(inc, cfg::Succ{z, z}, inc);
                     g.add_edge(inc, cfg::GuardVarEq{n, z}, q[i + 1]);
                     g.add_edge(inc, cfg::GuardVarEq{m, z}, q[i + 1]);
                   },
               },
               program.at(i));
  }

  if (!program.has_jumps()) {
    auto dead = g.fresh_node("dead");
    g.add_edge(dead, cfg::Copy{z, z}, dead);
  }
  return out;
}

std::string meta_to_text(const TauMeta& meta) {
  std::ostringstream out;
  out << "kp " << meta.k_p << '\n';
  for (const auto& [i, name] : meta.q_nodes) out << "q " << i << ' ' << name << '\n';
  for (const auto& [i, name] : meta.inc_nodes) {
    out << "inc " << i << ' ' << name << '\n';
  }
  return out.str();
}

TauMeta parse_meta(std::string_view text) {
  TauMeta meta;
  bool saw_kp = false;
  for (auto [line_no, raw] : detail::numbered_lines(text)) {
    auto tok = detail::split_ws(detail::strip_comment(raw));
    if (tok.empty()) continue;
    if (tok[0] == "kp" && tok.size() == 2) {
      auto v = detail::parse_u64(tok[1], line_no, "register count");
      if (v >= std::numeric_limits<urm::Register>::max()) {
        throw ParseError(line_no, "register count too large");
      }
      meta.k_p = static_cast<urm::Register>(v);
      saw_kp = true;
    } else if ((tok[0] == "q" || tok[0] == "inc") && tok.size() == 3) {
      auto i = detail::parse_u64(tok[1], line_no, "instruction index");
      auto& target = tok[0] == "q" ? meta.q_nodes : meta.inc_nodes;
      target[static_cast<urm::Position>(i)] = std::string(tok[2]);
    } else {
      throw ParseError(line_no, "expected 'kp N', 'q i NODE' or 'inc i NODE'");
    }
  }
  if (!saw_kp) throw ParseError(0, "meta is missing the 'kp' line");
  return meta;
}

std::uint64_t simulation_cost(const urm::Program& program,
                              const urm::Config& config) {
  const auto& instr = program.at(config.pc);
  const auto* j = std::get_if<urm::Jump>(&instr);
  if (!j) return 1;
  auto a = config.regs.at(j->lhs - 1);
  auto b = config.regs.at(j->rhs - 1);
  if (a == b) return 1;
  return (a > b ? a - b : b - a) + 1;
}

std::optional<std::uint64_t> simulation_fuel(const urm::Program& program,
                                             std::span<const urm::Value> input,
                                             std::uint64_t fuel) {
  auto configs = urm::trace(program, input, fuel);
  if (!urm::halted(program, configs.back())) return std::nullopt;
  std::uint64_t total = 0;
  for (std::size_t i = 0; i + 1 < configs.size(); ++i) {
    total += simulation_cost(program, configs[i]);
  }
  return total;
}

namespace {

void require_ground(const cfg::NodeMap& x) {
  for (const auto& set : x) {
    for (const auto& s : set) {
      if (!s.is_ground()) {
        throw ContractError("approx_equiv needs ground node maps");
      }
    }
  }
}

cfg::StateSet below(const cfg::StateSet& set, cfg::Var z, cfg::Var m) {
  cfg::StateSet out;
  for (const auto& s : set) {
    if (s[z - 1].offset <= s[m - 1].offset) out.insert(s);
  }
  return out;
}

}  // namespace

bool approx_equiv(const cfg::Bacfg& graph, const TauMeta& meta,
                  const cfg::NodeMap& x, const cfg::NodeMap& y) {
  if (x.size() != graph.node_count() || y.size() != graph.node_count()) {
    throw ContractError("node maps do not match the graph");
  }
  require_ground(x);
  require_ground(y);

  for (const auto& [i, name] : meta.q_nodes) {
    auto v = graph.node(name);
    if (cfg::project(x[v], meta.k_p) != cfg::project(y[v], meta.k_p)) {
      return false;
    }
  }

  const cfg::Var z = meta.z_index();
  for (const auto& [i, name] : meta.inc_nodes) {
    auto inc = graph.node(name);
    auto next = meta.q_nodes.find(i + 1);
    if (next == meta.q_nodes.end()) continue;
    auto succ = graph.node(next->second);
    for (const auto& e : graph.edges()) {
      if (e.src != inc || e.dst != succ) continue;
      const auto* guard = std::get_if<cfg::GuardVarEq>(&e.cmd);
      if (!guard || guard->m != z || guard->n > meta.k_p) continue;
      if (below(x[inc], z, guard->n) != below(y[inc], z, guard->n)) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace urmflow::tau
