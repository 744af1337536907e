#include "urmflow/bacfg.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "overloaded.hpp"
#include "text_util.hpp"
#include "urmflow/error.hpp"

namespace urmflow::cfg {

using detail::overloaded;

bool is_guard(const Command& c) {
  return std::holds_alternative<GuardVarEq>(c) ||
         std::holds_alternative<GuardConstEq>(c);
}

Var max_var(const Command& c) {
  return std::visit(overloaded{
                        [](const Zero& z) { return z.n; },
                        [](const Copy& x) { return std::max(x.n, x.m); },
                        [](const Succ& x) { return std::max(x.n, x.m); },
                        [](const GuardVarEq& g) { return std::max(g.n, g.m); },
                        [](const GuardConstEq& g) { return g.n; },
                    },
                    c);
}

namespace {

Var min_var(const Command& c) {
  return std::visit(overloaded{
                        [](const Zero& z) { return z.n; },
                        [](const Copy& x) { return std::min(x.n, x.m); },
                        [](const Succ& x) { return std::min(x.n, x.m); },
                        [](const GuardVarEq& g) { return std::min(g.n, g.m); },
                        [](const GuardConstEq& g) { return g.n; },
                    },
                    c);
}

std::string x(Var v) { return "x" + std::to_string(v); }

}  // namespace

std::string to_string(const Command& c) {
  return std::visit(
      overloaded{
          [](const Zero& z) { return x(z.n) + ":=0"; },
          [](const Copy& cp) { return x(cp.n) + ":=" + x(cp.m); },
          [](const Succ& s) { return x(s.n) + ":=" + x(s.m) + "+1"; },
          [](const GuardVarEq& g) { return x(g.n) + "=" + x(g.m) + "?"; },
          [](const GuardConstEq& g) {
            return x(g.n) + "=" + std::to_string(g.v) + "?";
          },
      },
      c);
}

NodeId Bacfg::add_node(std::string_view name) {
  std::string key(name);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  if (names_.size() >= std::numeric_limits<NodeId>::max()) {
    throw ContractError("too many nodes");
  }
  auto id = static_cast<NodeId>(names_.size());
  names_.push_back(key);
  index_.emplace(std::move(key), id);
  return id;
}

NodeId Bacfg::fresh_node(std::string_view stem) {
  std::string base(stem);
  if (!index_.contains(base)) return add_node(base);
  for (std::size_t i = 1;; ++i) {
    auto candidate = base + std::to_string(i);
    if (!index_.contains(candidate)) return add_node(candidate);
  }
}

void Bacfg::add_edge(NodeId src, Command cmd, NodeId dst) {
  if (src >= names_.size() || dst >= names_.size()) {
    throw ContractError("edge endpoint is not a node");
  }
  if (min_var(cmd) == 0) {
    throw ContractError("variable index 0 in command " + to_string(cmd));
  }
  Edge e{src, std::move(cmd), dst};
  if (std::find(edges_.begin(), edges_.end(), e) != edges_.end()) return;
  vars_ = std::max(vars_, max_var(e.cmd));
  edges_.push_back(std::move(e));
}

void Bacfg::set_start(NodeId n) {
  if (n >= names_.size()) throw ContractError("start is not a node");
  start_ = n;
}

void Bacfg::set_end(NodeId n) {
  if (n >= names_.size()) throw ContractError("end is not a node");
  end_ = n;
}

std::optional<NodeId> Bacfg::find(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end()) {
    return it->second;
  }
  return std::nullopt;
}

NodeId Bacfg::node(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw ContractError("unknown node '" + std::string(name) + "'");
}

NodeId Bacfg::start() const {
  if (!start_) throw ContractError("graph has no start node");
  return *start_;
}

NodeId Bacfg::end() const {
  if (!end_) throw ContractError("graph has no end node");
  return *end_;
}

bool Bacfg::has_guards() const {
  return std::any_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return is_guard(e.cmd); });
}

Bacfg parse_bacfg(std::string_view text) {
  Bacfg g;
  std::size_t last_line = 0;
  for (auto [line_no, raw] : detail::numbered_lines(text)) {
    last_line = line_no;
    auto tok = detail::split_ws(detail::strip_comment(raw));
    if (tok.empty()) continue;
    auto arity = [&, line_no = line_no](std::size_t n) {
      if (tok.size() != n) {
        throw ParseError(line_no, "'" + std::string(tok[0]) + "' expects " +
                                      std::to_string(n - 1) + " field(s)");
      }
    };
    auto var = [&, line_no = line_no](std::size_t i) {
      auto v = detail::parse_u64(tok[i], line_no, "variable index");
      if (v == 0) throw ParseError(line_no, "variable index 0 is not allowed");
      if (v > std::numeric_limits<Var>::max()) {
        throw ParseError(line_no, "variable index too large");
      }
      return static_cast<Var>(v);
    };

    const auto kw = tok[0];
    if (kw == "start") {
      arity(2);
      g.set_start(g.add_node(tok[1]));
    } else if (kw == "end") {
      arity(2);
      g.set_end(g.add_node(tok[1]));
    } else if (kw == "node") {
      arity(2);
      g.add_node(tok[1]);
    } else if (kw == "edge") {
      if (tok.size() < 5) throw ParseError(line_no, "incomplete edge");
      auto op = tok[3];
      Command cmd;
      if (op == "zero") {
        arity(5);
        cmd = Zero{var(4)};
      } else if (op == "copy") {
        arity(6);
        cmd = Copy{var(4), var(5)};
      } else if (op == "succ") {
        arity(6);
        cmd = Succ{var(4), var(5)};
      } else if (op == "eqv") {
        arity(6);
        cmd = GuardVarEq{var(4), var(5)};
      } else if (op == "eqc") {
        arity(6);
        cmd = GuardConstEq{var(4),
                           detail::parse_u64(tok[5], line_no, "constant")};
      } else {
        throw ParseError(line_no, "unknown command '" + std::string(op) + "'");
      }
      auto src = g.add_node(tok[1]);
      auto dst = g.add_node(tok[2]);
      g.add_edge(src, std::move(cmd), dst);
    } else {
      throw ParseError(line_no, "unknown declaration '" + std::string(kw) + "'");
    }
  }
  if (!g.has_start()) throw ParseError(last_line, "missing 'start' declaration");
  if (!g.has_end()) throw ParseError(last_line, "missing 'end' declaration");
  return g;
}

std::string to_text(const Bacfg& g) {
  std::ostringstream out;
  out << "start " << g.name(g.start()) << '\n';
  out << "end " << g.name(g.end()) << '\n';

  std::vector<bool> mentioned(g.node_count(), false);
  mentioned[g.start()] = mentioned[g.end()] = true;
  for (const auto& e : g.edges()) mentioned[e.src] = mentioned[e.dst] = true;
  for (NodeId n = 0; n < g.node_count(); ++n) {
    if (!mentioned[n]) out << "node " << g.name(n) << '\n';
  }

  for (const auto& e : g.edges()) {
    out << "edge " << g.name(e.src) << ' ' << g.name(e.dst) << ' ';
    std::visit(overloaded{
                   [&](const Zero& z) { out << "zero " << z.n; },
                   [&](const Copy& c) { out << "copy " << c.n << ' ' << c.m; },
                   [&](const Succ& s) { out << "succ " << s.n << ' ' << s.m; },
                   [&](const GuardVarEq& q) {
                     out << "eqv " << q.n << ' ' << q.m;
                   },
                   [&](const GuardConstEq& q) {
                     out << "eqc " << q.n << ' ' << q.v;
                   },
               },
               e.cmd);
    out << '\n';
  }
  return out.str();
}

namespace {

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const Bacfg& g) {
  std::ostringstream out;
  out << "digraph bacfg {\n";
  out << "  node [shape=ellipse];\n";
  for (NodeId n = 0; n < g.node_count(); ++n) {
    out << "  " << dot_quote(g.name(n));
    std::vector<std::string> attrs;
    if (g.has_start() && n == g.start()) attrs.emplace_back("style=bold");
    if (g.has_end() && n == g.end()) attrs.emplace_back("peripheries=2");
    if (!attrs.empty()) {
      out << " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) {
        out << (i ? ", " : "") << attrs[i];
      }
      out << "]";
    }
    out << ";\n";
  }
  if (g.has_start()) {
    out << "  __start [shape=point];\n";
    out << "  __start -> " << dot_quote(g.name(g.start())) << ";\n";
  }
  for (const auto& e : g.edges()) {
    out << "  " << dot_quote(g.name(e.src)) << " -> "
        << dot_quote(g.name(e.dst)) << " [label=" << dot_quote(to_string(e.cmd))
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace urmflow::cfg
