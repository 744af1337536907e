#include "urmflow/statesem.hpp"

#include <algorithm>
#include <map>

#include "overloaded.hpp"
#include "text_util.hpp"
#include "urmflow/error.hpp"

namespace urmflow::statesem {

using detail::overloaded;

std::size_t arity(const Predicate& q) {
  return std::visit([](const auto& p) { return p.arity; }, q);
}

bool accepts_empty(const Predicate& q) {
  return std::visit(overloaded{
                        [](const Aff&) { return true; },
                        [](const ConstAt&) { return false; },
                        [](const FinK& f) { return f.k == 0; },
                        [](const Fin&) { return true; },
                    },
                    q);
}

namespace {

std::string linear_to_string(const RationalVector& coeffs) {
  std::string out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const auto& a = coeffs[i];
    if (a == 0) continue;
    if (out.empty()) {
      out += (a < 0 ? "-" : "");
    } else {
      out += (a < 0 ? " - " : " + ");
    }
    Rational mag = abs(a);
    if (mag != 1) out += mag.get_str() + "*";
    out += "x" + std::to_string(i + 1);
  }
  return out.empty() ? "0" : out;
}

}  // namespace

std::string to_string(const AffineEquality& row) {
  return linear_to_string(row.coeffs) + " = " + row.rhs.get_str();
}

std::string to_string(const Predicate& q) {
  return std::visit(
      overloaded{
          [](const Aff& a) {
            std::string out = "aff:";
            for (std::size_t i = 0; i < a.rows.size(); ++i) {
              out += (i ? "; " : " ") + to_string(a.rows[i]);
            }
            return out;
          },
          [](const ConstAt& c) {
            return "const: x" + std::to_string(c.index) + " = " +
                   std::to_string(c.value);
          },
          [](const FinK& f) { return "fin: " + std::to_string(f.k); },
          [](const Fin&) { return std::string("fin"); },
      },
      q);
}

namespace {

struct Linear {
  std::map<std::size_t, Rational> coeffs;  // variable index -> coefficient
  Rational constant = 0;
};

std::size_t parse_index(std::string_view digits) {
  auto v = detail::parse_u64(digits, 0, "variable index");
  if (v == 0) throw ParseError(0, "variable index 0 is not allowed");
  return static_cast<std::size_t>(v);
}

Linear parse_linear(std::string_view text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ParseError(0, "empty side of an equation");
  Linear out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    while (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      if (s[pos] == '-') sign = -sign;
      ++pos;
    }
    auto next = s.find_first_of("+-", pos);
    std::string_view term(s.data() + pos,
                          (next == std::string::npos ? s.size() : next) - pos);
    if (term.empty()) throw ParseError(0, "dangling sign in '" + s + "'");
    pos = next == std::string::npos ? s.size() : next;

    auto x = term.find('x');
    if (x == std::string_view::npos) {
      out.constant += sign * parse_rational(term);
      continue;
    }
    auto coef_text = term.substr(0, x);
    if (!coef_text.empty() && coef_text.back() == '*') coef_text.remove_suffix(1);
    Rational coef = coef_text.empty() ? Rational(1) : parse_rational(coef_text);
    out.coeffs[parse_index(term.substr(x + 1))] += sign * coef;
  }
  return out;
}

AffineEquality parse_equation(std::string_view text, std::size_t& max_index) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos || text.find('=', eq + 1) != std::string_view::npos) {
    throw ParseError(0, "expected exactly one '=' in '" + std::string(text) + "'");
  }
  auto lhs = parse_linear(text.substr(0, eq));
  auto rhs = parse_linear(text.substr(eq + 1));
  for (const auto& [i, a] : rhs.coeffs) lhs.coeffs[i] -= a;
  AffineEquality row;
  row.rhs = rhs.constant - lhs.constant;
  std::size_t top = lhs.coeffs.empty() ? 0 : lhs.coeffs.rbegin()->first;
  max_index = std::max(max_index, top);
  row.coeffs.assign(top, Rational(0));
  for (const auto& [i, a] : lhs.coeffs) row.coeffs[i - 1] = a;
  return row;
}

}  // namespace

Predicate parse_predicate(std::string_view text,
                          std::optional<std::size_t> arity_hint) {
  auto t = detail::trim(text);
  auto colon = t.find(':');
  auto kind = detail::trim(t.substr(0, colon));
  auto body = colon == std::string_view::npos ? std::string_view{}
                                              : detail::trim(t.substr(colon + 1));

  if (kind == "aff") {
    Aff a;
    std::size_t max_index = 0;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto semi = body.find(';', pos);
      auto piece = detail::trim(body.substr(
          pos, semi == std::string_view::npos ? std::string_view::npos : semi - pos));
      if (!piece.empty()) a.rows.push_back(parse_equation(piece, max_index));
      if (semi == std::string_view::npos) break;
      pos = semi + 1;
    }
    if (a.rows.empty()) throw ParseError(0, "aff predicate without equalities");
    a.arity = arity_hint.value_or(max_index);
    if (a.arity < max_index) {
      throw ParseError(0, "aff mentions x" + std::to_string(max_index) +
                              " beyond arity " + std::to_string(a.arity));
    }
    for (auto& row : a.rows) row.coeffs.resize(a.arity, Rational(0));
    return a;
  }
  if (kind == "const") {
    auto eq = body.find('=');
    auto lhs = detail::trim(body.substr(0, eq));
    if (eq == std::string_view::npos || lhs.empty() || lhs.front() != 'x') {
      throw ParseError(0, "expected 'const: xI = C'");
    }
    ConstAt c;
    c.index = parse_index(lhs.substr(1));
    c.value = detail::parse_u64(detail::trim(body.substr(eq + 1)), 0, "constant");
    c.arity = arity_hint.value_or(c.index);
    if (c.arity < c.index) throw ParseError(0, "const index beyond arity");
    return c;
  }
  if (kind == "fin") {
    if (!arity_hint) throw ParseError(0, "fin predicates need an explicit arity");
    if (body.empty()) return Fin{*arity_hint};
    return FinK{detail::parse_u64(body, 0, "cardinality"), *arity_hint};
  }
  throw ParseError(0, "unknown predicate kind '" + std::string(kind) +
                          "' (expected aff, const or fin)");
}

namespace {

bool satisfies_identically(const AffineEquality& row, const cfg::SymState& s) {
  Rational constant = 0;
  std::vector<Rational> per_symbol(s.symbol_count() + 1, Rational(0));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& a = row.coeffs[i];
    if (a == 0) continue;
    const auto& atom = s[i];
    constant += a * Rational(Natural(std::to_string(atom.offset)));
    if (!atom.is_const()) per_symbol[atom.symbol] += a;
  }
  if (constant != row.rhs) return false;
  return std::all_of(per_symbol.begin(), per_symbol.end(),
                     [](const Rational& c) { return c == 0; });
}

bool compatible(const cfg::Atom& atom, cfg::Value c) {
  return atom.is_const() ? atom.offset == c : c >= atom.offset;
}

}  // namespace

bool holds(const Predicate& q, const cfg::StateSet& s) {
  const auto t = arity(q);
  for (const auto& st : s) {
    if (st.size() != t) {
      throw ContractError("state of length " + std::to_string(st.size()) +
                          " judged by a predicate of arity " + std::to_string(t));
    }
  }
  return std::visit(
      overloaded{
          [&](const Aff& a) {
            return std::all_of(s.begin(), s.end(), [&](const cfg::SymState& st) {
              return std::all_of(a.rows.begin(), a.rows.end(),
                                 [&](const AffineEquality& row) {
                                   return satisfies_identically(row, st);
                                 });
            });
          },
          [&](const ConstAt& c) {
            return std::any_of(s.begin(), s.end(), [&](const cfg::SymState& st) {
              return compatible(st[c.index - 1], c.value);
            });
          },
          [&](const FinK& f) {
            auto card = cfg::cardinality(s);
            return !card.infinite && card.count == f.k;
          },
          [&](const Fin&) { return !cfg::cardinality(s).infinite; },
      },
      q);
}

std::string to_string(const Verdict& v) {
  switch (v.kind) {
    case Verdict::Kind::True:
      return v.exact ? "true" : "true (tentative)";
    case Verdict::Kind::False:
      return v.exact ? "false" : "false (tentative)";
    case Verdict::Kind::Diverges:
      return "diverges";
    case Verdict::Kind::Unknown:
      break;
  }
  return "unknown";
}

Verdict eval_q(const cfg::Bacfg& g, const Predicate& q,
               std::span<const cfg::Value> input,
               const cfg::CollectOptions& options) {
  auto result = cfg::collect(g, input, options);
  const auto& end = result.states[g.end()];
  if (end.empty()) {
    return result.exact ? Verdict{Verdict::Kind::Diverges, true}
                        : Verdict::unknown();
  }
  bool ok = holds(q, cfg::project(end, arity(q), cfg::Padding::Free));
  return {ok ? Verdict::Kind::True : Verdict::Kind::False, result.exact};
}

namespace {

SweepReport sweep(const cfg::Bacfg& g, const Predicate& q,
                  std::span<const std::vector<cfg::Value>> grid,
                  const cfg::CollectOptions& options, bool universal) {
  SweepReport r;
  r.universal = universal;
  const bool empty_ok = accepts_empty(q);
  bool all_exact = true;
  bool any_sat = false;
  bool any_unsat = false;
  for (const auto& input : grid) {
    auto v = eval_q(g, q, input, options);
    switch (v.kind) {
      case Verdict::Kind::True: ++r.true_count; break;
      case Verdict::Kind::False: ++r.false_count; break;
      case Verdict::Kind::Diverges: ++r.diverges_count; break;
      case Verdict::Kind::Unknown: ++r.unknown_count; break;
    }
    if (!v.exact) {
      all_exact = false;
    } else {
      bool sat = v.kind == Verdict::Kind::True ||
                 (v.kind == Verdict::Kind::Diverges && empty_ok);
      (sat ? any_sat : any_unsat) = true;
    }
    r.rows.push_back({input, v});
  }
  if (universal) {
    r.outcome = any_unsat ? GridOutcome::Refuted
                : all_exact ? GridOutcome::Witnessed
                            : GridOutcome::Inconclusive;
  } else {
    r.outcome = any_sat ? GridOutcome::Witnessed
                : all_exact ? GridOutcome::Refuted
                            : GridOutcome::Inconclusive;
  }
  return r;
}

}  // namespace

SweepReport bounded_forall(const cfg::Bacfg& g, const Predicate& q,
                           std::span<const std::vector<cfg::Value>> grid,
                           const cfg::CollectOptions& options) {
  return sweep(g, q, grid, options, true);
}

SweepReport bounded_exists(const cfg::Bacfg& g, const Predicate& q,
                           std::span<const std::vector<cfg::Value>> grid,
                           const cfg::CollectOptions& options) {
  return sweep(g, q, grid, options, false);
}

std::vector<std::vector<cfg::Value>> parse_grid(std::string_view text) {
  std::vector<std::pair<cfg::Value, cfg::Value>> ranges;
  std::size_t pos = 0;
  auto t = detail::trim(text);
  if (t.empty()) throw ParseError(0, "empty grid");
  while (pos <= t.size()) {
    auto x = t.find('x', pos);
    auto piece = detail::trim(
        t.substr(pos, x == std::string_view::npos ? std::string_view::npos : x - pos));
    auto dots = piece.find("..");
    cfg::Value lo = 0, hi = 0;
    if (dots == std::string_view::npos) {
      lo = hi = detail::parse_u64(piece, 0, "grid bound");
    } else {
      lo = detail::parse_u64(piece.substr(0, dots), 0, "grid bound");
      hi = detail::parse_u64(piece.substr(dots + 2), 0, "grid bound");
    }
    if (lo > hi) throw ParseError(0, "empty grid range '" + std::string(piece) + "'");
    ranges.emplace_back(lo, hi);
    if (x == std::string_view::npos) break;
    pos = x + 1;
  }
  std::vector<std::vector<cfg::Value>> out{{}};
  for (auto [lo, hi] : ranges) {
    std::vector<std::vector<cfg::Value>> next;
    for (const auto& prefix : out) {
      for (auto v = lo; v <= hi; ++v) {
        auto p = prefix;
        p.push_back(v);
        next.push_back(std::move(p));
        if (v == hi) break;
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace urmflow::statesem
