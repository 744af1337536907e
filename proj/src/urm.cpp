#include "urmflow/urm.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "overloaded.hpp"
#include "text_util.hpp"
#include "urmflow/error.hpp"

namespace urmflow::urm {

namespace {

using detail::overloaded;

Register max_register(const Instr& instr) {
  return std::visit(
      overloaded{
          [](const Zero& z) { return z.n; },
          [](const Succ& s) { return s.n; },
          [](const Transfer& t) { return std::max(t.src, t.dst); },
          [](const Jump& j) { return std::max(j.lhs, j.rhs); },
      },
      instr);
}

Register min_register(const Instr& instr) {
  return std::visit(
      overloaded{
          [](const Zero& z) { return z.n; },
          [](const Succ& s) { return s.n; },
          [](const Transfer& t) { return std::min(t.src, t.dst); },
          [](const Jump& j) { return std::min(j.lhs, j.rhs); },
      },
      instr);
}

}  // namespace

std::string to_string(const Instr& instr) {
  return std::visit(
      overloaded{
          [](const Zero& z) { return "Z " + std::to_string(z.n); },
          [](const Succ& s) { return "S " + std::to_string(s.n); },
          [](const Transfer& t) {
            return "T " + std::to_string(t.src) + " " + std::to_string(t.dst);
          },
          [](const Jump& j) {
            return "J " + std::to_string(j.lhs) + " " + std::to_string(j.rhs) +
                   " " + std::to_string(j.target);
          },
      },
      instr);
}

Program::Program(std::vector<Instr> instrs) : instrs_(std::move(instrs)) {
  const Position end = instrs_.size() + 1;
  for (auto& instr : instrs_) {
    if (min_register(instr) == 0) {
      throw ContractError("register index 0 in instruction '" +
                          to_string(instr) + "'");
    }
    registers_ = std::max(registers_, max_register(instr));
    if (auto* j = std::get_if<Jump>(&instr); j && (j->target == 0 || j->target > end)) {
      j->target = end;
    }
  }
}

const Instr& Program::at(Position pc) const {
  if (pc == 0 || pc > instrs_.size()) {
    throw ContractError("instruction index " + std::to_string(pc) +
                        " outside [1, " + std::to_string(instrs_.size()) + "]");
  }
  return instrs_[pc - 1];
}

bool Program::has_jumps() const noexcept {
  return std::any_of(instrs_.begin(), instrs_.end(), [](const Instr& i) {
    return std::holds_alternative<Jump>(i);
  });
}

Program parse_program(std::string_view text) {
  std::vector<Instr> instrs;
  for (auto [line_no, raw] : detail::numbered_lines(text)) {
    auto tokens = detail::split_ws(detail::strip_comment(raw));
    if (tokens.empty()) continue;

    auto op = tokens[0];
    auto expect_args = [&, line_no = line_no](std::size_t n) {
      if (tokens.size() != n + 1) {
        throw ParseError(line_no, "'" + std::string(op) + "' takes " +
                                      std::to_string(n) + " operand(s), got " +
                                      std::to_string(tokens.size() - 1));
      }
    };
    auto reg = [&, line_no = line_no](std::size_t i) {
      auto v = detail::parse_u64(tokens[i], line_no, "register index");
      if (v == 0) throw ParseError(line_no, "register index 0 is not allowed");
      if (v > std::numeric_limits<Register>::max()) {
        throw ParseError(line_no, "register index too large");
      }
      return static_cast<Register>(v);
    };

    if (op == "Z" || op == "z") {
      expect_args(1);
      instrs.emplace_back(Zero{reg(1)});
    } else if (op == "S" || op == "s") {
      expect_args(1);
      instrs.emplace_back(Succ{reg(1)});
    } else if (op == "T" || op == "t") {
      expect_args(2);
      instrs.emplace_back(Transfer{reg(1), reg(2)});
    } else if (op == "J" || op == "j") {
      expect_args(3);
      auto target = detail::parse_u64(tokens[3], line_no, "jump target");
      instrs.emplace_back(Jump{reg(1), reg(2), static_cast<Position>(target)});
    } else {
      throw ParseError(line_no, "unknown instruction '" + std::string(op) + "'");
    }
  }
  return Program(std::move(instrs));
}

std::string to_text(const Program& program) {
  std::ostringstream out;
  for (const auto& instr : program.instrs()) out << to_string(instr) << '\n';
  return out.str();
}

Config initial_config(const Program& program, std::span<const Value> input) {
  Config c;
  c.regs.assign(std::max<std::size_t>(program.registers(), input.size()), 0);
  std::copy(input.begin(), input.end(), c.regs.begin());
  c.pc = 1;
  return c;
}

bool halted(const Program& program, const Config& config) {
  return config.pc == program.halt_position();
}

Config step(const Program& program, const Config& config) {
  if (config.pc == 0 || config.pc > program.size()) {
    throw ContractError("step on a halted or invalid configuration (pc=" +
                        std::to_string(config.pc) + ")");
  }
  if (config.regs.size() < program.registers()) {
    throw ContractError("register file shorter than k_P");
  }
  Config next = config;
  std::visit(overloaded{
                 [&](const Zero& z) {
                   next.regs[z.n - 1] = 0;
                   ++next.pc;
                 },
                 [&](const Succ& s) {
                   auto& r = next.regs[s.n - 1];
                   if (r == std::numeric_limits<Value>::max()) {
                     throw OverflowError("register " + std::to_string(s.n) +
                                         " overflowed");
                   }
                   ++r;
                   ++next.pc;
                 },
                 [&](const Transfer& t) {
                   next.regs[t.dst - 1] = config.regs[t.src - 1];
                   ++next.pc;
                 },
                 [&](const Jump& j) {
                   if (config.regs[j.lhs - 1] == config.regs[j.rhs - 1]) {
                     next.pc = j.target;
                   } else {
                     ++next.pc;
                   }
                 },
             },
             program.at(config.pc));
  return next;
}

RunOutcome run(const Program& program, std::span<const Value> input,
               std::uint64_t fuel) {
  Config c = initial_config(program, input);
  std::uint64_t steps = 0;
  while (!halted(program, c)) {
    if (steps == fuel) return OutOfFuel{std::move(c), steps};
    c = step(program, c);
    ++steps;
  }
  return Halted{std::move(c.regs), steps};
}

std::vector<Config> trace(const Program& program, std::span<const Value> input,
                          std::uint64_t fuel) {
  std::vector<Config> out{initial_config(program, input)};
  for (std::uint64_t i = 0; i < fuel && !halted(program, out.back()); ++i) {
    out.push_back(step(program, out.back()));
  }
  return out;
}

std::optional<Value> eval_phi(const Program& program, std::size_t arity,
                              std::span<const Value> args, std::uint64_t fuel) {
  if (args.size() != arity) {
    throw ContractError("expected " + std::to_string(arity) +
                        " argument(s), got " + std::to_string(args.size()));
  }
  auto outcome = run(program, args, fuel);
  if (auto* h = std::get_if<Halted>(&outcome)) {
    return h->regs.empty() ? Value{0} : h->regs.front();
  }
  return std::nullopt;
}

std::optional<std::uint64_t> step_count(const Program& program,
                                        std::span<const Value> args,
                                        std::uint64_t fuel) {
  auto outcome = run(program, args, fuel);
  if (auto* h = std::get_if<Halted>(&outcome)) return h->steps;
  return std::nullopt;
}

bool blum_predicate(const Program& program, std::span<const Value> args,
                    std::uint64_t m) {
  auto steps = step_count(program, args, m);
  return steps && *steps == m;
}

std::optional<std::vector<Value>> domain_equiv_refute(
    const Program& p, const Program& q,
    std::span<const std::vector<Value>> window, std::uint64_t fuel) {
  for (const auto& input : window) {
    bool p_halts = std::holds_alternative<Halted>(run(p, input, fuel));
    bool q_halts = std::holds_alternative<Halted>(run(q, input, fuel));
    if (p_halts != q_halts) return input;
  }
  return std::nullopt;
}

}  // namespace urmflow::urm
