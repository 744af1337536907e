#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace urmflow::urm {

using Value = std::uint64_t;
/// Registers are numbered from 1.
using Register = std::uint32_t;
/// Instructions are numbered from 1; t+1 is the halting position.
using Position = std::size_t;

/// z(n): r_n <- 0
struct Zero {
  Register n;
  friend auto operator<=>(const Zero&, const Zero&) = default;
};

/// s(n): r_n <- r_n + 1
struct Succ {
  Register n;
  friend auto operator<=>(const Succ&, const Succ&) = default;
};

/// t(m,n): r_n <- r_m. Written `T m n` in assembly.
struct Transfer {
  Register src;
  Register dst;
  friend auto operator<=>(const Transfer&, const Transfer&) = default;
};

/// j(m,n,p): jump to p when r_m = r_n, otherwise fall through.
struct Jump {
  Register lhs;
  Register rhs;
  Position target;
  friend auto operator<=>(const Jump&, const Jump&) = default;
};

using Instr = std::variant<Zero, Succ, Transfer, Jump>;

std::string to_string(const Instr& instr);

/// An immutable URM program (I_1, ..., I_t).
///
/// Construction validates register indices (>= 1) and normalizes every jump
/// target outside [1, t+1] to t+1, so a running configuration always keeps
/// pc in [1, t+1].
class Program {
 public:
  Program() = default;
  explicit Program(std::vector<Instr> instrs);

  std::size_t size() const noexcept { return instrs_.size(); }
  bool empty() const noexcept { return instrs_.empty(); }
  /// k_P: the largest register index used, 0 for the empty program.
  Register registers() const noexcept { return registers_; }
  const std::vector<Instr>& instrs() const noexcept { return instrs_; }
  /// 1-based access.
  const Instr& at(Position pc) const;
  Position halt_position() const noexcept { return instrs_.size() + 1; }
  bool has_jumps() const noexcept;

  friend bool operator==(const Program&, const Program&) = default;

 private:
  std::vector<Instr> instrs_;
  Register registers_ = 0;
};

struct Config {
  std::vector<Value> regs;
  Position pc = 1;
  friend bool operator==(const Config&, const Config&) = default;
};

struct Halted {
  std::vector<Value> regs;
  std::uint64_t steps = 0;
};

struct OutOfFuel {
  Config last;
  std::uint64_t steps = 0;
};

using RunOutcome = std::variant<Halted, OutOfFuel>;

/// Parses URM assembly: one of `Z n`, `S n`, `T m n`, `J m n p` per line,
/// `#` starts a comment, blank lines are ignored.
Program parse_program(std::string_view text);
std::string to_text(const Program& program);

/// Register file of length max(k_P, |input|), input first, zeros after.
Config initial_config(const Program& program, std::span<const Value> input);

bool halted(const Program& program, const Config& config);

/// One transition of the operational semantics. Stepping a halted
/// configuration throws ContractError; a successor overflowing 64 bits throws
/// OverflowError.
Config step(const Program& program, const Config& config);

RunOutcome run(const Program& program, std::span<const Value> input,
               std::uint64_t fuel);

/// Every configuration visited, starting with the initial one. The trace ends
/// at the halting configuration or after `fuel` steps.
std::vector<Config> trace(const Program& program, std::span<const Value> input,
                          std::uint64_t fuel);

/// phi_p^(arity)(args): register 1 of the halted state, nullopt when the run
/// does not halt within `fuel` steps.
std::optional<Value> eval_phi(const Program& program, std::size_t arity,
                              std::span<const Value> args, std::uint64_t fuel);

/// Blum step-count Phi: number of steps to halt, nullopt when not within fuel.
std::optional<std::uint64_t> step_count(const Program& program,
                                        std::span<const Value> args,
                                        std::uint64_t fuel);

/// Decides Phi_p(args) = m by running at most m steps.
bool blum_predicate(const Program& program, std::span<const Value> args,
                    std::uint64_t m);

/// Searches `window` for an input on which exactly one of the programs halts
/// within `fuel`. nullopt means no counterexample up to fuel, which does not
/// establish domain equivalence.
std::optional<std::vector<Value>> domain_equiv_refute(
    const Program& p, const Program& q,
    std::span<const std::vector<Value>> window, std::uint64_t fuel);

}  // namespace urmflow::urm
