#include "urmflow/goedel.hpp"

#include <limits>
#include <vector>

#include "overloaded.hpp"
#include "urmflow/error.hpp"

namespace urmflow::goedel {

using detail::overloaded;

namespace {

constexpr std::size_t kMaxDecodedInstructions = std::size_t{1} << 20;

Natural nat(std::uint64_t v) {
  Natural n;
  mpz_import(n.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return n;
}

std::uint64_t to_u64(const Natural& n, const char* what) {
  if (sgn(n) < 0 || mpz_sizeinbase(n.get_mpz_t(), 2) > 64) {
    throw OverflowError(std::string(what) + " does not fit in 64 bits");
  }
  std::uint64_t v = 0;
  mpz_export(&v, nullptr, 1, sizeof(v), 0, 0, n.get_mpz_t());
  return v;
}

urm::Register to_register(const Natural& payload) {
  auto v = to_u64(payload, "register index");
  if (v >= std::numeric_limits<urm::Register>::max()) {
    throw OverflowError("decoded register index too large");
  }
  return static_cast<urm::Register>(v + 1);
}

Natural encode_instr(const urm::Instr& instr) {
  return std::visit(
      overloaded{
          [](const urm::Zero& z) { return pair(0, nat(z.n - 1)); },
          [](const urm::Succ& s) { return pair(1, nat(s.n - 1)); },
          [](const urm::Transfer& t) {
            return pair(2, pair(nat(t.src - 1), nat(t.dst - 1)));
          },
          [](const urm::Jump& j) {
            return pair(3, pair(nat(j.lhs - 1),
                                pair(nat(j.rhs - 1), nat(j.target - 1))));
          },
      },
      instr);
}

urm::Instr decode_instr(const Natural& code, std::size_t program_size) {
  auto [tag, payload] = unpair(code);
  if (tag == 0) return urm::Zero{to_register(payload)};
  if (tag == 1) return urm::Succ{to_register(payload)};
  if (tag == 2) {
    auto [m, n] = unpair(payload);
    return urm::Transfer{to_register(m), to_register(n)};
  }
  if (tag == 3) {
    auto [m, rest] = unpair(payload);
    auto [n, p] = unpair(rest);
    // Targets past t+1 normalize to t+1 anyway; clamp before narrowing.
    urm::Position target = program_size + 1;
    if (p < nat(program_size + 1)) {
      target = static_cast<urm::Position>(to_u64(p, "jump target")) + 1;
    }
    return urm::Jump{to_register(m), to_register(n), target};
  }
  return urm::Zero{1};
}

}  // namespace

Natural pair(const Natural& x, const Natural& y) {
  Natural s = x + y;
  Natural tri = s * (s + 1) / 2;
  return tri + y;
}

std::pair<Natural, Natural> unpair(const Natural& z) {
  if (sgn(z) < 0) throw ContractError("unpair of a negative number");
  // w = floor((sqrt(8z+1) - 1) / 2)
  Natural disc = 8 * z + 1;
  Natural root;
  mpz_sqrt(root.get_mpz_t(), disc.get_mpz_t());
  Natural w = (root - 1) / 2;
  Natural tri = w * (w + 1) / 2;
  Natural y = z - tri;
  Natural x = w - y;
  return {x, y};
}

Natural encode_program(const urm::Program& program) {
  const auto& instrs = program.instrs();
  Natural nest = 0;
  if (!instrs.empty()) {
    nest = encode_instr(instrs.back());
    for (auto it = instrs.rbegin() + 1; it != instrs.rend(); ++it) {
      nest = pair(encode_instr(*it), nest);
    }
  }
  return pair(nat(instrs.size()), nest);
}

urm::Program decode_program(const Natural& code) {
  auto [length, nest] = unpair(code);
  if (length > nat(kMaxDecodedInstructions)) {
    throw OverflowError("decoded program length too large");
  }
  const auto t = static_cast<std::size_t>(to_u64(length, "program length"));
  std::vector<urm::Instr> instrs;
  instrs.reserve(t);
  Natural rest = nest;
  for (std::size_t i = 0; i < t; ++i) {
    if (i + 1 == t) {
      instrs.push_back(decode_instr(rest, t));
    } else {
      auto [head, tail] = unpair(rest);
      instrs.push_back(decode_instr(head, t));
      rest = tail;
    }
  }
  return urm::Program(std::move(instrs));
}

std::size_t smn_prefix_length(const urm::Program& e, std::size_t m,
                              std::span<const urm::Value> fixed) {
  if (m == 0) return 0;
  std::size_t moved = e.registers() > m ? e.registers() - m : 0;
  std::size_t length = moved + m;
  for (auto v : fixed) length += v;
  return length;
}

urm::Program smn_specialize(const urm::Program& e, std::size_t m,
                            std::span<const urm::Value> fixed) {
  if (fixed.size() != m) {
    throw ContractError("smn: expected " + std::to_string(m) +
                        " fixed value(s), got " + std::to_string(fixed.size()));
  }
  if (m == 0) return e;
  if (m > std::numeric_limits<urm::Register>::max() / 2) {
    throw OverflowError("smn: too many fixed arguments");
  }
  const auto shift = static_cast<urm::Register>(m);
  const urm::Register moved = e.registers() > shift ? e.registers() - shift : 0;

  std::vector<urm::Instr> out;
  out.reserve(smn_prefix_length(e, m, fixed) + e.size());
  for (urm::Register r = moved; r >= 1; --r) {
    out.emplace_back(urm::Transfer{r, r + shift});
  }
  for (urm::Register r = 1; r <= shift; ++r) {
    out.emplace_back(urm::Zero{r});
    for (urm::Value k = 0; k < fixed[r - 1]; ++k) out.emplace_back(urm::Succ{r});
  }
  const std::size_t prefix = out.size();
  for (const auto& instr : e.instrs()) {
    if (const auto* j = std::get_if<urm::Jump>(&instr)) {
      out.emplace_back(urm::Jump{j->lhs, j->rhs, j->target + prefix});
    } else {
      out.push_back(instr);
    }
  }
  return urm::Program(std::move(out));
}

}  // namespace urmflow::goedel
