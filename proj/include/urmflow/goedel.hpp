#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "urmflow/rational.hpp"
#include "urmflow/urm.hpp"

namespace urmflow::goedel {

/// Cantor pairing (x+y)(x+y+1)/2 + y over arbitrary-precision naturals.
Natural pair(const Natural& x, const Natural& y);
std::pair<Natural, Natural> unpair(const Natural& z);

/// Gödel number of a program: pair(t, nest) where nest right-folds the
/// instruction codes with `pair` (0 for the empty program). Instruction codes
/// are pair(tag, payload) with tags Z=0, S=1, T=2, J=3 and 1-based operands
/// stored shifted down by one.
Natural encode_program(const urm::Program& program);

/// Total inverse of encode_program on its image. Tags above 3 decode as Z 1.
/// Throws OverflowError when a decoded register index or the instruction
/// count is beyond what a program can hold.
urm::Program decode_program(const Natural& code);

/// Classical smn construction: a program q with phi_q^(n)(y) =
/// phi_e^(m+n)(fixed, y) for every n. The prefix moves registers
/// 1..k_e-m up by m (highest first), loads each fixed value in unary, then
/// runs e with jump targets relocated past the prefix.
urm::Program smn_specialize(const urm::Program& e, std::size_t m,
                            std::span<const urm::Value> fixed);

/// Number of instructions smn_specialize prepends.
std::size_t smn_prefix_length(const urm::Program& e, std::size_t m,
                              std::span<const urm::Value> fixed);

}  // namespace urmflow::goedel
