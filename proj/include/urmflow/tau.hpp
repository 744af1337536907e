#pragma once

#include <map>
#include <string>
#include <string_view>

#include "urmflow/bacfg.hpp"
#include "urmflow/symstate.hpp"
#include "urmflow/urm.hpp"

namespace urmflow::tau {

/// Where the compiler put each instruction's nodes.
struct TauMeta {
  std::map<urm::Position, std::string> q_nodes;    ///< 1..t+1
  std::map<urm::Position, std::string> inc_nodes;  ///< jump positions only
  urm::Register k_p = 0;
  /// The auxiliary counter z, always k_P + 1.
  cfg::Var z_index() const { return k_p + 1; }

  friend bool operator==(const TauMeta&, const TauMeta&) = default;
};

struct TauBacfg {
  cfg::Bacfg graph;
  TauMeta meta;
};

/// Compiles a URM program into a BACFG with start q1 and end q{t+1}.
///
/// z(n), s(n), t(m,n) become one assignment edge q_i -> q_{i+1}. A jump
/// j(m,n,p) becomes the guard x_m=x_n? into q_p plus the inc_i gadget
/// (z:=x_m+1 and z:=x_n+1 into inc_i, z:=z+1 on inc_i, and the guards x_n=z?,
/// x_m=z? into q_{i+1}). Jump-free programs get an unreachable node `dead`
/// with the self-loop z:=z so that k_G = k_P + 1 always.
TauBacfg compile(const urm::Program& program);

/// Meta text: `kp N`, `q i NODE`, `inc i NODE`, one per line.
std::string meta_to_text(const TauMeta& meta);
TauMeta parse_meta(std::string_view text);

/// Delta-steps the compiled graph needs to simulate the transition out of
/// `config`: 1 for non-jumps and taken jumps, |x_m - x_n| + 1 otherwise.
std::uint64_t simulation_cost(const urm::Program& program,
                              const urm::Config& config);

/// Total Delta-steps to reach q{t+1} along a halting run, or nullopt when the
/// run does not halt within `fuel` URM steps.
std::optional<std::uint64_t> simulation_fuel(const urm::Program& program,
                                             std::span<const urm::Value> input,
                                             std::uint64_t fuel);

/// The relation X ~ X' on ground maps over a compiled graph: equal
/// k_P-projections at every q node, and at every inc_i equal subsets with
/// z <= x_m for each outgoing guard x_m = z?. Throws ContractError on
/// symbolic input.
bool approx_equiv(const cfg::Bacfg& graph, const TauMeta& meta,
                  const cfg::NodeMap& x, const cfg::NodeMap& y);

}  // namespace urmflow::tau
