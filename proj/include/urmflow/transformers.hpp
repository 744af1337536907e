#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "urmflow/bacfg.hpp"
#include "urmflow/urm.hpp"

namespace urmflow::transformers {

/// [x_dst .. x_dst+len-1] := [x_src .. x_src+len-1], simultaneously.
struct CopyBlock {
  cfg::Var dst;
  cfg::Var src;
  std::size_t len;
};

/// x_start+i := values[i] for each i.
struct LoadConsts {
  cfg::Var start;
  std::vector<cfg::Value> values;
};

/// [x_start .. x_start+len-1] := 0.
struct ZeroBlock {
  cfg::Var start;
  std::size_t len;
};

using MacroCmd = std::variant<CopyBlock, LoadConsts, ZeroBlock>;

/// Sequential commands realizing the macro. Block copies run high-to-low when
/// moving up and low-to-high when moving down, so overlapping blocks never
/// read a clobbered variable. Constants are loaded in unary.
std::vector<cfg::Command> expand_macro(const MacroCmd& m);

/// A graph that never reaches its end: start s carries the single self-edge
/// x_k := x_k (so k_G = k) and end e has no incoming edge. Requires k >= 1.
cfg::Bacfg diverging_bacfg(cfg::Var k);

/// Branching: a fresh start guards x1=c1? into Ga and x1=c2? into Gb, and both
/// ends fall through to a fresh end. Nodes are renamed `a/...` and `b/...`.
/// Throws ContractError when c1 == c2.
cfg::Bacfg branch(const cfg::Bacfg& ga, const cfg::Bacfg& gb, cfg::Value c1,
                  cfg::Value c2);

/// Discharging: drops the first of n+1 inputs. Shifts x2..x_{n+1} down, makes
/// x_{n+1} undefined by copying from a never-written variable, then runs Ga.
cfg::Bacfg discharge(const cfg::Bacfg& ga, std::size_t n, std::size_t t);

/// Strong smn composition: on input y (n values) stores y above the registers of b, runs
/// tau(b) on the fixed arguments z, restores y into x2..x_{n+1}, undefines
/// x_{n+2}..x_{max(k_a,t)} and runs Ga on (phi_b(z), y, ...).
cfg::Bacfg smn_compose(const cfg::Bacfg& ga, const urm::Program& b,
                       std::span<const cfg::Value> z, std::size_t n,
                       std::size_t t);

}  // namespace urmflow::transformers
