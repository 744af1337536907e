#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "urmflow/bacfg.hpp"
#include "urmflow/collecting.hpp"
#include "urmflow/rational.hpp"
#include "urmflow/symstate.hpp"

namespace urmflow::statesem {

/// coeffs . x = rhs
struct AffineEquality {
  RationalVector coeffs;
  Rational rhs;
  friend bool operator==(const AffineEquality&, const AffineEquality&) = default;
};

/// Every state satisfies every equality.
struct Aff {
  std::vector<AffineEquality> rows;
  std::size_t arity = 0;
  friend bool operator==(const Aff&, const Aff&) = default;
};

/// Some state has coordinate `index` (1-based) equal to `value`.
struct ConstAt {
  std::size_t index = 1;
  cfg::Value value = 0;
  std::size_t arity = 0;
  friend bool operator==(const ConstAt&, const ConstAt&) = default;
};

/// Exactly k states.
struct FinK {
  std::uint64_t k = 0;
  std::size_t arity = 0;
  friend bool operator==(const FinK&, const FinK&) = default;
};

/// Finitely many states.
struct Fin {
  std::size_t arity = 0;
  friend bool operator==(const Fin&, const Fin&) = default;
};

using Predicate = std::variant<Aff, ConstAt, FinK, Fin>;

/// `2*x1 - x2 = 0`
std::string to_string(const AffineEquality& row);

std::size_t arity(const Predicate& q);
/// Whether the empty set satisfies q (the predicate accepts divergence).
bool accepts_empty(const Predicate& q);
std::string to_string(const Predicate& q);

/// Parses `aff: 2*x1 - 1*x2 = 0; x3 = 1`, `const: x2 = 5`, `fin: 3`, `fin`.
/// Coefficients may be written `p/q`. Without an explicit arity, aff and const
/// use the largest variable index mentioned; fin forms need one.
Predicate parse_predicate(std::string_view text,
                          std::optional<std::size_t> arity = std::nullopt);

/// Decides S in Q on the symbolic representation. Every member of `s` must
/// have arity(q) coordinates (ContractError otherwise). Aff holds when each
/// equality is an identity in the symbols of every member.
bool holds(const Predicate& q, const cfg::StateSet& s);

struct Verdict {
  enum class Kind { True, False, Diverges, Unknown };
  Kind kind = Kind::Unknown;
  /// Backed by a converged fixpoint. Diverges is always exact, Unknown never.
  bool exact = false;

  static Verdict unknown() { return {Kind::Unknown, false}; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

std::string to_string(const Verdict& v);

/// Fueled state semantics Q_G(input): runs the collecting semantics and
/// judges the end-node set projected to arity(q). An empty end set gives
/// Diverges after convergence and Unknown otherwise; non-empty end sets give
/// True/False carrying the convergence flag.
Verdict eval_q(const cfg::Bacfg& g, const Predicate& q,
               std::span<const cfg::Value> input,
               const cfg::CollectOptions& options);

struct SweepRow {
  std::vector<cfg::Value> input;
  Verdict verdict;
};

/// Outcome over a finite grid, using exact verdicts only.
enum class GridOutcome {
  Witnessed,     ///< the quantified statement holds on every/some grid point
  Refuted,       ///< an exact verdict contradicts it
  Inconclusive,  ///< fuel ran out before a decision
};

struct SweepReport {
  bool universal = true;
  std::vector<SweepRow> rows;
  std::size_t true_count = 0;
  std::size_t false_count = 0;
  std::size_t diverges_count = 0;
  std::size_t unknown_count = 0;
  GridOutcome outcome = GridOutcome::Inconclusive;
};

/// Bounded exploration of "Q holds at the end node for every input" over a
/// finite grid. Not a decision procedure: the set of graphs satisfying it
/// for all inputs is not recursive.
SweepReport bounded_forall(const cfg::Bacfg& g, const Predicate& q,
                           std::span<const std::vector<cfg::Value>> grid,
                           const cfg::CollectOptions& options);
/// Same for "Q holds for some input".
SweepReport bounded_exists(const cfg::Bacfg& g, const Predicate& q,
                           std::span<const std::vector<cfg::Value>> grid,
                           const cfg::CollectOptions& options);

/// `0..4x0..4` -> the 25 points, first coordinate varying slowest. A single
/// value `3` is the range 3..3.
std::vector<std::vector<cfg::Value>> parse_grid(std::string_view text);

}  // namespace urmflow::statesem
