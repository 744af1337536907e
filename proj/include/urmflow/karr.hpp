#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "urmflow/bacfg.hpp"
#include "urmflow/rational.hpp"
#include "urmflow/statesem.hpp"
#include "urmflow/symstate.hpp"

namespace urmflow::karr {

using statesem::AffineEquality;

/// An affine subspace of Q^k, or Bottom.
///
/// Non-Bottom spaces keep both forms: constraint rows [A | b] in reduced row
/// echelon form (so equal spaces have identical rows) and generators
/// (a point plus a basis of directions) derived from them.
class AffineSpace {
 public:
  static AffineSpace bottom(std::size_t k);
  static AffineSpace top(std::size_t k);
  /// The 0-dimensional space {v}.
  static AffineSpace from_point(std::span<const Rational> v);
  /// Bottom when the rows are inconsistent.
  static AffineSpace from_constraints(std::size_t k,
                                      std::vector<AffineEquality> rows);
  /// point + span(directions); directions may be dependent or zero.
  static AffineSpace from_generators(RationalVector point,
                                     const std::vector<RationalVector>& directions);

  /// Ambient dimension k.
  std::size_t ambient() const noexcept { return k_; }
  bool is_bottom() const noexcept { return bottom_; }
  /// k - rank; -1 for Bottom.
  long dimension() const noexcept;
  const std::vector<AffineEquality>& constraints() const noexcept { return rows_; }
  const RationalVector& point() const;
  const std::vector<RationalVector>& basis() const;

  bool contains(std::span<const Rational> v) const;

  friend bool operator==(const AffineSpace&, const AffineSpace&) = default;

 private:
  std::size_t k_ = 0;
  bool bottom_ = true;
  std::vector<AffineEquality> rows_;
  RationalVector point_;
  std::vector<RationalVector> basis_;
};

/// Affine hull of the ground instances of S in Q^k: per member, its value at
/// all symbols = 0 plus one direction per symbol. Members must have k
/// coordinates.
AffineSpace hull_of_stateset(const cfg::StateSet& s, std::size_t k);

AffineSpace join(const AffineSpace& a, const AffineSpace& b);
/// a ⊆ b
bool includes(const AffineSpace& b, const AffineSpace& a);
/// Adds free coordinates up to k (no-op when already that large).
AffineSpace extend(const AffineSpace& a, std::size_t k);

/// Image under Zero/Copy/Succ.
AffineSpace assign_image(const AffineSpace& a, const cfg::Command& c);
/// Intersection with a guard's hyperplane.
AffineSpace meet_hyperplane(const AffineSpace& a, const cfg::Command& c);
/// Edge transfer: assign_image or meet_hyperplane depending on c.
AffineSpace transfer(const AffineSpace& a, const cfg::Command& c);

struct Entailment {
  bool holds = false;
  /// holds only because the space is Bottom (unreachable point).
  bool vacuous = false;
};

/// Whether every equality of q is a consequence of a. Arities must match.
Entailment entails(const AffineSpace& a, const statesem::Aff& q);

struct KarrMap {
  std::vector<AffineSpace> spaces;  ///< indexed by NodeId
  /// Strict value changes during the worklist run, the initial one included.
  std::size_t updates = 0;
};

/// Initial space for an input vector: the hull of the projected input state.
AffineSpace initial_space(const cfg::Bacfg& g, std::span<const cfg::Value> input,
                          cfg::Padding pad = cfg::Padding::Free);

/// Least fixpoint of start ⊒ init, dst ⊒ transfer(src) by FIFO worklist.
/// `init` must live in Q^k with k >= k_G.
KarrMap analyze(const cfg::Bacfg& g, const AffineSpace& init);

struct VerifyResult {
  bool proved = false;
  bool vacuous = false;
  AffineSpace end;
};

/// Proved iff the invariant at the end node entails q. Coordinates beyond
/// the working dimension are unconstrained. Sound, never complete.
VerifyResult verify(const cfg::Bacfg& g, const AffineSpace& init,
                    const statesem::Aff& q);

/// `⊥`, `⊤`, or the equalities with integer coefficients joined by `; `.
std::string to_string(const AffineSpace& a);

}  // namespace urmflow::karr
