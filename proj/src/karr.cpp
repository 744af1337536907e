#include "urmflow/karr.hpp"

#include <deque>
#include <numeric>

#include "overloaded.hpp"
#include "urmflow/collecting.hpp"
#include "urmflow/error.hpp"

namespace urmflow::karr {

using detail::overloaded;

namespace {

/// Rows of [A | b] with k + 1 entries each.
using Matrix = std::vector<RationalVector>;

struct Reduced {
  Matrix rows;                      ///< nonzero rows in RREF
  std::vector<std::size_t> pivots;  ///< pivot column per row
  bool consistent = true;
};

/// Gauss-Jordan elimination over Q of an augmented matrix with k unknowns.
Reduced reduce(Matrix m, std::size_t k) {
  Reduced r;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < k && rank < m.size(); ++col) {
    std::size_t p = rank;
    while (p < m.size() && m[p][col] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    const Rational lead = m[rank][col];
    for (auto& x : m[rank]) x /= lead;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == rank || m[i][col] == 0) continue;
      const Rational f = m[i][col];
      for (std::size_t j = col; j <= k; ++j) m[i][j] -= f * m[rank][j];
    }
    r.pivots.push_back(col);
    ++rank;
  }
  for (std::size_t i = rank; i < m.size(); ++i) {
    if (m[i][k] != 0) r.consistent = false;
  }
  m.resize(rank);
  r.rows = std::move(m);
  return r;
}

/// Solutions of a consistent reduced system: particular point with free
/// variables at 0, and one direction per free column.
std::pair<RationalVector, std::vector<RationalVector>> solve(const Reduced& r,
                                                             std::size_t k) {
  RationalVector point(k, Rational(0));
  std::vector<bool> is_pivot(k, false);
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    point[r.pivots[i]] = r.rows[i][k];
    is_pivot[r.pivots[i]] = true;
  }
  std::vector<RationalVector> basis;
  for (std::size_t f = 0; f < k; ++f) {
    if (is_pivot[f]) continue;
    RationalVector v(k, Rational(0));
    v[f] = 1;
    for (std::size_t i = 0; i < r.rows.size(); ++i) v[r.pivots[i]] = -r.rows[i][f];
    basis.push_back(std::move(v));
  }
  return {std::move(point), std::move(basis)};
}

Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0) s += a[i] * b[i];
  }
  return s;
}

RationalVector as_rational(const cfg::SymState& s, std::uint32_t symbol) {
  RationalVector v(s.size(), Rational(0));
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (symbol == 0) {
      v[i] = Rational(Natural(std::to_string(s[i].offset)));
    } else if (s[i].symbol == symbol) {
      v[i] = 1;
    }
  }
  return v;
}

void require_var(cfg::Var v, std::size_t k, const cfg::Command& c) {
  if (v == 0 || v > k) {
    throw ContractError("command " + cfg::to_string(c) + " is outside Q^" +
                        std::to_string(k));
  }
}

}  // namespace

AffineSpace AffineSpace::bottom(std::size_t k) {
  AffineSpace a;
  a.k_ = k;
  return a;
}

AffineSpace AffineSpace::top(std::size_t k) { return from_constraints(k, {}); }

AffineSpace AffineSpace::from_point(std::span<const Rational> v) {
  return from_generators(RationalVector(v.begin(), v.end()), {});
}

AffineSpace AffineSpace::from_constraints(std::size_t k,
                                          std::vector<AffineEquality> rows) {
  Matrix m;
  m.reserve(rows.size());
  for (auto& row : rows) {
    if (row.coeffs.size() != k) {
      throw ContractError("constraint row does not live in Q^" + std::to_string(k));
    }
    RationalVector r = std::move(row.coeffs);
    r.push_back(row.rhs);
    m.push_back(std::move(r));
  }
  auto red = reduce(std::move(m), k);
  AffineSpace a;
  a.k_ = k;
  if (!red.consistent) return a;
  a.bottom_ = false;
  for (const auto& r : red.rows) {
    a.rows_.push_back({RationalVector(r.begin(), r.end() - 1), r.back()});
  }
  std::tie(a.point_, a.basis_) = solve(red, k);
  return a;
}

AffineSpace AffineSpace::from_generators(
    RationalVector point, const std::vector<RationalVector>& directions) {
  const std::size_t k = point.size();
  // Constraint normals are the null space of the direction matrix.
  Matrix m;
  for (const auto& d : directions) {
    if (d.size() != k) throw ContractError("generator dimension mismatch");
    RationalVector r = d;
    r.push_back(Rational(0));
    m.push_back(std::move(r));
  }
  auto normals = solve(reduce(std::move(m), k), k).second;
  std::vector<AffineEquality> rows;
  for (auto& a : normals) {
    Rational rhs = dot(a, point);
    rows.push_back({std::move(a), rhs});
  }
  return from_constraints(k, std::move(rows));
}

long AffineSpace::dimension() const noexcept {
  if (bottom_) return -1;
  return static_cast<long>(k_) - static_cast<long>(rows_.size());
}

const RationalVector& AffineSpace::point() const {
  if (bottom_) throw ContractError("point() of the empty space");
  return point_;
}

const std::vector<RationalVector>& AffineSpace::basis() const {
  if (bottom_) throw ContractError("basis() of the empty space");
  return basis_;
}

bool AffineSpace::contains(std::span<const Rational> v) const {
  if (v.size() != k_) throw ContractError("point dimension mismatch");
  if (bottom_) return false;
  RationalVector p(v.begin(), v.end());
  for (const auto& row : rows_) {
    if (dot(row.coeffs, p) != row.rhs) return false;
  }
  return true;
}

AffineSpace hull_of_stateset(const cfg::StateSet& s, std::size_t k) {
  if (s.empty()) return AffineSpace::bottom(k);
  std::optional<RationalVector> base;
  std::vector<RationalVector> dirs;
  for (const auto& st : s) {
    if (st.size() != k) {
      throw ContractError("state of length " + std::to_string(st.size()) +
                          " in a hull over Q^" + std::to_string(k));
    }
    auto p = as_rational(st, 0);
    if (!base) {
      base = p;
    } else {
      for (std::size_t i = 0; i < k; ++i) p[i] -= (*base)[i];
      dirs.push_back(std::move(p));
    }
    for (std::uint32_t sym = 1; sym <= st.symbol_count(); ++sym) {
      dirs.push_back(as_rational(st, sym));
    }
  }
  return AffineSpace::from_generators(std::move(*base), dirs);
}

AffineSpace join(const AffineSpace& a, const AffineSpace& b) {
  if (a.ambient() != b.ambient()) throw ContractError("join of spaces of different dimension");
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  std::vector<RationalVector> dirs = a.basis();
  dirs.insert(dirs.end(), b.basis().begin(), b.basis().end());
  RationalVector d = b.point();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= a.point()[i];
  dirs.push_back(std::move(d));
  return AffineSpace::from_generators(a.point(), dirs);
}

bool includes(const AffineSpace& b, const AffineSpace& a) {
  if (a.ambient() != b.ambient()) throw ContractError("inclusion of spaces of different dimension");
  if (a.is_bottom()) return true;
  if (b.is_bottom()) return false;
  if (!b.contains(a.point())) return false;
  for (const auto& v : a.basis()) {
    for (const auto& row : b.constraints()) {
      if (dot(row.coeffs, v) != 0) return false;
    }
  }
  return true;
}

AffineSpace extend(const AffineSpace& a, std::size_t k) {
  if (k <= a.ambient()) return a;
  if (a.is_bottom()) return AffineSpace::bottom(k);
  auto rows = a.constraints();
  for (auto& r : rows) r.coeffs.resize(k, Rational(0));
  return AffineSpace::from_constraints(k, std::move(rows));
}

AffineSpace assign_image(const AffineSpace& a, const cfg::Command& c) {
  const auto k = a.ambient();
  // x_n := x_m + shift, or x_n := 0 when m == 0.
  cfg::Var n = 0, m = 0;
  int shift = 0;
  std::visit(overloaded{
                 [&](const cfg::Zero& z) { n = z.n; },
                 [&](const cfg::Copy& cp) { n = cp.n, m = cp.m; },
                 [&](const cfg::Succ& s) { n = s.n, m = s.m, shift = 1; },
                 [&](const auto&) {
                   throw ContractError("assign_image of guard " + cfg::to_string(c));
                 },
             },
             c);
  require_var(n, k, c);
  if (m) require_var(m, k, c);
  if (a.is_bottom()) return a;
  auto image = [&](RationalVector v, bool affine) {
    v[n - 1] = m ? v[m - 1] : Rational(0);
    if (affine) v[n - 1] += shift;
    return v;
  };
  std::vector<RationalVector> dirs;
  for (const auto& v : a.basis()) dirs.push_back(image(v, false));
  return AffineSpace::from_generators(image(a.point(), true), dirs);
}

AffineSpace meet_hyperplane(const AffineSpace& a, const cfg::Command& c) {
  const auto k = a.ambient();
  AffineEquality row{RationalVector(k, Rational(0)), Rational(0)};
  std::visit(overloaded{
                 [&](const cfg::GuardVarEq& g) {
                   require_var(g.n, k, c);
                   require_var(g.m, k, c);
                   row.coeffs[g.n - 1] += 1;
                   row.coeffs[g.m - 1] -= 1;
                 },
                 [&](const cfg::GuardConstEq& g) {
                   require_var(g.n, k, c);
                   row.coeffs[g.n - 1] = 1;
                   row.rhs = Rational(Natural(std::to_string(g.v)));
                 },
                 [&](const auto&) {
                   throw ContractError("meet_hyperplane of assignment " + cfg::to_string(c));
                 },
             },
             c);
  if (a.is_bottom()) return a;
  auto rows = a.constraints();
  rows.push_back(std::move(row));
  return AffineSpace::from_constraints(k, std::move(rows));
}

AffineSpace transfer(const AffineSpace& a, const cfg::Command& c) {
  return cfg::is_guard(c) ? meet_hyperplane(a, c) : assign_image(a, c);
}

Entailment entails(const AffineSpace& a, const statesem::Aff& q) {
  if (q.arity != a.ambient()) {
    throw ContractError("predicate of arity " + std::to_string(q.arity) +
                        " against a space in Q^" + std::to_string(a.ambient()));
  }
  if (a.is_bottom()) return {true, true};
  for (const auto& row : q.rows) {
    if (dot(row.coeffs, a.point()) != row.rhs) return {};
    for (const auto& v : a.basis()) {
      if (dot(row.coeffs, v) != 0) return {};
    }
  }
  return {true, false};
}

AffineSpace initial_space(const cfg::Bacfg& g, std::span<const cfg::Value> input,
                          cfg::Padding pad) {
  const auto k = cfg::working_dimension(g, input.size());
  return hull_of_stateset(
      cfg::project(cfg::StateSet{cfg::SymState::ground(input)}, k, pad), k);
}

KarrMap analyze(const cfg::Bacfg& g, const AffineSpace& init) {
  if (init.ambient() < g.variable_count()) {
    throw ContractError("initial space has fewer coordinates than the graph's variables");
  }
  const auto k = init.ambient();
  KarrMap out;
  out.spaces.assign(g.node_count(), AffineSpace::bottom(k));
  std::vector<std::vector<const cfg::Edge*>> outgoing(g.node_count());
  for (const auto& e : g.edges()) outgoing[e.src].push_back(&e);

  std::deque<cfg::NodeId> work;
  std::vector<bool> queued(g.node_count(), false);
  auto update = [&](cfg::NodeId v, const AffineSpace& incoming) {
    auto next = join(out.spaces[v], incoming);
    if (next == out.spaces[v]) return;
    out.spaces[v] = std::move(next);
    ++out.updates;
    if (!queued[v]) {
      queued[v] = true;
      work.push_back(v);
    }
  };
  update(g.start(), init);
  while (!work.empty()) {
    auto u = work.front();
    work.pop_front();
    queued[u] = false;
    for (const auto* e : outgoing[u]) update(e->dst, transfer(out.spaces[u], e->cmd));
  }
  return out;
}

VerifyResult verify(const cfg::Bacfg& g, const AffineSpace& init,
                    const statesem::Aff& q) {
  auto map = analyze(g, init);
  const auto k = std::max(init.ambient(), q.arity);
  VerifyResult r;
  r.end = extend(map.spaces[g.end()], k);
  statesem::Aff padded = q;
  padded.arity = k;
  for (auto& row : padded.rows) row.coeffs.resize(k, Rational(0));
  auto e = entails(r.end, padded);
  r.proved = e.holds;
  r.vacuous = e.vacuous;
  return r;
}

std::string to_string(const AffineSpace& a) {
  if (a.is_bottom()) return "⊥";
  if (a.constraints().empty()) return "⊤";
  std::string out;
  for (const auto& row : a.constraints()) {
    // Scale to coprime integers with a positive leading coefficient.
    Natural l = 1;
    for (const auto& c : row.coeffs) l = lcm(l, Natural(c.get_den()));
    l = lcm(l, Natural(row.rhs.get_den()));
    statesem::AffineEquality shown = row;
    for (auto& c : shown.coeffs) c *= l;
    shown.rhs *= l;
    Natural g = 0;
    for (const auto& c : shown.coeffs) g = gcd(g, Natural(c.get_num()));
    g = gcd(g, Natural(shown.rhs.get_num()));
    for (auto& c : shown.coeffs) c /= g;
    shown.rhs /= g;
    if (!out.empty()) out += "; ";
    out += statesem::to_string(shown);
  }
  return out;
}

}  // namespace urmflow::karr
