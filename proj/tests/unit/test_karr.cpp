#include <doctest.h>

#include <random>

#include "support/corpus.hpp"
#include "urmflow/collecting.hpp"
#include "urmflow/error.hpp"
#include "urmflow/karr.hpp"

using namespace urmflow;
using namespace urmflow::karr;
using cfg::Value;

namespace {

RationalVector rv(std::initializer_list<long> v) {
  RationalVector out;
  for (long x : v) out.emplace_back(x);
  return out;
}

AffineSpace point(std::initializer_list<long> v) { return AffineSpace::from_point(rv(v)); }

statesem::Aff aff(const char* text, std::size_t arity) {
  return std::get<statesem::Aff>(statesem::parse_predicate(text, arity));
}

/// Smallest-integer affine relations a.x = b (|a_i| <= 2, |b| <= 6) that hold
/// on every point: a brute-force description of the hull.
std::vector<std::pair<std::vector<int>, int>> relations(
    const std::vector<std::vector<Value>>& pts, std::size_t k) {
  std::vector<std::pair<std::vector<int>, int>> out;
  std::vector<int> a(k, -2);
  for (;;) {
    if (std::any_of(a.begin(), a.end(), [](int x) { return x != 0; })) {
      for (int b = -6; b <= 6; ++b) {
        bool ok = std::all_of(pts.begin(), pts.end(), [&](const auto& p) {
          long s = 0;
          for (std::size_t i = 0; i < k; ++i) s += a[i] * static_cast<long>(p[i]);
          return s == b;
        });
        if (ok) out.push_back({a, b});
      }
    }
    std::size_t i = 0;
    while (i < k && a[i] == 2) a[i++] = -2;
    if (i == k) break;
    ++a[i];
  }
  return out;
}

bool satisfies(const AffineSpace& s, const std::vector<int>& a, int b) {
  statesem::Aff q{{{RationalVector(a.begin(), a.end()), Rational(b)}}, a.size()};
  return entails(s, q).holds;
}

AffineSpace random_space(std::mt19937& rng, std::size_t k) {
  std::uniform_int_distribution<int> val(-3, 3);
  std::uniform_int_distribution<int> dims(0, static_cast<int>(k));
  RationalVector p(k);
  for (auto& x : p) {
    x = Rational(val(rng), 1 + rng() % 2);
    x.canonicalize();
  }
  std::vector<RationalVector> dirs(dims(rng), RationalVector(k));
  for (auto& d : dirs) {
    for (auto& x : d) x = val(rng);
  }
  if (rng() % 8 == 0) return AffineSpace::bottom(k);
  return AffineSpace::from_generators(p, dirs);
}

}  // namespace

TEST_CASE("from_point") {
  auto p = point({3, 4});
  CHECK(p.dimension() == 0);
  CHECK(p.constraints().size() == 2);
  CHECK(entails(p, aff("aff: x1 = 3; x2 = 4", 2)).holds);
  auto zero = AffineSpace::from_point(RationalVector{});
  CHECK(zero.ambient() == 0);
  CHECK_FALSE(zero.is_bottom());
  CHECK(to_string(p) == "x1 = 3; x2 = 4");
}

TEST_CASE("hull_of_stateset") {
  using cfg::Atom;
  auto line = hull_of_stateset({cfg::SymState::ground(std::vector<Value>{0, 0}),
                                cfg::SymState::ground(std::vector<Value>{1, 2})}, 2);
  CHECK(line.dimension() == 1);
  CHECK(entails(line, aff("aff: 2*x1 - x2 = 0", 2)).holds);
  CHECK(to_string(line) == "2*x1 - x2 = 0");

  auto diag = hull_of_stateset({cfg::SymState({Atom::sym(1), Atom::sym(1, 1)})}, 2);
  CHECK(entails(diag, aff("aff: x2 - x1 = 1", 2)).holds);
  CHECK(diag.dimension() == 1);
  CHECK(hull_of_stateset({}, 3) == AffineSpace::bottom(3));

  SUBCASE("agrees with the brute-force relation search") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<Value> val(0, 3);
    for (int trial = 0; trial < 60; ++trial) {
      cfg::StateSet s;
      std::vector<std::vector<Value>> pts;
      for (int i = 0, n = 1 + trial % 3; i < n; ++i) {
        std::vector<Value> v{val(rng), val(rng), val(rng)};
        s.insert(cfg::SymState::ground(v));
        pts.push_back(v);
      }
      auto h = hull_of_stateset(s, 3);
      for (const auto& [a, b] : relations(pts, 3)) CHECK(satisfies(h, a, b));
      for (const auto& p : pts) {
        RationalVector q(p.begin(), p.end());
        CHECK(h.contains(q));
      }
      // Dimension of the hull of up to three points: collinearity by cross
      // product.
      std::vector<std::vector<long>> d;
      for (const auto& st : s) {
        auto v = st.values();
        auto b = s.begin()->values();
        d.push_back({long(v[0]) - long(b[0]), long(v[1]) - long(b[1]), long(v[2]) - long(b[2])});
      }
      long expected = static_cast<long>(s.size()) - 1;
      if (s.size() == 3) {
        const auto& u = d[1];
        const auto& w = d[2];
        bool collinear = u[1] * w[2] == u[2] * w[1] && u[2] * w[0] == u[0] * w[2] &&
                         u[0] * w[1] == u[1] * w[0];
        if (collinear) expected = 1;
      }
      CHECK(h.dimension() == expected);
    }
  }
}

TEST_CASE("join") {
  auto j = join(point({0, 0}), point({1, 2}));
  CHECK(entails(j, aff("aff: 2*x1 - x2 = 0", 2)).holds);
  auto a = point({5, 1});
  CHECK(join(a, AffineSpace::bottom(2)) == a);
  CHECK(join(AffineSpace::bottom(2), a) == a);
  CHECK(join(a, a) == a);
  CHECK_THROWS_AS(join(a, point({1})), ContractError);
}

TEST_CASE("assign_image") {
  auto full = AffineSpace::top(2);
  auto img = assign_image(full, cfg::Succ{2, 1});
  CHECK(img == AffineSpace::from_constraints(2, {{rv({-1, 1}), 1}}));
  CHECK(assign_image(point({3, 4}), cfg::Zero{1}) == point({0, 4}));
  auto diag = AffineSpace::from_constraints(2, {{rv({1, -1}), 0}});
  CHECK(assign_image(diag, cfg::Copy{1, 2}) == diag);
  CHECK_THROWS_AS(assign_image(full, cfg::GuardVarEq{1, 2}), ContractError);
  CHECK_THROWS_AS(assign_image(full, cfg::Zero{3}), ContractError);
}

TEST_CASE("meet_hyperplane") {
  auto line = AffineSpace::from_constraints(2, {{rv({2, -1}), 0}});
  CHECK(meet_hyperplane(line, cfg::GuardConstEq{1, 1}) == point({1, 2}));
  CHECK(meet_hyperplane(point({0, 4}), cfg::GuardConstEq{1, 1}).is_bottom());
  auto implied = AffineSpace::from_constraints(2, {{rv({1, -1}), 0}});
  CHECK(meet_hyperplane(implied, cfg::GuardVarEq{2, 1}) == implied);
  CHECK_THROWS_AS(meet_hyperplane(line, cfg::Zero{1}), ContractError);
}

TEST_CASE("entails") {
  auto line = AffineSpace::from_constraints(2, {{rv({2, -1}), 0}});
  CHECK(entails(line, aff("aff: 4*x1 - 2*x2 = 0", 2)).holds);
  CHECK_FALSE(entails(AffineSpace::top(2), aff("aff: x1 = 0", 2)).holds);
  auto vac = entails(AffineSpace::bottom(2), aff("aff: x1 = 7", 2));
  CHECK(vac.holds);
  CHECK(vac.vacuous);
  CHECK_THROWS_AS(entails(line, aff("aff: x1 = 0", 3)), ContractError);
  CHECK(to_string(AffineSpace::top(2)) == "⊤");
  CHECK(to_string(AffineSpace::bottom(2)) == "⊥");
}

TEST_CASE("analyze and verify") {
  auto g = corpus::diamond();
  std::vector<Value> in{7, 7};
  auto init = initial_space(g, in);
  auto map = analyze(g, init);
  auto v = map.spaces[g.end()];
  CHECK(entails(v, aff("aff: 2*x1 - x2 = 0", 2)).holds);
  CHECK(v.dimension() == 1);
  CHECK(verify(g, init, aff("aff: 2*x1 - x2 = 0", 2)).proved);
  CHECK(map.updates <= g.node_count() * (g.variable_count() + 2));

  SUBCASE("unreachable node") {
    auto h = cfg::parse_bacfg("start s\nend e\nnode island\nedge s e zero 1\n");
    std::vector<Value> one{1};
    CHECK(analyze(h, initial_space(h, one)).spaces[h.node("island")].is_bottom());
  }
  SUBCASE("straight line equals the hull of the exact result") {
    auto h = cfg::parse_bacfg("start s\nend e\nedge s a succ 2 1\nedge a b zero 1\nedge b e succ 1 2\n");
    std::vector<Value> in2{4};
    auto r = cfg::collect(h, in2, {});
    REQUIRE(r.exact);
    auto m = analyze(h, initial_space(h, in2));
    for (cfg::NodeId n = 0; n < h.node_count(); ++n) {
      CHECK(m.spaces[n] == hull_of_stateset(r.states[n], 2));
    }
  }
  SUBCASE("dead guard is a false negative") {
    auto d = corpus::dead_guard();
    std::vector<Value> z{0, 0};
    auto r = cfg::collect(d, z, {});
    REQUIRE(r.exact);
    CHECK(r.states[d.end()].empty());
    auto res = verify(d, initial_space(d, z), aff("aff: x2 = 5", 2));
    CHECK_FALSE(res.proved);
    CHECK(res.end == point({1, 1}));
  }
  SUBCASE("final assignments are proved") {
    auto h = cfg::parse_bacfg("start s\nend e\nedge s a zero 2\nedge a e succ 1 2\n");
    std::vector<Value> in3{9, 9};
    CHECK(verify(h, initial_space(h, in3), aff("aff: x1 = 1", 1)).proved);
    CHECK(verify(h, initial_space(h, in3), aff("aff: x3 = 1", 3)).proved == false);
  }
}

TEST_CASE("lattice laws on random spaces") {
  std::mt19937 rng(29);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t k = 1 + trial % 4;
    auto a = random_space(rng, k), b = random_space(rng, k), c = random_space(rng, k);
    CHECK(join(a, b) == join(b, a));
    CHECK(join(join(a, b), c) == join(a, join(b, c)));
    CHECK(join(a, a) == a);
    auto ab = join(a, b);
    CHECK(includes(ab, a));
    CHECK(includes(ab, b));
    // Least: any space including a and b includes the join.
    if (includes(c, a) && includes(c, b)) CHECK(includes(c, ab));
    auto ac = join(a, c);
    if (includes(ac, b)) CHECK(includes(ac, ab));
    cfg::Command guard = cfg::GuardVarEq{1, static_cast<cfg::Var>(k)};
    CHECK(includes(a, meet_hyperplane(a, guard)));
    CHECK(includes(a, meet_hyperplane(a, cfg::GuardConstEq{1, 2})));
  }
}

TEST_CASE("canonical form") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> val(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + trial % 3;
    auto s = random_space(rng, k);
    if (s.is_bottom()) continue;
    // Random invertible row operations on the constraint system.
    auto rows = s.constraints();
    for (int op = 0; op < 5 && rows.size() > 1; ++op) {
      auto i = rng() % rows.size(), j = rng() % rows.size();
      if (i == j) continue;
      Rational f = val(rng);
      for (std::size_t c = 0; c < k; ++c) rows[i].coeffs[c] += f * rows[j].coeffs[c];
      rows[i].rhs += f * rows[j].rhs;
      std::swap(rows[i], rows[j]);
    }
    for (auto& r : rows) {
      for (auto& x : r.coeffs) x *= 3;
      r.rhs *= 3;
    }
    rows.push_back(rows.empty() ? statesem::AffineEquality{RationalVector(k), 0} : rows.front());
    CHECK(AffineSpace::from_constraints(k, rows) == s);
  }
}
