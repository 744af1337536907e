#include <doctest.h>

#include <random>

#include "support/corpus.hpp"
#include "urmflow/error.hpp"
#include "urmflow/statesem.hpp"
#include "urmflow/tau.hpp"
#include "urmflow/transformers.hpp"

using namespace urmflow;
using namespace urmflow::statesem;
using cfg::Atom;
using cfg::StateSet;
using cfg::SymState;
using cfg::Value;

namespace {

SymState ground(std::vector<Value> v) { return SymState::ground(v); }
using K = Verdict::Kind;

}  // namespace

TEST_CASE("parse_predicate") {
  auto a = std::get<Aff>(parse_predicate("aff: 2*x1 - 1*x2 = 0; x3 = 1"));
  CHECK(a.arity == 3);
  REQUIRE(a.rows.size() == 2);
  CHECK(a.rows[0].coeffs == RationalVector{2, -1, 0});
  CHECK(a.rows[0].rhs == 0);
  CHECK(a.rows[1].coeffs == RationalVector{0, 0, 1});
  CHECK(a.rows[1].rhs == 1);

  auto b = std::get<Aff>(parse_predicate("aff: 1/2 x1 + 3 = x2 - 1", 4));
  CHECK(b.arity == 4);
  CHECK(b.rows[0].coeffs == RationalVector{Rational(1, 2), -1, 0, 0});
  CHECK(b.rows[0].rhs == -4);

  CHECK(parse_predicate("const: x2 = 5") == Predicate{ConstAt{2, 5, 2}});
  CHECK(parse_predicate("fin: 3", 2) == Predicate{FinK{3, 2}});
  CHECK(parse_predicate("fin", 1) == Predicate{Fin{1}});

  CHECK_THROWS_AS(parse_predicate("fin"), ParseError);
  CHECK_THROWS_AS(parse_predicate("aff: x1 = 0 = 1"), ParseError);
  CHECK_THROWS_AS(parse_predicate("aff: x3 = 0", 2), ParseError);
  CHECK_THROWS_AS(parse_predicate("aff: x0 = 0"), ParseError);
  CHECK_THROWS_AS(parse_predicate("box: x1 = 0"), ParseError);
  CHECK_THROWS_AS(parse_predicate("aff:"), ParseError);

  SUBCASE("printing reparses") {
    for (const char* text : {"aff: 2*x1 - x2 = 0; x3 = 1", "const: x2 = 5", "aff: -1/3*x2 = 7"}) {
      auto q = parse_predicate(text);
      CHECK(parse_predicate(to_string(q), arity(q)) == q);
    }
  }
}

TEST_CASE("holds") {
  auto aff = parse_predicate("aff: 2*x1 - x2 = 0");
  CHECK(holds(aff, {ground({1, 2}), ground({2, 4})}));
  CHECK_FALSE(holds(aff, {ground({1, 2}), ground({2, 5})}));
  CHECK(holds(aff, {}));
  CHECK_FALSE(holds(parse_predicate("aff: x1 = 0", 2), {SymState({Atom::sym(1), Atom::constant(3)})}));
  // x2 - x1 = 1 is an identity on (omega, omega+1).
  CHECK(holds(parse_predicate("aff: x2 - x1 = 1"), {SymState({Atom::sym(1), Atom::sym(1, 1)})}));

  auto c = parse_predicate("const: x2 = 5");
  CHECK(holds(c, {SymState({Atom::constant(0), Atom::sym(1, 3)})}));
  CHECK_FALSE(holds(c, {SymState({Atom::constant(0), Atom::sym(1, 6)})}));
  CHECK_FALSE(holds(c, {}));

  CHECK(holds(FinK{2, 1}, {ground({1}), ground({2})}));
  CHECK_FALSE(holds(FinK{1, 1}, {SymState({Atom::sym(1)})}));
  CHECK(holds(FinK{0, 1}, {}));
  CHECK(holds(Fin{1}, {ground({4})}));
  CHECK_FALSE(holds(Fin{1}, {SymState({Atom::sym(1)})}));

  CHECK_THROWS_AS(holds(aff, {ground({1})}), ContractError);

  SUBCASE("ground aff agrees with brute force") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> coef(-2, 2);
    std::uniform_int_distribution<Value> val(0, 3);
    for (int trial = 0; trial < 200; ++trial) {
      Aff q{{{{coef(rng), coef(rng)}, coef(rng)}}, 2};
      StateSet s;
      for (int i = 0; i < 3; ++i) s.insert(ground({val(rng), val(rng)}));
      bool expected = true;
      for (const auto& st : s) {
        auto v = st.values();
        Rational lhs = q.rows[0].coeffs[0] * Rational(static_cast<long>(v[0])) +
                       q.rows[0].coeffs[1] * Rational(static_cast<long>(v[1]));
        expected = expected && lhs == q.rows[0].rhs;
      }
      CHECK(holds(q, s) == expected);
    }
  }
  SUBCASE("const agrees with instantiation") {
    for (Value off = 0; off <= 6; ++off) {
      StateSet s{SymState({Atom::constant(0), Atom::sym(1, off)})};
      auto inst = corpus::instances(s, 10);
      for (Value v = 0; v <= 6; ++v) {
        bool expected = std::any_of(inst.begin(), inst.end(),
                                    [&](const auto& x) { return x[1] == v; });
        CHECK(holds(ConstAt{2, v, 2}, s) == expected);
      }
    }
  }
}

TEST_CASE("eval_q") {
  auto adder = tau::compile(corpus::program(corpus::kAdder));
  std::vector<Value> in{2, 3, 0, 0};
  cfg::CollectOptions zero{.fuel = 300, .padding = cfg::Padding::Zero};
  auto v = eval_q(adder.graph, parse_predicate("aff: x1 = 5"), in, zero);
  CHECK(v.kind == K::True);
  // The URM run certifies what the fixpoint cannot.
  CHECK(urm::eval_phi(corpus::program(corpus::kAdder), 2, std::vector<Value>{2, 3}, 100) == 5);
  auto acc = zero;
  acc.iteration = cfg::Iteration::Accelerated;
  CHECK(eval_q(adder.graph, parse_predicate("aff: x1 = 5"), in, acc) == Verdict{K::True, true});
  CHECK(eval_q(adder.graph, parse_predicate("aff: x1 = 4"), in, acc) == Verdict{K::False, true});

  auto dead = transformers::diverging_bacfg(2);
  std::vector<Value> any{4};
  CHECK(eval_q(dead, parse_predicate("aff: x1 = 0"), any, {.fuel = 10}) == Verdict{K::Diverges, true});

  auto loop = tau::compile(corpus::program(corpus::kLoop));
  std::vector<Value> l{0, 0};
  CHECK(eval_q(loop.graph, Fin{1}, l, {.fuel = 300, .padding = cfg::Padding::Zero}) == Verdict::unknown());

  CHECK(to_string(Verdict{K::True, false}) == "true (tentative)");
  CHECK(to_string(Verdict{K::Diverges, true}) == "diverges");

  SUBCASE("agrees with the URM oracle on the corpus") {
    for (const auto& [name, p] : corpus::programs()) {
      CAPTURE(name);
      auto t = tau::compile(p);
      for (Value a = 0; a <= 2; ++a) {
        for (Value b = 0; b <= 2; ++b) {
          std::vector<Value> args{a, b};
          args.resize(std::max<std::size_t>(2, t.graph.variable_count()), 0);
          auto out = urm::run(p, std::span(args).first(std::max<std::size_t>(2, p.registers())), 200);
          for (Value target = 0; target <= 4; ++target) {
            ConstAt q{1, target, 1};
            auto verdict = eval_q(t.graph, q, args, {.fuel = 200, .padding = cfg::Padding::Zero});
            if (auto* h = std::get_if<urm::Halted>(&out)) {
              CHECK(verdict.kind == (h->regs[0] == target ? K::True : K::False));
            } else {
              CHECK(verdict == Verdict::unknown());
            }
          }
        }
      }
    }
  }
  SUBCASE("monotone fuel for certified verdicts") {
    auto monus = tau::compile(corpus::program(corpus::kMonus));
    std::vector<Value> args{5, 2, 0, 0, 0, 0};
    auto fuel = tau::simulation_fuel(corpus::program(corpus::kMonus), std::span(args).first(5), 500);
    REQUIRE(fuel);
    for (std::uint64_t f = *fuel; f < *fuel + 40; f += 7) {
      auto r = eval_q(monus.graph, parse_predicate("aff: x1 = 3"), args,
                      {.fuel = f, .padding = cfg::Padding::Zero});
      CHECK(r.kind == K::True);
    }
  }
}

TEST_CASE("bounded sweeps") {
  auto grid = parse_grid("0..2x0..3");
  CHECK(grid.size() == 12);
  CHECK(grid.front() == std::vector<Value>{0, 0});
  CHECK(grid[1] == std::vector<Value>{0, 1});
  CHECK(grid.back() == std::vector<Value>{2, 3});
  CHECK(parse_grid("3").size() == 1);
  CHECK_THROWS_AS(parse_grid("3..1"), ParseError);
  CHECK_THROWS_AS(parse_grid("a..b"), ParseError);

  auto zeroing = cfg::parse_bacfg("start s\nend e\nedge s e zero 1\n");
  auto all = bounded_forall(zeroing, parse_predicate("aff: x1 = 0"), grid, {});
  CHECK(all.true_count == grid.size());
  CHECK(all.outcome == GridOutcome::Witnessed);

  auto loop = tau::compile(corpus::program(corpus::kLoop));
  auto unknown = bounded_forall(loop.graph, Fin{1}, grid, {.fuel = 50});
  CHECK(unknown.unknown_count == grid.size());
  CHECK(unknown.outcome == GridOutcome::Inconclusive);

  // Only x1 = 1 passes the guard.
  auto guarded = cfg::parse_bacfg("start s\nend e\nedge s e eqc 1 1\n");
  auto q = parse_predicate("aff: x1 = 1");
  auto mixed = bounded_forall(guarded, q, grid, {});
  CHECK(mixed.true_count == 4);
  CHECK(mixed.diverges_count == 8);
  CHECK(mixed.outcome == GridOutcome::Witnessed);  // aff accepts the empty set
  for (const auto& row : mixed.rows) {
    CHECK(row.verdict == eval_q(guarded, q, row.input, {}));
  }
  auto c = parse_predicate("const: x1 = 1");
  CHECK(bounded_forall(guarded, c, grid, {}).outcome == GridOutcome::Refuted);
  CHECK(bounded_exists(guarded, c, grid, {}).outcome == GridOutcome::Witnessed);
  CHECK(bounded_exists(guarded, parse_predicate("const: x1 = 2"), grid, {}).outcome ==
        GridOutcome::Refuted);
  CHECK(bounded_exists(loop.graph, Fin{1}, grid, {.fuel = 20}).outcome ==
        GridOutcome::Inconclusive);
}
