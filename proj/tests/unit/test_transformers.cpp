#include <doctest.h>

#include <random>

#include "support/corpus.hpp"
#include "urmflow/collecting.hpp"
#include "urmflow/error.hpp"
#include "urmflow/statesem.hpp"
#include "urmflow/transformers.hpp"

using namespace urmflow;
using namespace urmflow::transformers;
using cfg::Command;
using cfg::Value;

namespace {

std::vector<Command> cmds(std::initializer_list<Command> c) { return c; }

std::vector<Value> run_seq(const std::vector<Command>& seq, std::vector<Value> v) {
  auto s = cfg::SymState::ground(v);
  for (const auto& c : seq) s = *cfg::apply(c, s);
  return s.values();
}

const cfg::CollectOptions kExact{.fuel = 400, .iteration = cfg::Iteration::Accelerated};

}  // namespace

TEST_CASE("expand_macro") {
  CHECK(expand_macro(CopyBlock{3, 1, 5}) ==
        cmds({cfg::Copy{7, 5}, cfg::Copy{6, 4}, cfg::Copy{5, 3}, cfg::Copy{4, 2}, cfg::Copy{3, 1}}));
  CHECK(expand_macro(CopyBlock{1, 2, 3}) ==
        cmds({cfg::Copy{1, 2}, cfg::Copy{2, 3}, cfg::Copy{3, 4}}));
  CHECK(expand_macro(LoadConsts{1, {2}}) ==
        cmds({cfg::Zero{1}, cfg::Succ{1, 1}, cfg::Succ{1, 1}}));
  CHECK(expand_macro(ZeroBlock{2, 2}) == cmds({cfg::Zero{2}, cfg::Zero{3}}));
  CHECK(expand_macro(CopyBlock{4, 4, 3}).empty());
  CHECK(expand_macro(CopyBlock{4, 1, 0}).empty());
  CHECK(expand_macro(LoadConsts{1, {}}).empty());

  SUBCASE("block copies behave simultaneously") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<Value> val(0, 50);
    for (cfg::Var dst = 1; dst <= 6; ++dst) {
      for (cfg::Var src = 1; src <= 6; ++src) {
        for (std::size_t len = 0; len <= 5; ++len) {
          std::vector<Value> v(12);
          for (auto& x : v) x = val(rng);
          auto expected = v;
          for (std::size_t i = 0; i < len; ++i) expected[dst - 1 + i] = v[src - 1 + i];
          CHECK(run_seq(expand_macro(CopyBlock{dst, src, len}), v) == expected);
        }
      }
    }
  }
}

TEST_CASE("diverging_bacfg") {
  auto g = diverging_bacfg(2);
  CHECK(g.node_count() == 2);
  CHECK(g.start() != g.end());
  CHECK(g.variable_count() == 2);
  CHECK(g.edges().size() == 1);
  std::vector<Value> in{1, 2};
  auto r = cfg::collect(g, in, {.fuel = 10});
  CHECK(r.exact);
  CHECK(r.iterations <= 2);
  CHECK(statesem::eval_q(g, statesem::Fin{2}, in, {.fuel = 10}).kind ==
        statesem::Verdict::Kind::Diverges);
  CHECK_THROWS_AS(diverging_bacfg(0), ContractError);
}

TEST_CASE("branch") {
  auto ga = cfg::parse_bacfg("start s\nend e\nedge s e succ 2 2\n");
  auto gb = cfg::parse_bacfg("start s\nend e\nedge s e zero 2\n");
  auto g = branch(ga, gb, 0, 1);
  CHECK(g.node_count() == ga.node_count() + gb.node_count() + 2);
  CHECK_THROWS_AS(branch(ga, gb, 3, 3), ContractError);
  CHECK(cfg::parse_bacfg(cfg::to_text(g)).node_count() == g.node_count());

  auto q = statesem::parse_predicate("aff: x2 = 0", 2);
  for (Value y = 0; y <= 3; ++y) {
    std::vector<Value> a{0, y}, b{1, y}, c{2, y};
    CHECK(statesem::eval_q(g, q, a, {}) == statesem::eval_q(ga, q, a, {}));
    CHECK(statesem::eval_q(g, q, b, {}) == statesem::eval_q(gb, q, b, {}));
    CHECK(statesem::eval_q(g, q, c, {}).kind == statesem::Verdict::Kind::Diverges);
  }
  SUBCASE("identical sides agree") {
    auto same = branch(ga, ga, 0, 1);
    auto q1 = statesem::parse_predicate("aff: x2 = 1", 2);
    std::vector<Value> a{0, 0}, b{1, 0};
    CHECK(statesem::eval_q(same, q1, a, {}).kind == statesem::eval_q(ga, q1, a, {}).kind);
    CHECK(statesem::eval_q(same, q1, b, {}).kind == statesem::eval_q(ga, q1, b, {}).kind);
  }
}

TEST_CASE("discharge") {
  // Ga sums into x1 through a copy chain and ignores x3.
  auto ga = cfg::parse_bacfg("start s\nend e\nedge s m copy 3 1\nedge m e succ 1 2\n");
  auto g = discharge(ga, 2, 2);
  auto q = statesem::parse_predicate("aff: x1 - x2 = 1", 2);
  for (Value x = 0; x <= 3; ++x) {
    for (Value y1 = 0; y1 <= 2; ++y1) {
      for (Value y2 = 0; y2 <= 2; ++y2) {
        std::vector<Value> in{x, y1, y2}, tail{y1, y2};
        CHECK(statesem::eval_q(g, q, in, {}) == statesem::eval_q(ga, q, tail, {}));
      }
    }
  }
  SUBCASE("the first input never reaches the end node") {
    std::vector<Value> a{0, 1, 2}, b{9, 1, 2};
    auto ra = cfg::collect(g, a, {});
    auto rb = cfg::collect(g, b, {});
    CHECK(ra.states[g.end()] == rb.states[g.end()]);
  }
  SUBCASE("zero and free padding agree when x_{n+1} is ignored") {
    auto q1 = statesem::parse_predicate("aff: x1 = 2", 1);
    std::vector<Value> tail{1, 1};
    CHECK(statesem::eval_q(ga, q1, tail, {}) ==
          statesem::eval_q(ga, q1, tail, {.padding = cfg::Padding::Zero}));
  }
}

TEST_CASE("smn_compose") {
  auto adder = corpus::program(corpus::kAdder);
  // Ga: x1 = 3? guards the end, then copies x2 into x1.
  auto ga = cfg::parse_bacfg("start s\nend e\nedge s m eqc 1 3\nedge m e copy 1 2\n");
  std::vector<Value> z{1, 2};
  auto g = smn_compose(ga, adder, z, 1, 2);
  auto q = statesem::parse_predicate("aff: x1 - x2 = 0", 2);
  for (Value y = 0; y <= 3; ++y) {
    std::vector<Value> in{y}, shifted{3, y};
    auto lhs = statesem::eval_q(g, q, in, kExact);
    auto rhs = statesem::eval_q(ga, q, shifted, kExact);
    CHECK(lhs.exact);
    CHECK(lhs == rhs);
  }
  CHECK_THROWS_AS(smn_compose(ga, adder, {}, 1, 2), ContractError);

  SUBCASE("stash and restore recover the input") {
    auto ident = cfg::parse_bacfg("start s\nend e\nedge s e copy 1 1\n");
    auto h = smn_compose(ident, adder, z, 2, 3);
    std::vector<Value> in{4, 6};
    auto r = cfg::collect(h, in, kExact);
    REQUIRE(r.exact);
    auto end = cfg::project(r.states[h.end()], 3);
    REQUIRE(end.size() == 1);
    CHECK(end.begin()->atoms()[0] == cfg::Atom::constant(3));
    CHECK(end.begin()->atoms()[1] == cfg::Atom::constant(4));
    CHECK(end.begin()->atoms()[2] == cfg::Atom::constant(6));
  }
  SUBCASE("diverging b never reaches the end") {
    auto h = smn_compose(ga, corpus::program(corpus::kLoop), z, 1, 2);
    std::vector<Value> in{1};
    for (std::uint64_t f : {10, 50, 200}) {
      CHECK(statesem::eval_q(h, q, in, {.fuel = f}) == statesem::Verdict::unknown());
    }
  }
  SUBCASE("an empty b passes its first argument through") {
    auto h = smn_compose(ga, urm::Program{}, std::vector<Value>{3}, 1, 2);
    std::vector<Value> in{7};
    CHECK(statesem::eval_q(h, q, in, kExact) ==
          statesem::eval_q(ga, q, std::vector<Value>{3, 7}, kExact));
  }
}
