#include <doctest.h>

#include <random>

#include "support/corpus.hpp"
#include "urmflow/error.hpp"
#include "urmflow/goedel.hpp"

using namespace urmflow;
using namespace urmflow::goedel;

TEST_CASE("pair and unpair") {
  CHECK(pair(0, 0) == 0);
  CHECK(pair(1, 0) == 1);
  CHECK(pair(0, 1) == 2);
  CHECK(unpair(pair(3, 5)) == std::pair<Natural, Natural>(3, 5));

  SUBCASE("bijection on [0, 10^4]") {
    for (unsigned long z = 0; z <= 10'000; ++z) {
      auto [x, y] = unpair(Natural(z));
      REQUIRE(pair(x, y) == z);
    }
  }
  SUBCASE("beyond 64 bits") {
    Natural big("123456789012345678901234567890");
    auto [x, y] = unpair(pair(big, big + 7));
    CHECK(x == big);
    CHECK(y == big + 7);
  }
}

TEST_CASE("encode and decode") {
  auto adder = corpus::program(corpus::kAdder);
  CHECK(decode_program(encode_program(adder)) == adder);
  CHECK(encode_program(urm::Program{}) == 0);
  CHECK(decode_program(0) == urm::Program{});

  SUBCASE("random roundtrips") {
    std::mt19937 rng(7);
    for (int i = 0; i < 100; ++i) {
      auto p = corpus::random_program(rng, 8, 5);
      auto c = encode_program(p);
      REQUIRE(decode_program(c) == p);
      CHECK(encode_program(decode_program(c)) == c);
    }
  }
  SUBCASE("decode is total and normalizing") {
    // pair(1, pair(7, 0)): one instruction with an unknown tag.
    auto p = decode_program(pair(1, pair(7, 0)));
    CHECK(p == urm::parse_program("Z 1"));
    for (unsigned long c = 0; c < 2000; ++c) {
      auto q = decode_program(Natural(c));
      CHECK(decode_program(encode_program(q)) == q);
    }
  }
  SUBCASE("oversized codes are reported") {
    // One Z instruction with a register index far beyond 32 bits.
    Natural huge = Natural(1) << 40;
    CHECK_THROWS_AS(decode_program(pair(1, pair(0, huge))), OverflowError);
    CHECK_THROWS_AS(decode_program(pair(Natural(1) << 30, 0)), OverflowError);
  }
}

TEST_CASE("smn_specialize") {
  auto adder = corpus::program(corpus::kAdder);
  std::vector<urm::Value> two{2};
  auto q = smn_specialize(adder, 1, two);
  std::vector<urm::Value> three{3};
  CHECK(urm::eval_phi(q, 1, three, 1000) == 5);

  CHECK(smn_specialize(adder, 0, {}) == adder);
  CHECK(smn_prefix_length(adder, 0, {}) == 0);

  SUBCASE("prefix shape") {
    // Registers 2 and 3 move up by one (highest first), then x1 = 2.
    CHECK(smn_prefix_length(adder, 1, two) == 2 + 1 + 2);
    CHECK(q.at(1) == urm::Instr{urm::Transfer{2, 3}});
    CHECK(q.at(2) == urm::Instr{urm::Transfer{1, 2}});
    CHECK(q.at(3) == urm::Instr{urm::Zero{1}});
    CHECK(q.at(4) == urm::Instr{urm::Succ{1}});
  }
  SUBCASE("jump relocation") {
    const auto shift = smn_prefix_length(adder, 1, two);
    for (std::size_t i = 1; i <= adder.size(); ++i) {
      auto a = std::get_if<urm::Jump>(&adder.at(i));
      if (!a) continue;
      auto b = std::get<urm::Jump>(q.at(i + shift));
      CHECK(b.target == a->target + shift);
    }
  }
  SUBCASE("divergence is preserved") {
    auto loop = corpus::program(corpus::kLoop);
    std::vector<urm::Value> fixed{4};
    auto l = smn_specialize(loop, 1, fixed);
    for (urm::Value y = 0; y < 5; ++y) {
      std::vector<urm::Value> in{y};
      CHECK_FALSE(urm::eval_phi(l, 1, in, 500));
    }
  }
  SUBCASE("monus with the second argument fixed") {
    auto monus = corpus::program(corpus::kMonus);
    std::vector<urm::Value> fixed{6};
    auto m = smn_specialize(monus, 1, fixed);
    for (urm::Value y = 0; y <= 8; ++y) {
      std::vector<urm::Value> in{y};
      CHECK(urm::eval_phi(m, 1, in, 2000) == (6 > y ? 6 - y : 0));
    }
  }
}
