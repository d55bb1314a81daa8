// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "vexp/errors.hpp"
#include "vexp/evaluator.hpp"
#include "vexp/field.hpp"
#include "vexp/node_table.hpp"

using namespace vexp;

namespace {

std::vector<Value> parse_all(const Field& f, const std::vector<std::string>& texts) {
  std::vector<Value> out;
  for (const auto& t : texts) out.push_back(f.parse(t));
  return out;
}

NodeTable z7_table() {
  Field f = Field::prime(7);
  return build_node_table(f, parse_all(f, {"1", "2", "3"}));
}

}  // namespace

TEST_CASE("ceil_log2") {
  CHECK(ceil_log2(1) == 0);
  CHECK(ceil_log2(2) == 1);
  CHECK(ceil_log2(3) == 2);
  CHECK(ceil_log2(4) == 2);
  CHECK(ceil_log2(5) == 3);
  CHECK(ceil_log2(256) == 8);
  CHECK(ceil_log2(1024) == 10);
  CHECK(ceil_log2(1025) == 11);
}

TEST_CASE("worked example over Z_7") {
  NodeTable t = z7_table();
  const Field& f = t.field;
  EvalOutcome out = eval_power(t, f.parse("4"), 2);
  CHECK(f.format(out.value) == "2");  // 4^2 = 16 = 2 (mod 7)

  REQUIRE(out.denominator_summands.size() == 3);
  CHECK(f.format(out.denominator_summands[0]) == "1");  // C_1/(P_1-4) = 4/(-3)
  CHECK(f.format(out.denominator_summands[1]) == "4");  // 6/(-2)
  CHECK(f.format(out.denominator_summands[2]) == "3");  // 4/(-1)

  REQUIRE(out.numerator_summands.size() == 3);
  CHECK(f.format(out.numerator_summands[0]) == "1");  // 1^2 * 1
  CHECK(f.format(out.numerator_summands[1]) == "2");  // 2^2 * 4
  CHECK(f.format(out.numerator_summands[2]) == "6");  // 3^2 * 3

  CHECK(out.reduction_depth == 2);
  CHECK(out.division_count == 1);
}

TEST_CASE("exponent zero yields one in every backend") {
  {
    NodeTable t = z7_table();
    CHECK(t.field.is_one(eval_power(t, t.field.parse("5"), 0).value));
  }
  {
    Field f = Field::rational();
    NodeTable t = build_node_table(f, parse_all(f, {"-1/2", "1/3", "2"}));
    CHECK(f.is_one(eval_power(t, f.parse("7/5"), 0).value));
  }
  {
    Field f = Field::complex_fp();
    NodeTable t = build_node_table(f, parse_all(f, {"1,0", "-1,1", "0,2"}));
    CHECK(f.equals(eval_power(t, f.parse("0.5,0.5"), 0).value, f.one()));
  }
}

TEST_CASE("every exponent below k matches the multiplication oracle") {
  Field f = Field::prime(1000003);
  NodeTable t = build_node_table(f, parse_all(f, {"3", "14", "159", "2653", "58979"}));
  Value a = f.parse("424242");
  for (std::size_t n = 0; n < t.k; ++n)
    CHECK(f.equals(eval_power(t, a, n).value, f.pow_oracle(a, n)));
}

TEST_CASE("argument validation") {
  NodeTable t = z7_table();
  CHECK_THROWS_AS(eval_power(t, t.field.parse("4"), 3), ExponentOutOfRange);
  CHECK_THROWS_AS(eval_power(t, t.field.parse("4"), 100), ExponentOutOfRange);
  try {
    eval_power(t, t.field.parse("2"), 1);
    FAIL("expected BaseCollidesWithNode");
  } catch (const BaseCollidesWithNode& e) {
    CHECK(e.node_index == 2);  // 1-based
  }
}

TEST_CASE("thread count never changes the outcome") {
  Field f = Field::prime(1000003);
  std::vector<Value> nodes;
  for (int i = 1; i <= 50; ++i) nodes.push_back(f.from_integer(i * i + 1));
  NodeTable t = build_node_table(f, nodes);
  Value a = f.parse("777777");

  EvalOutcome serial = eval_power(t, a, 49, 1);
  for (unsigned threads : {2u, 3u, 4u, 8u}) {
    EvalOutcome parallel = eval_power(t, a, 49, threads);
    CHECK(parallel.value == serial.value);
    CHECK(parallel.numerator_summands == serial.numerator_summands);
    CHECK(parallel.denominator_summands == serial.denominator_summands);
    CHECK(parallel.reduction_depth == serial.reduction_depth);
  }
}

TEST_CASE("thread count is bit-stable for floating point") {
  Field f = Field::complex_fp();
  std::vector<Value> nodes;
  for (int i = 0; i < 12; ++i)
    nodes.push_back(f.parse(std::to_string(0.3 * i - 1.8) + ",0.7"));
  NodeTable t = build_node_table(f, nodes);
  Value a = f.parse("0.05,-0.4");

  EvalOutcome serial = eval_power(t, a, 11, 1);
  EvalOutcome parallel = eval_power(t, a, 11, 3);
  CHECK(parallel.value == serial.value);  // bitwise, not just within tolerance
  CHECK(parallel.numerator_summands == serial.numerator_summands);
}

TEST_CASE("reduction depth is the balanced-tree depth") {
  Field f = Field::prime(97);
  for (std::size_t k : {2u, 3u, 4u, 7u, 16u, 33u}) {
    std::vector<Value> nodes;
    for (std::size_t i = 0; i < k; ++i) nodes.push_back(f.from_integer(static_cast<long>(i)));
    NodeTable t = build_node_table(f, nodes);
    EvalOutcome out = eval_power(t, f.parse("50"), 1);
    CHECK(out.reduction_depth == ceil_log2(k));
  }
}

TEST_CASE("tree_reduce sums exactly and instruments depth") {
  Field f = Field::prime(10007);
  CHECK_THROWS_AS(tree_reduce(f, {}), std::invalid_argument);

  std::vector<Value> one{f.from_integer(42)};
  auto [single, depth0] = tree_reduce(f, one);
  CHECK(f.format(single) == "42");
  CHECK(depth0 == 0);

  for (std::size_t size = 1; size <= 70; ++size) {
    std::vector<Value> xs;
    Value expect = f.zero();
    for (std::size_t i = 0; i < size; ++i) {
      xs.push_back(f.from_integer(static_cast<long>(i * i + 3)));
      expect = f.add(expect, xs.back());
    }
    auto [sum, depth] = tree_reduce(f, xs);
    CHECK(f.equals(sum, expect));
    CHECK(depth == ceil_log2(size));
  }
}

TEST_CASE("near-singular floating denominators are refused") {
  // For nodes {1,-1} the reduced denominator is 1/(1-a^2): genuinely nonzero,
  // but at |a| ~ 3e9 it is ~1e-19 against summands of ~1e-10, beyond what
  // doubles can certify. The guard must fire rather than return noise.
  Field f = Field::complex_fp(1e-9);
  NodeTable t = build_node_table(f, parse_all(f, {"1,0", "-1,0"}));
  CHECK_THROWS_AS(eval_power(t, f.parse("3e9,0"), 1), NearSingularDenominator);
  // Same table at a sane base is fine.
  CHECK(f.equals(eval_power(t, f.parse("3,0"), 1).value, f.from_integer(3)));
}

TEST_CASE("shifted nodes reuse the original coefficients") {
  NodeTable t = z7_table();
  const Field& f = t.field;
  // Q_j = 1 + 2 P_j = {3, 5, 0}; the coefficient table is untouched.
  CHECK(f.format(eval_shifted(t, f.parse("1"), f.parse("2"), f.parse("4"))) == "2");

  Field q = Field::rational();
  NodeTable tq = build_node_table(q, parse_all(q, {"0", "1", "2"}));
  Value got = eval_shifted(tq, q.parse("1/2"), q.parse("1/3"), q.parse("5"));
  CHECK(q.format(got) == "25");  // a^(k-1)

  CHECK_THROWS_AS(eval_shifted(tq, q.parse("1"), q.parse("0"), q.parse("5")), ZeroScale);
  try {
    eval_shifted(t, f.parse("1"), f.parse("2"), f.parse("3"));  // 3 = 1 + 2*1
    FAIL("expected BaseCollidesWithNode");
  } catch (const BaseCollidesWithNode& e) {
    CHECK(e.node_index == 1);
  }
}

TEST_CASE("shifted evaluation matches the oracle across shifts") {
  Field f = Field::prime(10007);
  NodeTable t = build_node_table(f, parse_all(f, {"1", "2", "3", "4", "5", "6"}));
  Value a = f.parse("1234");
  Value expect = f.pow_oracle(a, t.k - 1);
  for (long alpha : {0L, 3L, -7L, 500L}) {
    for (long beta : {1L, 2L, -3L, 999L}) {
      Value got = eval_shifted(t, f.from_integer(alpha), f.from_integer(beta), a);
      CHECK(f.equals(got, expect));
    }
  }
}

TEST_CASE("cost report") {
  CostReport r = cost_report(256, 255);
  CHECK(r.k == 256);
  CHECK(r.n == 255);
  CHECK(r.vexp_local_ops == 768);        // 3k
  CHECK(r.vexp_reduction_depth == 8);    // ceil(log2 256)
  CHECK(r.vexp_divisions == 257);        // k + 1
  CHECK(r.binexp_multiplications == 14); // 7 squarings + 7 extra multiplies

  CHECK(cost_report(2, 1).binexp_multiplications == 0);
  CHECK(cost_report(1048577, 1048576).binexp_multiplications == 20);  // n = 2^20
  CHECK(cost_report(16, 10).binexp_multiplications == 4);  // 1010b: 3 squarings + 1

  CHECK_THROWS_AS(cost_report(1, 0), std::invalid_argument);
  CHECK_THROWS_AS(cost_report(8, 0), std::invalid_argument);
  CHECK_THROWS_AS(cost_report(8, 8), std::invalid_argument);
  CostModel free;
  free.mul_cost = 0;
  CHECK_THROWS_AS(cost_report(8, 3, free), std::invalid_argument);
}
