// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <stdexcept>
#include <string>
#include <vector>

#include "vexp/errors.hpp"
#include "vexp/field.hpp"
#include "vexp/node_table.hpp"
#include "vexp/verification.hpp"

using namespace vexp;

namespace {

std::vector<Value> parse_all(const Field& f, const std::vector<std::string>& texts) {
  std::vector<Value> out;
  for (const auto& t : texts) out.push_back(f.parse(t));
  return out;
}

}  // namespace

TEST_CASE("laplace expansion zero sums") {
  Field f = Field::prime(7);
  NodeTable t = build_node_table(f, parse_all(f, {"1", "2", "3"}));
  CheckResult r = laplace_zero_check(t);
  CHECK(r.name == "laplace_zero_sums");
  CHECK(r.instances_run == 2);  // n = 0 and n = 1
  CHECK(r.failures == 0);
  CHECK_FALSE(r.first_counterexample.has_value());

  Field q = Field::rational();
  NodeTable pair = build_node_table(q, parse_all(q, {"-5/3", "7/2"}));
  CheckResult rp = laplace_zero_check(pair);
  CHECK(rp.instances_run == 1);  // just sum C_j = 0
  CHECK(rp.failures == 0);

  Field c = Field::complex_fp();
  NodeTable tc = build_node_table(c, parse_all(c, {"0,0", "1,0"}));
  CHECK_THROWS_AS(laplace_zero_check(tc), std::invalid_argument);
}

TEST_CASE("appendix determinant identity") {
  Field q = Field::rational();
  CheckResult r = appendix_determinant_check(q, parse_all(q, {"1", "2"}), q.parse("0"));
  CHECK(r.name == "appendix_nonsingular_determinant");
  CHECK(r.failures == 0);
  CHECK(r.instances_run > 0);

  CheckResult r6 = appendix_determinant_check(
      q, parse_all(q, {"-2", "-1/2", "0", "1/3", "2", "7"}), q.parse("5"));
  CHECK(r6.failures == 0);

  Field p = Field::prime(10007);
  CheckResult rp = appendix_determinant_check(p, parse_all(p, {"3", "1", "4", "15"}), p.parse("926"));
  CHECK(rp.failures == 0);
}

TEST_CASE("appendix determinant check argument validation") {
  Field q = Field::rational();
  CHECK_THROWS_AS(appendix_determinant_check(q, parse_all(q, {"1", "1"}), q.parse("0")),
                  DuplicateNodes);
  CHECK_THROWS_AS(appendix_determinant_check(q, parse_all(q, {"1", "2"}), q.parse("2")),
                  BaseCollidesWithNode);
  CHECK_THROWS_AS(
      appendix_determinant_check(q, parse_all(q, {"1", "2", "3", "4", "5", "6", "7"}), q.parse("0")),
      std::invalid_argument);  // brute-force ceiling is k = 6
  Field c = Field::complex_fp();
  CHECK_THROWS_AS(appendix_determinant_check(c, parse_all(c, {"1", "2"}), c.parse("0")),
                  std::invalid_argument);
}

TEST_CASE("geometric column zero determinant") {
  Field q = Field::rational();
  CheckResult r = zero_determinant_check(q, parse_all(q, {"1", "2", "3"}), q.parse("4"));
  CHECK(r.name == "geometric_column_zero_det");
  CHECK(r.failures == 0);

  Field p = Field::prime(7);
  CheckResult rp = zero_determinant_check(p, parse_all(p, {"1", "2", "3"}), p.parse("5"));
  CHECK(rp.failures == 0);

  CheckResult r2 = zero_determinant_check(q, parse_all(q, {"-1/2", "3"}), q.parse("1/7"));
  CHECK(r2.failures == 0);
}

TEST_CASE("property suite passes and is deterministic") {
  SuiteConfig cfg;
  cfg.seed = 7;
  cfg.trials = 10;
  cfg.k_max = 16;
  VerifyReport a = run_property_suite(cfg);
  CHECK(a.passed());
  CHECK(a.total_failures() == 0);
  CHECK(a.seed == 7);
  CHECK(a.checks.size() > 15);
  for (const auto& c : a.checks) CHECK(c.instances_run > 0);

  VerifyReport b = run_property_suite(cfg);
  CHECK(a.render_machine() == b.render_machine());

  cfg.seed = 8;
  VerifyReport other = run_property_suite(cfg);
  CHECK(other.passed());
}

TEST_CASE("machine rendering shape") {
  SuiteConfig cfg;
  cfg.trials = 3;
  cfg.k_max = 8;
  VerifyReport r = run_property_suite(cfg);
  std::string text = r.render_machine();
  CHECK(text.find("CHECK laplace_zero_sums ") != std::string::npos);
  CHECK(text.find("CHECK central_identity_vs_binexp 3 0\n") != std::string::npos);
  CHECK(text.find("SUITE seed=42 checks=") != std::string::npos);
  CHECK(text.find(" PASS\n") != std::string::npos);
  CHECK(text.find("COUNTEREXAMPLE") == std::string::npos);
  CHECK(text.find("elapsed") == std::string::npos);  // timing only in the human form

  std::string human = r.render_human();
  CHECK(human.find("elapsed") != std::string::npos);
}

TEST_CASE("fault injection is caught") {
  SuiteConfig cfg;
  cfg.trials = 5;
  cfg.k_max = 8;
  cfg.inject_fault = "coeff";
  VerifyReport r = run_property_suite(cfg);
  CHECK_FALSE(r.passed());
  CHECK(r.total_failures() > 0);

  bool found = false;
  for (const auto& c : r.checks) {
    if (c.name == "coeff_product_identity") {
      found = true;
      // Only the first coefficient is corrupted, so one failure per trial.
      CHECK(c.failures == 5);
      REQUIRE(c.first_counterexample.has_value());
      CHECK_FALSE(c.first_counterexample->empty());
    }
  }
  CHECK(found);
  CHECK(r.render_machine().find("COUNTEREXAMPLE coeff_product_identity") != std::string::npos);
  CHECK(r.render_machine().find(" FAIL\n") != std::string::npos);
}

TEST_CASE("suite configuration validation") {
  SuiteConfig cfg;
  cfg.inject_fault = "gremlins";
  CHECK_THROWS_AS(run_property_suite(cfg), std::invalid_argument);

  SuiteConfig small;
  small.k_max = 1;
  CHECK_THROWS_AS(run_property_suite(small), std::invalid_argument);

  SuiteConfig none;
  none.trials = 0;
  CHECK_THROWS_AS(run_property_suite(none), std::invalid_argument);

  SuiteConfig empty;
  empty.backends.clear();
  CHECK_THROWS_AS(run_property_suite(empty), std::invalid_argument);
}

TEST_CASE("single-backend suites") {
  SuiteConfig cfg;
  cfg.trials = 5;
  cfg.k_max = 8;
  cfg.backends = {FieldKind::complex_fp};
  VerifyReport r = run_property_suite(cfg);
  CHECK(r.passed());
  // Exact-only checks honestly report zero instances; the rest still run.
  for (const auto& c : r.checks) {
    if (c.name == "laplace_zero_sums") CHECK(c.instances_run == 0);
    if (c.name == "coeff_product_identity") CHECK(c.instances_run > 0);
    if (c.name == "roots_value_vs_product_form") CHECK(c.instances_run > 0);
  }

  SuiteConfig exact;
  exact.trials = 5;
  exact.k_max = 8;
  exact.backends = {FieldKind::prime};
  CHECK(run_property_suite(exact).passed());
}
