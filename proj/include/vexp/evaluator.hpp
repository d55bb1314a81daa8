// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VEXP_EVALUATOR_HPP
#define VEXP_EVALUATOR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "vexp/node_table.hpp"

namespace vexp {

/// One a^n evaluation, decomposed into the three pipeline steps: the k
/// per-node summands, the balanced-tree reductions, and the final division.
struct EvalOutcome {
    Value value;
    std::vector<Value> numerator_summands;
    std::vector<Value> denominator_summands;
    std::size_t reduction_depth = 0;
    std::size_t division_count = 0; // divisions in the final ratio step, always 1
};

/// ceil(log2 m) for m >= 1.
std::size_t ceil_log2(std::size_t m);

/// Sum of xs under the fixed balanced pairing: first ceil(m/2) elements
/// against the rest, recursively. Depth is instrumented, not derived.
/// Exact fields: equal to the sequential sum. The pairing never depends on
/// scheduling, so concurrent reduction stays bit-identical.
std::pair<Value, std::size_t> tree_reduce(const Field& field, std::span<const Value> xs);

/// a^n via the cofactor identity, 0 <= n <= k-1. Summands are independent
/// per node; `threads` > 1 computes them concurrently with identical results.
EvalOutcome eval_power(const NodeTable& t, const Value& a, std::size_t n, unsigned threads = 1);

/// a^(k-1) on the shifted/scaled nodes Q_j = alpha + beta * P_j, reusing the
/// table's original coefficients unchanged.
Value eval_shifted(const NodeTable& t, const Value& alpha, const Value& beta, const Value& a);

/// Cost model parameters; positive rationals.
struct CostModel {
    mpq_class add_cost = 1;
    mpq_class mul_cost = 1;
    mpq_class div_cost = 1;
};

/// Modeled step counts for one a^n evaluation at table size k, reported next
/// to the square-and-multiply multiplication count. Reports both, claims
/// nothing about which wins.
struct CostReport {
    std::size_t k = 0;
    std::uint64_t n = 0;
    std::uint64_t vexp_local_ops = 0;       // per-node work: k subs, k divs, k muls
    std::uint64_t vexp_reduction_depth = 0; // ceil(log2 k) parallel addition steps
    std::uint64_t vexp_divisions = 0;       // k per-node reciprocals + 1 final
    std::uint64_t binexp_multiplications = 0;
    CostModel costs;
};

CostReport cost_report(std::size_t k, std::uint64_t n, CostModel costs = {});

} // namespace vexp

#endif // VEXP_EVALUATOR_HPP
