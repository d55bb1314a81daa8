// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#include "vexp/evaluator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <thread>

namespace vexp {

std::size_t ceil_log2(std::size_t m) {
    std::size_t d = 0;
    while ((std::size_t{1} << d) < m) ++d;
    return d;
}

namespace {

std::pair<Value, std::size_t> reduce_span(const Field& f, std::span<const Value> xs) {
    if (xs.size() == 1) return {xs[0], 0};
    const std::size_t half = (xs.size() + 1) / 2;
    auto [left, dl] = reduce_span(f, xs.first(half));
    auto [right, dr] = reduce_span(f, xs.subspan(half));
    return {f.add(left, right), 1 + std::max(dl, dr)};
}

void check_base(const NodeTable& t, const Value& a) {
    for (std::size_t j = 0; j < t.k; ++j)
        if (t.field.equals(a, t.nodes[j]))
            throw BaseCollidesWithNode(j + 1, "base " + t.field.format(a) +
                                                  " collides with node " + std::to_string(j + 1));
}

// Fills summand slots [begin, end). num[j] = P_j^n * C_j / (P_j - a) and
// den[j] = C_j / (P_j - a); the power comes from the precomputed grid.
void fill_summands(const NodeTable& t, const Value& a, std::size_t n, std::size_t begin,
                   std::size_t end, std::vector<Value>& num, std::vector<Value>& den) {
    for (std::size_t j = begin; j < end; ++j) {
        den[j] = t.field.div(t.coeffs[j], t.field.sub(t.nodes[j], a));
        num[j] = t.field.mul(t.powers[j][n], den[j]);
    }
}

// The appendix guarantees a nonzero reduced denominator in exact fields;
// floats additionally get a relative guard against catastrophic cancellation.
void check_denominator(const Field& f, const Value& reduced, std::span<const Value> summands) {
    if (f.exact()) {
        if (f.is_zero(reduced))
            throw InvariantViolation("reduced denominator is zero in an exact field; "
                                     "nonsingularity guarantee violated");
        return;
    }
    double scale = 0.0;
    for (const Value& s : summands) scale = std::max(scale, f.magnitude(s));
    if (f.magnitude(reduced) < f.tolerance() * scale)
        throw NearSingularDenominator("reduced denominator magnitude " +
                                      std::to_string(f.magnitude(reduced)) +
                                      " is below tolerance * max summand " +
                                      std::to_string(f.tolerance() * scale));
}

} // namespace

std::pair<Value, std::size_t> tree_reduce(const Field& field, std::span<const Value> xs) {
    if (xs.empty()) throw std::invalid_argument("tree_reduce needs at least one element");
    return reduce_span(field, xs);
}

EvalOutcome eval_power(const NodeTable& t, const Value& a, std::size_t n, unsigned threads) {
    if (n >= t.k)
        throw ExponentOutOfRange("exponent " + std::to_string(n) + " outside [0, " +
                                 std::to_string(t.k - 1) + "]");
    check_base(t, a);

    std::vector<Value> num(t.k), den(t.k);
    if (threads <= 1 || t.k < 2 * threads) {
        fill_summands(t, a, n, 0, t.k, num, den);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        const std::size_t chunk = (t.k + threads - 1) / threads;
        for (unsigned w = 0; w < threads; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(t.k, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(
                [&, begin, end] { fill_summands(t, a, n, begin, end, num, den); });
        }
        for (auto& worker : pool) worker.join();
    }

    auto [num_sum, depth] = tree_reduce(t.field, num);
    auto [den_sum, depth2] = tree_reduce(t.field, den);
    (void)depth2;
    check_denominator(t.field, den_sum, den);

    EvalOutcome out;
    out.value = t.field.div(num_sum, den_sum);
    out.numerator_summands = std::move(num);
    out.denominator_summands = std::move(den);
    out.reduction_depth = depth;
    out.division_count = 1;
    return out;
}

Value eval_shifted(const NodeTable& t, const Value& alpha, const Value& beta, const Value& a) {
    const Field& f = t.field;
    if (f.is_zero(beta)) throw ZeroScale("beta must be nonzero");

    std::vector<Value> shifted;
    shifted.reserve(t.k);
    for (std::size_t j = 0; j < t.k; ++j) {
        Value q = f.add(alpha, f.mul(beta, t.nodes[j]));
        if (f.equals(a, q))
            throw BaseCollidesWithNode(j + 1, "base " + f.format(a) +
                                                  " collides with shifted node " +
                                                  std::to_string(j + 1));
        shifted.push_back(std::move(q));
    }

    // The original C_j absorb the shift: the true weights for Q differ only
    // by the common factor beta^(1-k), which cancels in the ratio.
    std::vector<Value> num(t.k), den(t.k);
    for (std::size_t j = 0; j < t.k; ++j) {
        den[j] = f.div(t.coeffs[j], f.sub(shifted[j], a));
        num[j] = f.mul(f.pow_oracle(shifted[j], t.k - 1), den[j]);
    }
    auto [num_sum, depth] = tree_reduce(f, num);
    (void)depth;
    auto [den_sum, depth2] = tree_reduce(f, den);
    (void)depth2;
    check_denominator(f, den_sum, den);
    return f.div(num_sum, den_sum);
}

CostReport cost_report(std::size_t k, std::uint64_t n, CostModel costs) {
    if (k < 2) throw std::invalid_argument("cost_report needs k >= 2");
    if (n < 1 || n > k - 1) throw std::invalid_argument("cost_report needs 1 <= n <= k-1");
    if (costs.add_cost <= 0 || costs.mul_cost <= 0 || costs.div_cost <= 0)
        throw std::invalid_argument("cost model parameters must be positive");

    CostReport r;
    r.k = k;
    r.n = n;
    r.vexp_local_ops = 3 * static_cast<std::uint64_t>(k);
    r.vexp_reduction_depth = ceil_log2(k);
    r.vexp_divisions = static_cast<std::uint64_t>(k) + 1;
    r.binexp_multiplications =
        static_cast<std::uint64_t>(std::bit_width(n) - 1) + std::popcount(n) - 1;
    r.costs = std::move(costs);
    return r;
}

} // namespace vexp
