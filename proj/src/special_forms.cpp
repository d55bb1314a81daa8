// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#include "vexp/special_forms.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <utility>

#include "vexp/evaluator.hpp"

namespace vexp {

namespace {

void guard_reduced(const Field& f, const Value& reduced, std::span<const Value> summands) {
    if (f.exact()) {
        if (f.is_zero(reduced))
            throw InvariantViolation("reduced denominator is zero in an exact field");
        return;
    }
    double scale = 0.0;
    for (const Value& s : summands) scale = std::max(scale, f.magnitude(s));
    if (f.magnitude(reduced) < f.tolerance() * scale)
        throw NearSingularDenominator("reduced denominator magnitude " +
                                      std::to_string(f.magnitude(reduced)) +
                                      " is below tolerance * max summand");
}

// Row k-1 of Pascal's triangle mapped into the field: entry t is
// binom(k-1, t). Additions happen in-field, so no integer type overflows
// before the mapping.
std::vector<Value> pascal_row(const Field& f, std::size_t k) {
    std::vector<Value> row(k, f.zero());
    row[0] = f.one();
    for (std::size_t i = 1; i < k; ++i)
        for (std::size_t t = i; t >= 1; --t) row[t] = f.add(row[t], row[t - 1]);
    return row;
}

std::vector<std::uint64_t> distinct_prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d) continue;
        out.push_back(d);
        while (n % d == 0) n /= d;
    }
    if (n > 1) out.push_back(n);
    return out;
}

// Smallest g >= 2 whose order mod p is p-1, found by checking that g does
// not die at any maximal proper divisor (p-1)/q of the group order.
std::uint64_t primitive_root(const Field& f) {
    const std::uint64_t p = f.modulus();
    const auto factors = distinct_prime_factors(p - 1);
    for (std::uint64_t g = 2; g < p; ++g) {
        const Value gv = f.from_integer(static_cast<std::int64_t>(g));
        bool primitive = true;
        for (std::uint64_t q : factors)
            if (f.is_one(f.pow_oracle(gv, (p - 1) / q))) {
                primitive = false;
                break;
            }
        if (primitive) return g;
    }
    throw InvariantViolation("no primitive root found modulo " + std::to_string(p));
}

std::vector<Value> roots_in_field(const Field& f, std::size_t m) {
    std::vector<Value> roots;
    roots.reserve(m);
    switch (f.kind()) {
    case FieldKind::complex_fp:
        for (std::size_t j = 1; j <= m; ++j) {
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) /
                                 static_cast<double>(m);
            roots.push_back(Value{std::complex<double>{std::cos(angle), std::sin(angle)}});
        }
        return roots;
    case FieldKind::prime: {
        const std::uint64_t p = f.modulus();
        if ((p - 1) % m != 0)
            throw NoRootsOfUnity("order " + std::to_string(m) + " does not divide " +
                                 std::to_string(p - 1));
        const Value g = f.from_integer(static_cast<std::int64_t>(primitive_root(f)));
        const Value w = f.pow_oracle(g, (p - 1) / m);
        Value e = f.one();
        for (std::size_t j = 1; j <= m; ++j) {
            e = f.mul(e, w);
            roots.push_back(e);
        }
        return roots;
    }
    case FieldKind::rational:
        // The only rational roots of unity are +-1, so m caps at 2.
        if (m == 1) {
            roots.push_back(f.one());
        } else if (m == 2) {
            roots.push_back(f.from_integer(-1));
            roots.push_back(f.one());
        } else {
            throw NoRootsOfUnity("rationals contain no primitive root of unity of order " +
                                 std::to_string(m));
        }
        return roots;
    }
    throw InvariantViolation("unreachable field kind");
}

} // namespace

Value binomial_form_eval(const Field& field, std::size_t k, const Value& a) {
    if (k < 2) throw TooFewNodes("binomial form needs k >= 2");
    if (field.kind() == FieldKind::prime && field.modulus() <= k)
        throw CharacteristicTooSmall("nodes 1.." + std::to_string(k) +
                                     " collide modulo " + std::to_string(field.modulus()));

    const std::vector<Value> binom = pascal_row(field, k);
    std::vector<Value> num(k), den(k);
    for (std::size_t j = 1; j <= k; ++j) {
        const Value node = field.from_integer(static_cast<std::int64_t>(j));
        if (field.equals(a, node))
            throw BaseCollidesWithNode(j, "base " + field.format(a) + " collides with node " +
                                              std::to_string(j));
        Value w = binom[j - 1];
        if (j % 2 == 1) w = field.neg(w); // (-1)^j * binom(k-1, j-1)
        den[j - 1] = field.div(w, field.sub(node, a));
        num[j - 1] = field.mul(field.pow_oracle(node, k - 1), den[j - 1]);
    }
    auto [num_sum, dn] = tree_reduce(field, num);
    auto [den_sum, dd] = tree_reduce(field, den);
    (void)dn;
    (void)dd;
    guard_reduced(field, den_sum, den);
    return field.div(num_sum, den_sum);
}

RootsOfUnityContext make_roots_context(const Field& field, std::size_t m,
                                       std::optional<Value> extra_node) {
    if (m < 1) throw std::invalid_argument("roots-of-unity order must be >= 1");
    std::vector<Value> roots = roots_in_field(field, m);
    for (const Value& e : roots)
        if (!field.equals(field.pow_oracle(e, m), field.one()))
            throw InvariantViolation("claimed root of unity " + field.format(e) +
                                     " has e^" + std::to_string(m) + " != 1");

    Value extra = extra_node ? std::move(*extra_node) : field.zero();
    std::vector<Value> nodes = roots;
    nodes.push_back(extra);
    NodeTable table = build_node_table(field, std::move(nodes));
    Value ck = table.coeffs[m];
    return RootsOfUnityContext{std::move(table), m, std::move(roots), std::move(extra),
                               std::move(ck)};
}

Value roots_unity_eval(const RootsOfUnityContext& ctx, const Value& a) {
    const Field& f = ctx.table.field;
    const std::size_t m = ctx.m;
    for (std::size_t j = 0; j < m; ++j)
        if (f.equals(a, ctx.roots[j]))
            throw BaseCollidesWithNode(j + 1, "base " + f.format(a) +
                                                  " collides with root " + std::to_string(j + 1));
    if (f.equals(a, ctx.extra_node))
        throw BaseCollidesWithNode(m + 1, "base " + f.format(a) +
                                              " collides with the extra node");

    // a^m - 1 = (q^m - 1) c_k / sum_j C_j (q - e_j)/(e_j - a), q = extra_node.
    // At q = 0 each summand is -e_j C_j/(e_j - a) and the numerator is
    // -(-1)^k: the familiar simplified form, up to a sign that cancels.
    const Value num = f.mul(f.sub(f.pow_oracle(ctx.extra_node, m), f.one()), ctx.c_k);
    std::vector<Value> den(m);
    for (std::size_t j = 0; j < m; ++j)
        den[j] = f.mul(ctx.table.coeffs[j],
                       f.div(f.sub(ctx.extra_node, ctx.roots[j]), f.sub(ctx.roots[j], a)));
    auto [den_sum, depth] = tree_reduce(f, den);
    (void)depth;
    guard_reduced(f, den_sum, den);
    return f.div(num, den_sum);
}

Value partial_fraction_eval(const RootsOfUnityContext& ctx, const Value& a) {
    const Field& f = ctx.table.field;
    const std::size_t m = ctx.m;
    if (f.equals(f.pow_oracle(a, m), f.one()))
        throw SingularInput("a^" + std::to_string(m) + " = 1 at a = " + f.format(a));

    std::vector<Value> terms(m);
    for (std::size_t i = 0; i < m; ++i) {
        Value w = f.sub(a, ctx.roots[i]);
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) w = f.mul(w, f.sub(ctx.roots[i], ctx.roots[j]));
        terms[i] = f.inverse(w);
    }
    auto [sum, depth] = tree_reduce(f, terms);
    (void)depth;
    return sum;
}

Value product_form_eval(const RootsOfUnityContext& ctx, const Value& a) {
    const Field& f = ctx.table.field;
    Value prod = f.one();
    for (const Value& e : ctx.roots) prod = f.mul(prod, f.sub(a, e));
    return prod;
}

} // namespace vexp
