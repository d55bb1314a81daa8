// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VEXP_SPECIAL_FORMS_HPP
#define VEXP_SPECIAL_FORMS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "vexp/node_table.hpp"

namespace vexp {

/// a^(k-1) on the consecutive nodes 1..k, where the coefficients collapse to
/// signed binomials: the ratio of sums of (-1)^j * binom(k-1, j-1) / (j - a),
/// the numerator side carrying an extra j^(k-1). Binomials come from the
/// Pascal recurrence evaluated in the field, so nothing overflows on the way
/// in. Requires characteristic 0 or p > k.
Value binomial_form_eval(const Field& field, std::size_t k, const Value& a);

/// Node set {e_1..e_m, extra_node} where the e_j are all m-th roots of unity,
/// together with its coefficient table. k = m + 1. With extra_node = 0 the
/// extra coefficient c_k is exactly (-1)^k.
struct RootsOfUnityContext {
    NodeTable table; // nodes e_1..e_m then extra_node, coefficients attached
    std::size_t m = 0;
    std::vector<Value> roots;
    Value extra_node;
    Value c_k; // table coefficient of extra_node: 1 / prod_j (e_j - extra_node)
};

/// Complex: e_j = exp(2*pi*i*j/m). Prime: e_j = g^(j(p-1)/m) for a primitive
/// root g, provided m divides p - 1 (NoRootsOfUnity otherwise). Rationals
/// only host m <= 2 (roots +-1). extra_node defaults to zero.
RootsOfUnityContext make_roots_context(const Field& field, std::size_t m,
                                       std::optional<Value> extra_node = std::nullopt);

/// a^m - 1 as a single ratio over the roots: (q^m - 1) * c_k divided by
/// sum_j C_j (q - e_j) / (e_j - a), q = extra_node. With q = 0 this is the
/// simplified form (-1)^k / sum_j e_j C_j / (e_j - a), reached by folding
/// sum C_i = 0 into the extra node's term.
Value roots_unity_eval(const RootsOfUnityContext& ctx, const Value& a);

/// 1 / (a^m - 1) as the partial-fraction sum over simple poles:
/// sum_i 1 / ((a - e_i) * prod_{j != i}(e_i - e_j)).
Value partial_fraction_eval(const RootsOfUnityContext& ctx, const Value& a);

/// a^m - 1 as the forced product prod_i (a - e_i); independent oracle for
/// roots_unity_eval.
Value product_form_eval(const RootsOfUnityContext& ctx, const Value& a);

} // namespace vexp

#endif // VEXP_SPECIAL_FORMS_HPP
