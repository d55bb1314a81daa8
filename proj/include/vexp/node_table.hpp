// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VEXP_NODE_TABLE_HPP
#define VEXP_NODE_TABLE_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vexp/field.hpp"

namespace vexp {

/// Precomputed data for one node set: the nodes P_j, the base-independent
/// weights C_j = 1 / prod_{i != j}(P_i - P_j), and the power grid
/// powers[j][n] = P_j^n for 0 <= n <= k-1.
struct NodeTable {
    Field field;
    std::size_t k = 0;
    std::vector<Value> nodes;
    std::vector<Value> coeffs;
    std::vector<std::vector<Value>> powers;
};

/// Builds the table. Throws TooFewNodes for k < 2, DuplicateNodes naming the
/// colliding pair (1-based), FieldTooSmall when a prime field has order <= k.
NodeTable build_node_table(const Field& field, std::vector<Value> nodes);

/// Product formula prod_{1 <= i < j <= k}(P_j - P_i). Zero iff nodes repeat.
Value vandermonde_det(const Field& field, std::span<const Value> nodes);

/// Determinant of a dense matrix, independent of the product formula:
/// cofactor expansion for k <= 4, fraction-free Gaussian elimination above.
Value det_bruteforce(const Field& field, std::vector<std::vector<Value>> m);

/// Signed cofactor C_{j,k} of the k-th column of the Vandermonde matrix,
/// j 1-based, computed from the brute-force determinant of the minor.
Value cofactor_column_k(const Field& field, std::span<const Value> nodes, std::size_t j);

/// Line-oriented UTF-8 text format, header "vexp-table v1". The power grid
/// is recomputed on load, and every table invariant is re-verified.
std::string serialize_table(const NodeTable& t);
NodeTable deserialize_table(std::string_view bytes);

/// FNV-1a over the serialized bytes; printed by the CLI after precompute.
std::uint64_t table_checksum(std::string_view bytes);

} // namespace vexp

#endif // VEXP_NODE_TABLE_HPP
