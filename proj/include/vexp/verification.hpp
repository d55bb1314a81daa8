// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VEXP_VERIFICATION_HPP
#define VEXP_VERIFICATION_HPP

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vexp/node_table.hpp"

namespace vexp {

struct CheckResult {
    std::string name;
    std::size_t instances_run = 0;
    std::size_t failures = 0;
    std::optional<std::string> first_counterexample;
};

struct SuiteConfig {
    std::uint64_t seed = 42;
    std::size_t trials = 100;
    std::size_t k_max = 32;
    std::vector<FieldKind> backends{FieldKind::prime, FieldKind::rational,
                                    FieldKind::complex_fp};
    // "coeff" doubles one stored coefficient before the product-identity
    // check runs; the suite must then report at least one failure.
    std::string inject_fault;
};

struct VerifyReport {
    std::vector<CheckResult> checks;
    std::uint64_t seed = 0;
    std::chrono::nanoseconds elapsed{0};

    std::size_t total_failures() const;
    bool passed() const { return total_failures() == 0; }

    /// One `CHECK <name> <ran> <failed>` line per check, a COUNTEREXAMPLE
    /// line for each failing check, then a SUITE summary line. Contains no
    /// timing, so a fixed seed reproduces it byte for byte.
    std::string render_machine() const;

    /// Same content plus the wall-clock duration, for humans.
    std::string render_human() const;
};

/// sum_j P_j^n C_j = 0 for every n in [0, k-2]. Exact-field tables only;
/// runs k-1 instances, one per exponent.
CheckResult laplace_zero_check(const NodeTable& t);

/// Builds X (Vandermonde columns 0..k-2, last column 1/(P_j - a)) and checks
/// by brute force that ||X|| = (-1)^(k-1) c ||V(P)|| with c = prod 1/(P_j-a),
/// that ||X|| is nonzero, and that ||X|| equals the cofactor expansion
/// sum_j C_{j,k} / (P_j - a). Exact fields, k <= 6.
CheckResult appendix_determinant_check(const Field& field, std::span<const Value> nodes,
                                       const Value& a);

/// Builds the singular matrix whose last column is the geometric sum
/// sum_i P_j^{(k-1)-i} a^{i-1}, checks that column against its closed form
/// (P_j^{k-1} - a^{k-1})/(P_j - a) elementwise, and that the determinant is
/// exactly zero. Exact fields, k <= 6.
CheckResult zero_determinant_check(const Field& field, std::span<const Value> nodes,
                                   const Value& a);

/// Runs every identity in the library over seeded random instances across
/// the configured backends. Deterministic: the same config yields the same
/// report, timing aside.
VerifyReport run_property_suite(const SuiteConfig& config = {});

} // namespace vexp

#endif // VEXP_VERIFICATION_HPP
