// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VEXP_FIELD_HPP
#define VEXP_FIELD_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "vexp/errors.hpp"

namespace vexp {

#if !defined(__SIZEOF_INT128__)
#error "vexp requires compiler support for unsigned __int128"
#endif

enum class FieldKind { prime, rational, complex_fp };

/// Largest prime modulus accepted: products of two residues must fit in
/// an unsigned 128-bit intermediate with headroom.
inline constexpr std::uint64_t kMaxPrimeModulus = (std::uint64_t{1} << 62) - 1;

struct FieldDescriptor {
    FieldKind kind = FieldKind::rational;
    std::uint64_t modulus = 0;         // prime backend only
    double equality_tolerance = 0.0;   // complex backend only, relative

    static FieldDescriptor prime(std::uint64_t p);
    static FieldDescriptor rational();
    static FieldDescriptor complex_fp(double tolerance = 1e-9);

    friend bool operator==(const FieldDescriptor&, const FieldDescriptor&) = default;
};

/// One field element. The active alternative matches the owning field's kind:
/// prime -> residue in [0, p), rational -> reduced fraction with positive
/// denominator, complex -> pair of finite doubles.
struct Value {
    std::variant<std::uint64_t, mpq_class, std::complex<double>> rep{std::uint64_t{0}};

    friend bool operator==(const Value& a, const Value& b) { return a.rep == b.rep; }
};

/// Deterministic Miller-Rabin, exact for all n < 2^64.
bool is_prime_u64(std::uint64_t n);

/// Uniform handle over the three backends. Immutable and freely copyable;
/// all operations are pure.
class Field {
  public:
    explicit Field(FieldDescriptor descriptor);

    static Field prime(std::uint64_t p) { return Field(FieldDescriptor::prime(p)); }
    static Field rational() { return Field(FieldDescriptor::rational()); }
    static Field complex_fp(double tolerance = 1e-9) {
        return Field(FieldDescriptor::complex_fp(tolerance));
    }

    const FieldDescriptor& descriptor() const { return desc_; }
    FieldKind kind() const { return desc_.kind; }
    bool exact() const { return desc_.kind != FieldKind::complex_fp; }
    std::uint64_t modulus() const { return desc_.modulus; }
    double tolerance() const { return desc_.equality_tolerance; }

    Value zero() const;
    Value one() const;
    Value from_integer(std::int64_t n) const;

    Value add(const Value& a, const Value& b) const;
    Value sub(const Value& a, const Value& b) const;
    Value mul(const Value& a, const Value& b) const;
    Value neg(const Value& a) const;
    Value inverse(const Value& a) const;
    Value div(const Value& a, const Value& b) const;

    /// Equality in the field: exact on canonical forms for prime/rational,
    /// relative for complex: |a - b| <= tolerance * max(1, |a|, |b|).
    bool equals(const Value& a, const Value& b) const;
    bool is_zero(const Value& a) const { return equals(a, zero()); }
    bool is_one(const Value& a) const { return equals(a, one()); }

    /// a^n by square-and-multiply; 0^0 = 1. The independent exponentiation
    /// oracle used throughout the test suites.
    Value pow_oracle(const Value& a, std::uint64_t n) const;

    /// Canonical text encoding: prime -> decimal residue; rational ->
    /// "num/den" reduced with den > 0 (den 1 omitted); complex -> "re,im"
    /// with shortest round-trip decimals.
    std::string format(const Value& v) const;

    /// Inverse of format. Throws BadEncoding on anything it cannot read.
    Value parse(std::string_view text) const;

    /// |v| for the complex backend (used by near-singularity guards).
    double magnitude(const Value& v) const;

    friend bool operator==(const Field& a, const Field& b) { return a.desc_ == b.desc_; }

  private:
    void check_kind(const Value& v) const;
    FieldDescriptor desc_;
};

} // namespace vexp

#endif // VEXP_FIELD_HPP
