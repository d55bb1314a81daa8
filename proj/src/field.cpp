// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#include "vexp/field.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace vexp {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(u128(a) * b % p); }

u64 addmod(u64 a, u64 b, u64 p) {
    u64 r = a + b; // no overflow: a, b < 2^62
    return r >= p ? r - p : r;
}

u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

// Extended Euclid on (a, p) with p prime, a in [1, p).
u64 invmod(u64 a, u64 p) {
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = static_cast<std::int64_t>(p), new_r = static_cast<std::int64_t>(a);
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<u64>(t);
}

const mpq_class& as_rat(const Value& v) { return std::get<mpq_class>(v.rep); }
std::complex<double> as_cx(const Value& v) { return std::get<std::complex<double>>(v.rep); }
u64 as_res(const Value& v) { return std::get<u64>(v.rep); }

Value make_res(u64 r) { return Value{r}; }
Value make_rat(mpq_class q) {
    q.canonicalize();
    return Value{std::move(q)};
}
Value make_cx(std::complex<double> z) { return Value{z}; }

std::string format_double(double d) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, d);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double d{};
    auto res = std::from_chars(s.data(), s.data() + s.size(), d);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw BadEncoding("bad floating-point literal: '" + std::string(s) + "'");
    if (!std::isfinite(d))
        throw BadEncoding("non-finite value: '" + std::string(s) + "'");
    return d;
}

bool is_decimal_integer(std::string_view s) {
    if (!s.empty() && s.front() == '-') s.remove_prefix(1);
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isdigit(c) != 0; });
}

} // namespace

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % q == 0) return n == q;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Sinclair's witness set: deterministic for every n < 2^64.
    for (u64 a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
        u64 x = powmod(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

FieldDescriptor FieldDescriptor::prime(u64 p) {
    return FieldDescriptor{FieldKind::prime, p, 0.0};
}

FieldDescriptor FieldDescriptor::rational() {
    return FieldDescriptor{FieldKind::rational, 0, 0.0};
}

FieldDescriptor FieldDescriptor::complex_fp(double tolerance) {
    return FieldDescriptor{FieldKind::complex_fp, 0, tolerance};
}

Field::Field(FieldDescriptor descriptor) : desc_(descriptor) {
    switch (desc_.kind) {
    case FieldKind::prime:
        if (desc_.modulus < 3)
            throw CompositeModulus("prime modulus must be >= 3, got " +
                                   std::to_string(desc_.modulus));
        if (desc_.modulus > kMaxPrimeModulus)
            throw CompositeModulus("prime modulus must be < 2^62");
        if (!is_prime_u64(desc_.modulus))
            throw CompositeModulus(std::to_string(desc_.modulus) + " is not prime");
        break;
    case FieldKind::rational:
        break;
    case FieldKind::complex_fp:
        if (!(desc_.equality_tolerance > 0.0 && desc_.equality_tolerance < 1.0))
            throw BadTolerance("complex equality tolerance must lie in (0, 1)");
        break;
    }
}

void Field::check_kind(const Value& v) const {
    bool ok = false;
    switch (desc_.kind) {
    case FieldKind::prime: ok = std::holds_alternative<u64>(v.rep); break;
    case FieldKind::rational: ok = std::holds_alternative<mpq_class>(v.rep); break;
    case FieldKind::complex_fp: ok = std::holds_alternative<std::complex<double>>(v.rep); break;
    }
    if (!ok) throw std::invalid_argument("value does not belong to this field backend");
}

Value Field::zero() const {
    switch (desc_.kind) {
    case FieldKind::prime: return make_res(0);
    case FieldKind::rational: return make_rat(mpq_class(0));
    default: return make_cx({0.0, 0.0});
    }
}

Value Field::one() const {
    switch (desc_.kind) {
    case FieldKind::prime: return make_res(1);
    case FieldKind::rational: return make_rat(mpq_class(1));
    default: return make_cx({1.0, 0.0});
    }
}

Value Field::from_integer(std::int64_t n) const {
    switch (desc_.kind) {
    case FieldKind::prime: {
        const auto p = static_cast<std::int64_t>(desc_.modulus);
        std::int64_t r = n % p;
        if (r < 0) r += p;
        return make_res(static_cast<u64>(r));
    }
    case FieldKind::rational: {
        mpq_class q;
        q = static_cast<long>(n);
        return make_rat(std::move(q));
    }
    default:
        return make_cx({static_cast<double>(n), 0.0});
    }
}

Value Field::add(const Value& a, const Value& b) const {
    check_kind(a);
    check_kind(b);
    switch (desc_.kind) {
    case FieldKind::prime: return make_res(addmod(as_res(a), as_res(b), desc_.modulus));
    case FieldKind::rational: return make_rat(as_rat(a) + as_rat(b));
    default: return make_cx(as_cx(a) + as_cx(b));
    }
}

Value Field::sub(const Value& a, const Value& b) const {
    check_kind(a);
    check_kind(b);
    switch (desc_.kind) {
    case FieldKind::prime: return make_res(submod(as_res(a), as_res(b), desc_.modulus));
    case FieldKind::rational: return make_rat(as_rat(a) - as_rat(b));
    default: return make_cx(as_cx(a) - as_cx(b));
    }
}

Value Field::mul(const Value& a, const Value& b) const {
    check_kind(a);
    check_kind(b);
    switch (desc_.kind) {
    case FieldKind::prime: return make_res(mulmod(as_res(a), as_res(b), desc_.modulus));
    case FieldKind::rational: return make_rat(as_rat(a) * as_rat(b));
    default: return make_cx(as_cx(a) * as_cx(b));
    }
}

Value Field::neg(const Value& a) const {
    check_kind(a);
    switch (desc_.kind) {
    case FieldKind::prime: {
        u64 r = as_res(a);
        return make_res(r == 0 ? 0 : desc_.modulus - r);
    }
    case FieldKind::rational: return make_rat(-as_rat(a));
    default: return make_cx(-as_cx(a));
    }
}

Value Field::inverse(const Value& a) const {
    check_kind(a);
    switch (desc_.kind) {
    case FieldKind::prime: {
        u64 r = as_res(a);
        if (r == 0) throw DivisionByZero("inverse of zero");
        return make_res(invmod(r, desc_.modulus));
    }
    case FieldKind::rational: {
        const mpq_class& q = as_rat(a);
        if (q == 0) throw DivisionByZero("inverse of zero");
        mpq_class inv;
        mpq_inv(inv.get_mpq_t(), q.get_mpq_t());
        return make_rat(std::move(inv));
    }
    default: {
        auto z = as_cx(a);
        if (std::abs(z) == 0.0) throw DivisionByZero("inverse of zero");
        return make_cx(1.0 / z);
    }
    }
}

Value Field::div(const Value& a, const Value& b) const { return mul(a, inverse(b)); }

bool Field::equals(const Value& a, const Value& b) const {
    check_kind(a);
    check_kind(b);
    switch (desc_.kind) {
    case FieldKind::prime: return as_res(a) == as_res(b);
    case FieldKind::rational: return as_rat(a) == as_rat(b);
    default: {
        auto x = as_cx(a), y = as_cx(b);
        double scale = std::max({1.0, std::abs(x), std::abs(y)});
        return std::abs(x - y) <= desc_.equality_tolerance * scale;
    }
    }
}

Value Field::pow_oracle(const Value& a, u64 n) const {
    check_kind(a);
    Value result = one();
    Value base = a;
    while (n) {
        if (n & 1) result = mul(result, base);
        n >>= 1;
        if (n) base = mul(base, base);
    }
    return result;
}

std::string Field::format(const Value& v) const {
    check_kind(v);
    switch (desc_.kind) {
    case FieldKind::prime:
        return std::to_string(as_res(v));
    case FieldKind::rational:
        return as_rat(v).get_str();
    default: {
        auto z = as_cx(v);
        return format_double(z.real()) + "," + format_double(z.imag());
    }
    }
}

Value Field::parse(std::string_view text) const {
    switch (desc_.kind) {
    case FieldKind::prime: {
        std::string_view body = text;
        bool negate = false;
        if (!body.empty() && body.front() == '-') {
            negate = true;
            body.remove_prefix(1);
        }
        if (!is_decimal_integer(body))
            throw BadEncoding("bad residue: '" + std::string(text) + "'");
        u64 r{};
        auto res = std::from_chars(body.data(), body.data() + body.size(), r);
        if (res.ec != std::errc{})
            throw BadEncoding("residue out of range: '" + std::string(text) + "'");
        r %= desc_.modulus;
        if (negate && r != 0) r = desc_.modulus - r;
        return make_res(r);
    }
    case FieldKind::rational: {
        auto slash = text.find('/');
        std::string_view num = text.substr(0, slash);
        if (!is_decimal_integer(num))
            throw BadEncoding("bad rational: '" + std::string(text) + "'");
        if (slash != std::string_view::npos) {
            std::string_view den = text.substr(slash + 1);
            if (den.empty() || den.front() == '-' || !is_decimal_integer(den))
                throw BadEncoding("bad rational denominator: '" + std::string(text) + "'");
        }
        mpq_class q;
        if (mpq_set_str(q.get_mpq_t(), std::string(text).c_str(), 10) != 0)
            throw BadEncoding("bad rational: '" + std::string(text) + "'");
        if (q.get_den() == 0) throw BadEncoding("zero denominator: '" + std::string(text) + "'");
        return make_rat(std::move(q));
    }
    default: {
        auto comma = text.find(',');
        double re = parse_double(text.substr(0, comma));
        double im = comma == std::string_view::npos ? 0.0 : parse_double(text.substr(comma + 1));
        return make_cx({re, im});
    }
    }
}

double Field::magnitude(const Value& v) const {
    check_kind(v);
    switch (desc_.kind) {
    case FieldKind::prime: return as_res(v) == 0 ? 0.0 : 1.0;
    case FieldKind::rational: return as_rat(v) == 0 ? 0.0 : 1.0;
    default: return std::abs(as_cx(v));
    }
}

} // namespace vexp
