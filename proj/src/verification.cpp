// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#include "vexp/verification.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <complex>
#include <functional>
#include <sstream>
#include <string_view>
#include <utility>

#include "vexp/evaluator.hpp"
#include "vexp/special_forms.hpp"

namespace vexp {

namespace {

std::string field_label(const Field& f) {
    switch (f.kind()) {
    case FieldKind::prime: return "prime:" + std::to_string(f.modulus());
    case FieldKind::rational: return "rational";
    case FieldKind::complex_fp: return "complex";
    }
    return "?";
}

std::string format_list(const Field& f, std::span<const Value> xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        out += f.format(xs[i]);
    }
    out += ']';
    return out;
}

void require_exact(const Field& f, const char* who) {
    if (!f.exact()) throw std::invalid_argument(std::string(who) + " needs an exact field");
}

void require_small(std::size_t k, const char* who) {
    if (k < 2 || k > 6)
        throw std::invalid_argument(std::string(who) + " handles 2 <= k <= 6, got " +
                                    std::to_string(k));
}

void require_distinct_inputs(const Field& f, std::span<const Value> nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (f.equals(nodes[i], nodes[j]))
                throw DuplicateNodes(i + 1, j + 1,
                                     "nodes " + std::to_string(i + 1) + " and " +
                                         std::to_string(j + 1) + " are equal");
}

void require_off_nodes(const Field& f, std::span<const Value> nodes, const Value& a) {
    for (std::size_t j = 0; j < nodes.size(); ++j)
        if (f.equals(a, nodes[j]))
            throw BaseCollidesWithNode(j + 1, "a collides with node " + std::to_string(j + 1));
}

Value signed_by_parity(const Field& f, const Value& v, std::size_t exponent) {
    return exponent % 2 ? f.neg(v) : v;
}

} // namespace

CheckResult laplace_zero_check(const NodeTable& t) {
    require_exact(t.field, "laplace_zero_check");
    CheckResult r;
    r.name = "laplace_zero_sums";
    const Field& f = t.field;
    for (std::size_t n = 0; n + 1 < t.k; ++n) {
        Value sum = f.zero();
        for (std::size_t j = 0; j < t.k; ++j)
            sum = f.add(sum, f.mul(t.powers[j][n], t.coeffs[j]));
        ++r.instances_run;
        if (!f.is_zero(sum)) {
            ++r.failures;
            if (!r.first_counterexample)
                r.first_counterexample = field_label(f) + " nodes=" + format_list(f, t.nodes) +
                                         " n=" + std::to_string(n) +
                                         " residual=" + f.format(sum);
        }
    }
    return r;
}

CheckResult appendix_determinant_check(const Field& field, std::span<const Value> nodes,
                                       const Value& a) {
    require_exact(field, "appendix_determinant_check");
    require_small(nodes.size(), "appendix_determinant_check");
    require_distinct_inputs(field, nodes);
    require_off_nodes(field, nodes, a);
    const std::size_t k = nodes.size();

    // X = Vandermonde columns 0..k-2 plus last column 1/(P_j - a).
    std::vector<std::vector<Value>> x(k);
    for (std::size_t j = 0; j < k; ++j) {
        x[j].reserve(k);
        Value p = field.one();
        for (std::size_t col = 0; col + 1 < k; ++col) {
            x[j].push_back(p);
            p = field.mul(p, nodes[j]);
        }
        x[j].push_back(field.inverse(field.sub(nodes[j], a)));
    }
    const Value det_x = det_bruteforce(field, std::move(x));

    Value c = field.one();
    for (const Value& node : nodes) c = field.mul(c, field.inverse(field.sub(node, a)));
    const Value closed =
        signed_by_parity(field, field.mul(c, vandermonde_det(field, nodes)), k - 1);

    Value cofactor_sum = field.zero();
    for (std::size_t j = 0; j < k; ++j)
        cofactor_sum = field.add(cofactor_sum, field.div(cofactor_column_k(field, nodes, j + 1),
                                                         field.sub(nodes[j], a)));

    CheckResult r;
    r.name = "appendix_nonsingular_determinant";
    r.instances_run = 1;
    std::string problem;
    if (!field.equals(det_x, closed))
        problem = "||X||=" + field.format(det_x) + " but (-1)^(k-1) c ||V||=" +
                  field.format(closed);
    else if (field.is_zero(det_x))
        problem = "||X|| is zero";
    else if (!field.equals(det_x, cofactor_sum))
        problem = "||X||=" + field.format(det_x) + " but cofactor sum=" +
                  field.format(cofactor_sum);
    if (!problem.empty()) {
        r.failures = 1;
        r.first_counterexample = field_label(field) + " nodes=" + format_list(field, nodes) +
                                 " a=" + field.format(a) + " " + problem;
    }
    return r;
}

CheckResult zero_determinant_check(const Field& field, std::span<const Value> nodes,
                                   const Value& a) {
    require_exact(field, "zero_determinant_check");
    require_small(nodes.size(), "zero_determinant_check");
    require_off_nodes(field, nodes, a);
    const std::size_t k = nodes.size();

    CheckResult r;
    r.name = "geometric_column_zero_det";
    r.instances_run = 1;
    auto fail = [&](const std::string& problem) {
        r.failures = 1;
        r.first_counterexample = field_label(field) + " nodes=" + format_list(field, nodes) +
                                 " a=" + field.format(a) + " " + problem;
    };

    std::vector<std::vector<Value>> m(k);
    for (std::size_t j = 0; j < k; ++j) {
        // sum_{i=1..k-1} P_j^{(k-1)-i} a^{i-1}, the expanded geometric column.
        Value geometric = field.zero();
        for (std::size_t i = 1; i < k; ++i)
            geometric = field.add(geometric, field.mul(field.pow_oracle(nodes[j], k - 1 - i),
                                                       field.pow_oracle(a, i - 1)));
        const Value closed =
            field.div(field.sub(field.pow_oracle(nodes[j], k - 1), field.pow_oracle(a, k - 1)),
                      field.sub(nodes[j], a));
        if (!field.equals(geometric, closed)) {
            fail("row " + std::to_string(j + 1) + " geometric=" + field.format(geometric) +
                 " closed=" + field.format(closed));
            return r;
        }
        m[j].reserve(k);
        Value p = field.one();
        for (std::size_t col = 0; col + 1 < k; ++col) {
            m[j].push_back(p);
            p = field.mul(p, nodes[j]);
        }
        m[j].push_back(geometric);
    }
    const Value det = det_bruteforce(field, std::move(m));
    if (!field.is_zero(det)) fail("determinant=" + field.format(det) + " expected zero");
    return r;
}

namespace {

struct SplitMix {
    std::uint64_t state = 0;
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t below(std::uint64_t bound) { return next() % bound; }
};

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Primes offered to table-building checks; all exceed the default k range so
// nodes plus a base always fit. 1108855441 - 1 is divisible by every m in
// 2..12, which the roots-of-unity checks rely on.
constexpr std::array<std::uint64_t, 6> kSuitePrimes{
    97, 10007, 1000003, 1108855441, 2147483647ULL, 1152921504606859327ULL};
constexpr std::uint64_t kRootsPrime = 1108855441;

constexpr double kComplexBaseSep = 0.3; // keeps 1/(P_j - a) bounded in float checks
constexpr double kRootsBaseSep = 0.1;

Field make_field(FieldKind kind, std::size_t k, SplitMix& rng) {
    switch (kind) {
    case FieldKind::prime: {
        std::vector<std::uint64_t> fits;
        for (std::uint64_t p : kSuitePrimes)
            if (p > k + 1) fits.push_back(p);
        if (fits.empty()) throw FieldTooSmall("no suite prime exceeds k=" + std::to_string(k));
        return Field::prime(fits[rng.below(fits.size())]);
    }
    case FieldKind::rational: return Field::rational();
    case FieldKind::complex_fp: return Field::complex_fp();
    }
    throw std::invalid_argument("unknown backend");
}

double grid_coord(SplitMix& rng) { return static_cast<double>(rng.below(81)) * 0.1 - 4.0; }

Value random_value(const Field& f, SplitMix& rng) {
    switch (f.kind()) {
    case FieldKind::prime:
        return f.from_integer(static_cast<std::int64_t>(rng.below(f.modulus())));
    case FieldKind::rational: {
        const std::int64_t num = static_cast<std::int64_t>(rng.below(101)) - 50;
        const std::int64_t den = static_cast<std::int64_t>(rng.below(20)) + 1;
        return f.div(f.from_integer(num), f.from_integer(den));
    }
    case FieldKind::complex_fp:
        return Value{std::complex<double>{grid_coord(rng), grid_coord(rng)}};
    }
    throw std::invalid_argument("unknown backend");
}

Value random_nonzero(const Field& f, SplitMix& rng) {
    for (int tries = 0; tries < 1000; ++tries) {
        Value v = random_value(f, rng);
        if (!f.is_zero(v)) return v;
    }
    throw FieldTooSmall("could not draw a nonzero element");
}

std::vector<Value> random_nodes(const Field& f, std::size_t k, SplitMix& rng) {
    std::vector<Value> nodes;
    nodes.reserve(k);
    std::size_t rejects = 0;
    while (nodes.size() < k) {
        Value v = random_value(f, rng);
        const bool dup = std::any_of(nodes.begin(), nodes.end(),
                                     [&](const Value& w) { return f.equals(v, w); });
        if (dup) {
            if (++rejects > 1000)
                throw FieldTooSmall("could not draw " + std::to_string(k) +
                                    " distinct nodes after 1000 rejections");
            continue;
        }
        nodes.push_back(std::move(v));
    }
    return nodes;
}

Value random_base(const Field& f, std::span<const Value> avoid, SplitMix& rng,
                  double min_sep = 0.0) {
    for (std::size_t rejects = 0; rejects <= 1000; ++rejects) {
        Value a = random_value(f, rng);
        bool bad = false;
        for (const Value& v : avoid) {
            if (f.equals(a, v) ||
                (min_sep > 0.0 && !f.exact() && f.magnitude(f.sub(a, v)) < min_sep)) {
                bad = true;
                break;
            }
        }
        if (!bad) return a;
    }
    throw FieldTooSmall("could not draw a base off the nodes after 1000 rejections");
}

// Complex bases for the roots-of-unity checks come from a compact box around
// the unit circle: |a|^m for m up to 16 must stay small enough that the
// cancellation in summing to ~1/(a^m - 1) keeps about two digits of margin
// under the 1e-9 equality tolerance.
Value random_roots_base(const Field& f, std::span<const Value> avoid, SplitMix& rng) {
    if (f.kind() != FieldKind::complex_fp) return random_base(f, avoid, rng);
    for (std::size_t rejects = 0; rejects <= 1000; ++rejects) {
        const Value a{std::complex<double>{
            static_cast<double>(rng.below(31)) * 0.1 - 1.5,
            static_cast<double>(rng.below(31)) * 0.1 - 1.5}};
        bool bad = false;
        for (const Value& v : avoid)
            if (f.magnitude(f.sub(a, v)) < kRootsBaseSep) {
                bad = true;
                break;
            }
        if (!bad) return a;
    }
    throw FieldTooSmall("could not draw a roots base after 1000 rejections");
}

using TrialFn = std::function<void(SplitMix&, CheckResult&)>;

void record(CheckResult& r, bool ok, const std::function<std::string()>& counterexample) {
    ++r.instances_run;
    if (!ok) {
        ++r.failures;
        if (!r.first_counterexample) r.first_counterexample = counterexample();
    }
}

void absorb(CheckResult& r, const CheckResult& sub) {
    r.instances_run += sub.instances_run;
    r.failures += sub.failures;
    if (sub.failures > 0 && !r.first_counterexample)
        r.first_counterexample = sub.first_counterexample;
}

std::vector<FieldKind> intersect(const std::vector<FieldKind>& enabled,
                                 std::initializer_list<FieldKind> wanted) {
    std::vector<FieldKind> out;
    for (FieldKind kind : enabled)
        if (std::find(wanted.begin(), wanted.end(), kind) != wanted.end()) out.push_back(kind);
    return out;
}

constexpr std::initializer_list<FieldKind> kAllKinds{FieldKind::prime, FieldKind::rational,
                                                     FieldKind::complex_fp};
constexpr std::initializer_list<FieldKind> kExactKinds{FieldKind::prime, FieldKind::rational};

// Complex trials stay small: node separation is only 0.1, so large k would
// push summation error past the 1e-9 equality tolerance.
std::size_t pick_k(const Field& f, std::size_t k_max, SplitMix& rng, std::size_t cap = 0) {
    std::size_t limit = k_max;
    if (!f.exact()) limit = std::min(limit, std::size_t{8});
    if (cap > 0) limit = std::min(limit, cap);
    return 2 + rng.below(limit - 1);
}

} // namespace

std::size_t VerifyReport::total_failures() const {
    std::size_t sum = 0;
    for (const CheckResult& c : checks) sum += c.failures;
    return sum;
}

std::string VerifyReport::render_machine() const {
    std::ostringstream os;
    for (const CheckResult& c : checks) {
        os << "CHECK " << c.name << ' ' << c.instances_run << ' ' << c.failures << '\n';
        if (c.failures > 0 && c.first_counterexample)
            os << "COUNTEREXAMPLE " << c.name << ' ' << *c.first_counterexample << '\n';
    }
    os << "SUITE seed=" << seed << " checks=" << checks.size()
       << " failures=" << total_failures() << (passed() ? " PASS" : " FAIL") << '\n';
    return os.str();
}

std::string VerifyReport::render_human() const {
    std::ostringstream os;
    os << render_machine();
    os << "elapsed "
       << std::chrono::duration_cast<std::chrono::milliseconds>(elapsed).count() << " ms\n";
    return os.str();
}

VerifyReport run_property_suite(const SuiteConfig& config) {
    if (config.k_max < 2) throw std::invalid_argument("k_max must be at least 2");
    if (config.trials < 1) throw std::invalid_argument("trials must be at least 1");
    if (config.backends.empty()) throw std::invalid_argument("no backends enabled");
    if (!config.inject_fault.empty() && config.inject_fault != "coeff")
        throw std::invalid_argument("unknown fault kind: " + config.inject_fault);

    const auto started = std::chrono::steady_clock::now();
    VerifyReport report;
    report.seed = config.seed;

    auto pick = [&](std::initializer_list<FieldKind> wanted,
                    SplitMix& rng) -> std::optional<Field> {
        const std::vector<FieldKind> kinds = intersect(config.backends, wanted);
        if (kinds.empty()) return std::nullopt;
        const FieldKind kind = kinds[rng.below(kinds.size())];
        // k is drawn by the caller; fields only need to outsize k_max.
        return make_field(kind, config.k_max, rng);
    };

    std::vector<std::pair<std::string, TrialFn>> suite;

    suite.emplace_back("coeff_product_identity", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kAllKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        if (config.inject_fault == "coeff")
            t.coeffs[0] = f->mul(t.coeffs[0], f->from_integer(2));
        for (std::size_t j = 0; j < k; ++j) {
            Value prod = f->one();
            for (std::size_t i = 0; i < k; ++i)
                if (i != j) prod = f->mul(prod, f->sub(t.nodes[i], t.nodes[j]));
            record(r, f->is_one(f->mul(t.coeffs[j], prod)), [&] {
                return field_label(*f) + " nodes=" + format_list(*f, t.nodes) + " j=" +
                       std::to_string(j + 1) + " C_j=" + f->format(t.coeffs[j]) +
                       " prod=" + f->format(prod);
            });
        }
    });

    suite.emplace_back("coeff_zero_sum", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kAllKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        Value sum = f->zero();
        double largest = 0.0;
        for (const Value& c : t.coeffs) {
            sum = f->add(sum, c);
            if (!f->exact()) largest = std::max(largest, f->magnitude(c));
        }
        const bool ok = f->exact()
                            ? f->is_zero(sum)
                            : f->magnitude(sum) <= f->tolerance() * std::max(1.0, largest);
        record(r, ok, [&] {
            return field_label(*f) + " nodes=" + format_list(*f, t.nodes) +
                   " sum=" + f->format(sum);
        });
    });

    suite.emplace_back("powers_grid_matches_binexp", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kAllKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        bool ok = true;
        std::string detail;
        for (std::size_t j = 0; ok && j < k; ++j)
            for (std::size_t n = 0; ok && n < k; ++n)
                if (!f->equals(t.powers[j][n], f->pow_oracle(t.nodes[j], n))) {
                    ok = false;
                    detail = " j=" + std::to_string(j + 1) + " n=" + std::to_string(n);
                }
        record(r, ok, [&] { return field_label(*f) + detail; });
    });

    suite.emplace_back("central_identity_vs_binexp", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kAllKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        const Value a = random_base(*f, t.nodes, rng, kComplexBaseSep);
        const std::size_t n = rng.below(k);
        const EvalOutcome out = eval_power(t, a, n);
        const Value expected = f->pow_oracle(a, n);
        const bool ok = f->equals(out.value, expected) && out.division_count == 1 &&
                        out.reduction_depth == ceil_log2(k);
        record(r, ok, [&] {
            return field_label(*f) + " nodes=" + format_list(*f, t.nodes) + " a=" +
                   f->format(a) + " n=" + std::to_string(n) + " got=" + f->format(out.value) +
                   " want=" + f->format(expected);
        });
    });

    suite.emplace_back("eval_exponent_zero_is_one", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kAllKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        const Value a = random_base(*f, t.nodes, rng, kComplexBaseSep);
        const Value got = eval_power(t, a, 0).value;
        record(r, f->is_one(got), [&] {
            return field_label(*f) + " a=" + f->format(a) + " got=" + f->format(got);
        });
    });

    suite.emplace_back("laplace_zero_sums", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kExactKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        absorb(r, laplace_zero_check(t));
    });

    suite.emplace_back("cofactor_ratio_constant", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kExactKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng, 6);
        NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        const Value expected =
            signed_by_parity(*f, vandermonde_det(*f, t.nodes), k - 1);
        for (std::size_t j = 0; j < k; ++j) {
            const Value ratio = f->div(cofactor_column_k(*f, t.nodes, j + 1), t.coeffs[j]);
            record(r, f->equals(ratio, expected), [&] {
                return field_label(*f) + " nodes=" + format_list(*f, t.nodes) + " j=" +
                       std::to_string(j + 1) + " ratio=" + f->format(ratio) +
                       " want=" + f->format(expected);
            });
        }
    });

    suite.emplace_back("vandermonde_det_vs_bruteforce", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kExactKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng, 6);
        const std::vector<Value> nodes = random_nodes(*f, k, rng);
        std::vector<std::vector<Value>> m(k);
        for (std::size_t j = 0; j < k; ++j) {
            Value p = f->one();
            for (std::size_t col = 0; col < k; ++col) {
                m[j].push_back(p);
                p = f->mul(p, nodes[j]);
            }
        }
        const Value brute = det_bruteforce(*f, std::move(m));
        const Value closed = vandermonde_det(*f, nodes);
        record(r, f->equals(brute, closed), [&] {
            return field_label(*f) + " nodes=" + format_list(*f, nodes) + " brute=" +
                   f->format(brute) + " closed=" + f->format(closed);
        });
    });

    suite.emplace_back("appendix_nonsingular_determinant", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kExactKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng, 6);
        const std::vector<Value> nodes = random_nodes(*f, k, rng);
        const Value a = random_base(*f, nodes, rng);
        absorb(r, appendix_determinant_check(*f, nodes, a));
    });

    suite.emplace_back("geometric_column_zero_det", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kExactKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng, 6);
        const std::vector<Value> nodes = random_nodes(*f, k, rng);
        const Value a = random_base(*f, nodes, rng);
        absorb(r, zero_determinant_check(*f, nodes, a));
    });

    suite.emplace_back("shift_scale_invariance", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kExactKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        const Value alpha = random_value(*f, rng);
        const Value beta = random_nonzero(*f, rng);
        std::vector<Value> shifted;
        shifted.reserve(k);
        for (const Value& p : t.nodes) shifted.push_back(f->add(alpha, f->mul(beta, p)));
        const Value a = random_base(*f, shifted, rng);
        const Value got = eval_shifted(t, alpha, beta, a);
        const Value want = f->pow_oracle(a, k - 1);
        record(r, f->equals(got, want), [&] {
            return field_label(*f) + " nodes=" + format_list(*f, t.nodes) + " alpha=" +
                   f->format(alpha) + " beta=" + f->format(beta) + " a=" + f->format(a) +
                   " got=" + f->format(got) + " want=" + f->format(want);
        });
    });

    suite.emplace_back("serialize_round_trip", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kAllKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        const NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        const std::string bytes = serialize_table(t);
        const NodeTable back = deserialize_table(bytes);
        const bool ok = back.k == t.k && back.nodes == t.nodes && back.coeffs == t.coeffs &&
                        back.powers == t.powers && serialize_table(back) == bytes;
        record(r, ok, [&] {
            return field_label(*f) + " k=" + std::to_string(k) +
                   " checksum=" + std::to_string(table_checksum(bytes));
        });
    });

    suite.emplace_back("tampered_file_detected", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kAllKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        const bool tamper_coeff = rng.below(2) == 0;
        if (tamper_coeff)
            t.coeffs[0] = f->mul(t.coeffs[0], f->from_integer(2));
        else
            t.nodes[1] = t.nodes[0];
        const std::string bytes = serialize_table(t);
        bool caught = false;
        try {
            deserialize_table(bytes);
        } catch (const InvariantViolation&) {
            caught = true;
        }
        record(r, caught, [&] {
            return field_label(*f) + " k=" + std::to_string(k) +
                   (tamper_coeff ? " doubled C_1 went undetected" : " duplicate node went undetected");
        });
    });

    suite.emplace_back("binomial_matches_general_eval", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kExactKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng, 12);
        std::vector<Value> nodes;
        nodes.reserve(k);
        for (std::size_t j = 1; j <= k; ++j)
            nodes.push_back(f->from_integer(static_cast<std::int64_t>(j)));
        const Value a = random_base(*f, nodes, rng);
        const Value direct = binomial_form_eval(*f, k, a);
        const NodeTable t = build_node_table(*f, std::move(nodes));
        const Value general = eval_power(t, a, k - 1).value;
        const Value oracle = f->pow_oracle(a, k - 1);
        record(r, f->equals(direct, general) && f->equals(direct, oracle), [&] {
            return field_label(*f) + " k=" + std::to_string(k) + " a=" + f->format(a) +
                   " binomial=" + f->format(direct) + " general=" + f->format(general) +
                   " oracle=" + f->format(oracle);
        });
    });

    suite.emplace_back("binomial_sign_flip_invariant", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kAllKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng, 12);
        std::vector<Value> nodes;
        nodes.reserve(k);
        for (std::size_t j = 1; j <= k; ++j)
            nodes.push_back(f->from_integer(static_cast<std::int64_t>(j)));
        const Value a = random_base(*f, nodes, rng, kComplexBaseSep);
        // Pascal row, then the ratio twice: once with the printed (-1)^j
        // weights and once globally negated. The ratio must not care.
        std::vector<Value> row(k, f->zero());
        row[0] = f->one();
        for (std::size_t i = 1; i < k; ++i)
            for (std::size_t t = i; t >= 1; --t) row[t] = f->add(row[t], row[t - 1]);
        Value num_pos = f->zero(), den_pos = f->zero();
        Value num_neg = f->zero(), den_neg = f->zero();
        for (std::size_t j = 1; j <= k; ++j) {
            Value w = row[j - 1];
            if (j % 2 == 1) w = f->neg(w);
            const Value base_term = f->div(w, f->sub(nodes[j - 1], a));
            const Value pow_term = f->mul(f->pow_oracle(nodes[j - 1], k - 1), base_term);
            num_pos = f->add(num_pos, pow_term);
            den_pos = f->add(den_pos, base_term);
            num_neg = f->add(num_neg, f->neg(pow_term));
            den_neg = f->add(den_neg, f->neg(base_term));
        }
        const Value r1 = f->div(num_pos, den_pos);
        const Value r2 = f->div(num_neg, den_neg);
        record(r, f->equals(r1, r2), [&] {
            return field_label(*f) + " k=" + std::to_string(k) + " a=" + f->format(a) +
                   " printed=" + f->format(r1) + " negated=" + f->format(r2);
        });
    });

    auto roots_setup = [&](SplitMix& rng) -> std::optional<std::pair<RootsOfUnityContext, Value>> {
        const std::vector<FieldKind> kinds = intersect(config.backends, kAllKinds);
        if (kinds.empty()) return std::nullopt;
        const FieldKind kind = kinds[rng.below(kinds.size())];
        Field f = kind == FieldKind::prime     ? Field::prime(kRootsPrime)
                  : kind == FieldKind::rational ? Field::rational()
                                                : Field::complex_fp();
        std::size_t m = 0;
        switch (kind) {
        case FieldKind::prime: m = 2 + rng.below(11); break;     // 2..12, all divide p-1
        case FieldKind::rational: m = 1 + rng.below(2); break;   // only +-1 exist
        case FieldKind::complex_fp: m = 2 + rng.below(15); break; // 2..16
        }
        RootsOfUnityContext ctx = make_roots_context(f, m);
        const Value a = random_roots_base(f, ctx.table.nodes, rng);
        return std::make_pair(std::move(ctx), a);
    };

    suite.emplace_back("roots_value_vs_product_form", [&](SplitMix& rng, CheckResult& r) {
        auto setup = roots_setup(rng);
        if (!setup) return;
        const auto& [ctx, a] = *setup;
        const Field& f = ctx.table.field;
        const Value ratio = roots_unity_eval(ctx, a);
        const Value product = product_form_eval(ctx, a);
        const Value oracle = f.sub(f.pow_oracle(a, ctx.m), f.one());
        record(r, f.equals(ratio, product) && f.equals(ratio, oracle), [&] {
            return field_label(f) + " m=" + std::to_string(ctx.m) + " a=" + f.format(a) +
                   " ratio=" + f.format(ratio) + " product=" + f.format(product) +
                   " oracle=" + f.format(oracle);
        });
    });

    suite.emplace_back("roots_times_partial_fraction_is_one", [&](SplitMix& rng,
                                                                  CheckResult& r) {
        auto setup = roots_setup(rng);
        if (!setup) return;
        const auto& [ctx, a] = *setup;
        const Field& f = ctx.table.field;
        const Value product = f.mul(roots_unity_eval(ctx, a), partial_fraction_eval(ctx, a));
        record(r, f.is_one(product), [&] {
            return field_label(f) + " m=" + std::to_string(ctx.m) + " a=" + f.format(a) +
                   " product=" + f.format(product);
        });
    });

    suite.emplace_back("tree_reduce_depth_and_sum", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kExactKinds, rng);
        if (!f) return;
        const std::size_t size = 1 + rng.below(4 * config.k_max);
        std::vector<Value> xs;
        xs.reserve(size);
        for (std::size_t i = 0; i < size; ++i) xs.push_back(random_value(*f, rng));
        const auto [sum, depth] = tree_reduce(*f, xs);
        Value sequential = f->zero();
        for (const Value& x : xs) sequential = f->add(sequential, x);
        const std::size_t expected_depth =
            size == 1 ? 0 : static_cast<std::size_t>(std::bit_width(size - 1));
        record(r, depth == expected_depth && f->equals(sum, sequential), [&] {
            return field_label(*f) + " size=" + std::to_string(size) + " depth=" +
                   std::to_string(depth) + " expected_depth=" + std::to_string(expected_depth) +
                   " sum=" + f->format(sum) + " sequential=" + f->format(sequential);
        });
    });

    suite.emplace_back("binexp_multiplication_count", [&](SplitMix& rng, CheckResult& r) {
        const std::uint64_t n = 1 + rng.below(std::uint64_t{1} << 20);
        const CostReport rep = cost_report(static_cast<std::size_t>(n) + 1, n);
        // Walk square-and-multiply explicitly, counting every multiplication.
        std::uint64_t simulated = 0;
        bool seen_msb = false;
        for (int bit = 63; bit >= 0; --bit) {
            const bool set = (n >> bit) & 1;
            if (!seen_msb) {
                if (set) seen_msb = true;
                continue;
            }
            ++simulated; // square
            if (set) ++simulated;
        }
        const bool ok = rep.binexp_multiplications == simulated &&
                        rep.vexp_reduction_depth == ceil_log2(rep.k) &&
                        rep.vexp_divisions == rep.k + 1 &&
                        rep.vexp_local_ops == 3 * static_cast<std::uint64_t>(rep.k);
        record(r, ok, [&] {
            return "n=" + std::to_string(n) + " reported=" +
                   std::to_string(rep.binexp_multiplications) + " simulated=" +
                   std::to_string(simulated);
        });
    });

    suite.emplace_back("base_collision_raises", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kAllKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        const NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        const std::size_t j = rng.below(k);
        bool ok = false;
        try {
            eval_power(t, t.nodes[j], 0);
        } catch (const BaseCollidesWithNode& e) {
            ok = e.node_index == j + 1;
        }
        record(r, ok, [&] {
            return field_label(*f) + " k=" + std::to_string(k) + " j=" + std::to_string(j + 1);
        });
    });

    suite.emplace_back("exponent_out_of_range_raises", [&](SplitMix& rng, CheckResult& r) {
        auto f = pick(kAllKinds, rng);
        if (!f) return;
        const std::size_t k = pick_k(*f, config.k_max, rng);
        const NodeTable t = build_node_table(*f, random_nodes(*f, k, rng));
        bool ok = false;
        try {
            eval_power(t, random_base(*f, t.nodes, rng), k);
        } catch (const ExponentOutOfRange&) {
            ok = true;
        }
        record(r, ok, [&] { return field_label(*f) + " k=" + std::to_string(k); });
    });

    for (auto& [name, fn] : suite) {
        CheckResult result;
        result.name = name;
        SplitMix rng{config.seed ^ fnv1a(name)};
        for (std::size_t trial = 0; trial < config.trials; ++trial) {
            try {
                fn(rng, result);
            } catch (const std::exception& e) {
                ++result.instances_run;
                ++result.failures;
                if (!result.first_counterexample)
                    result.first_counterexample = std::string("unexpected exception: ") + e.what();
            }
        }
        report.checks.push_back(std::move(result));
    }

    report.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
        std::chrono::steady_clock::now() - started);
    return report;
}

} // namespace vexp
