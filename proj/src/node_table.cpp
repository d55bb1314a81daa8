// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#include "vexp/node_table.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <utility>

namespace vexp {

namespace {

// First colliding pair under the field's equality, or (0, 0) if none.
std::pair<std::size_t, std::size_t> find_duplicate(const Field& f,
                                                   std::span<const Value> nodes) {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            if (f.equals(nodes[i], nodes[j])) return {i + 1, j + 1};
    return {0, 0};
}

void require_distinct(const Field& f, std::span<const Value> nodes) {
    auto [i, j] = find_duplicate(f, nodes);
    if (i != 0)
        throw DuplicateNodes(i, j, "nodes " + std::to_string(i) + " and " + std::to_string(j) +
                                       " are equal (" + f.format(nodes[i - 1]) + ")");
}

std::vector<Value> compute_coeffs(const Field& f, std::span<const Value> nodes) {
    const std::size_t k = nodes.size();
    std::vector<Value> coeffs;
    coeffs.reserve(k);
    for (std::size_t j = 0; j < k; ++j) {
        Value prod = f.one();
        for (std::size_t i = 0; i < k; ++i) {
            if (i == j) continue;
            prod = f.mul(prod, f.sub(nodes[i], nodes[j]));
        }
        coeffs.push_back(f.inverse(prod));
    }
    return coeffs;
}

std::vector<std::vector<Value>> compute_powers(const Field& f, std::span<const Value> nodes) {
    const std::size_t k = nodes.size();
    std::vector<std::vector<Value>> powers(k);
    for (std::size_t j = 0; j < k; ++j) {
        powers[j].reserve(k);
        powers[j].push_back(f.one()); // P_j^0 = 1, including P_j = 0
        for (std::size_t n = 1; n < k; ++n)
            powers[j].push_back(f.mul(powers[j].back(), nodes[j]));
    }
    return powers;
}

// Re-derives every invariant from the (nodes, coeffs) payload of a loaded
// file; table files are an interchange format and are never trusted.
void verify_invariants(const Field& f, std::span<const Value> nodes,
                       std::span<const Value> coeffs) {
    auto [i, j] = find_duplicate(f, nodes);
    if (i != 0)
        throw InvariantViolation("nodes " + std::to_string(i) + " and " + std::to_string(j) +
                                 " are not distinct");
    for (std::size_t jj = 0; jj < nodes.size(); ++jj) {
        Value prod = f.one();
        for (std::size_t ii = 0; ii < nodes.size(); ++ii) {
            if (ii == jj) continue;
            prod = f.mul(prod, f.sub(nodes[ii], nodes[jj]));
        }
        if (!f.is_one(f.mul(coeffs[jj], prod)))
            throw InvariantViolation("coeff " + std::to_string(jj + 1) +
                                     " does not satisfy C_j * prod(P_i - P_j) = 1");
    }
    Value sum = f.zero();
    for (const Value& c : coeffs) sum = f.add(sum, c);
    bool sum_ok;
    if (f.exact()) {
        sum_ok = f.is_zero(sum);
    } else {
        double scale = 1.0;
        for (const Value& c : coeffs) scale = std::max(scale, f.magnitude(c));
        sum_ok = f.magnitude(sum) <= f.tolerance() * scale;
    }
    if (!sum_ok) throw InvariantViolation("coefficients do not sum to zero");
}

} // namespace

NodeTable build_node_table(const Field& field, std::vector<Value> nodes) {
    const std::size_t k = nodes.size();
    if (k < 2) throw TooFewNodes("need at least 2 nodes, got " + std::to_string(k));
    if (field.kind() == FieldKind::prime && field.modulus() <= k)
        throw FieldTooSmall("prime field of order " + std::to_string(field.modulus()) +
                            " cannot host " + std::to_string(k) + " nodes plus a base");
    require_distinct(field, nodes);

    NodeTable t{field, k, std::move(nodes), {}, {}};
    t.coeffs = compute_coeffs(field, t.nodes);
    t.powers = compute_powers(field, t.nodes);
    return t;
}

Value vandermonde_det(const Field& field, std::span<const Value> nodes) {
    Value det = field.one();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j)
            det = field.mul(det, field.sub(nodes[j], nodes[i]));
    return det;
}

namespace {

Value det_cofactor(const Field& f, const std::vector<std::vector<Value>>& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    if (n == 2) return f.sub(f.mul(m[0][0], m[1][1]), f.mul(m[0][1], m[1][0]));
    Value acc = f.zero();
    for (std::size_t r = 0; r < n; ++r) {
        std::vector<std::vector<Value>> minor;
        minor.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r) continue;
            minor.emplace_back(m[i].begin() + 1, m[i].end());
        }
        Value term = f.mul(m[r][0], det_cofactor(f, minor));
        acc = r % 2 == 0 ? f.add(acc, term) : f.sub(acc, term);
    }
    return acc;
}

// Bareiss fraction-free elimination; every division is exact.
Value det_bareiss(const Field& f, std::vector<std::vector<Value>>& m) {
    const std::size_t n = m.size();
    bool negate = false;
    Value prev = f.one();
    for (std::size_t r = 0; r + 1 < n; ++r) {
        if (f.is_zero(m[r][r])) {
            std::size_t swap_row = r + 1;
            while (swap_row < n && f.is_zero(m[swap_row][r])) ++swap_row;
            if (swap_row == n) return f.zero();
            std::swap(m[r], m[swap_row]);
            negate = !negate;
        }
        for (std::size_t i = r + 1; i < n; ++i) {
            for (std::size_t j = r + 1; j < n; ++j) {
                Value num = f.sub(f.mul(m[r][r], m[i][j]), f.mul(m[i][r], m[r][j]));
                m[i][j] = f.div(num, prev);
            }
            m[i][r] = f.zero();
        }
        prev = m[r][r];
    }
    return negate ? f.neg(m[n - 1][n - 1]) : m[n - 1][n - 1];
}

} // namespace

Value det_bruteforce(const Field& field, std::vector<std::vector<Value>> m) {
    if (m.empty()) return field.one();
    for (const auto& row : m)
        if (row.size() != m.size()) throw std::invalid_argument("matrix is not square");
    if (m.size() <= 4) return det_cofactor(field, m);
    return det_bareiss(field, m);
}

Value cofactor_column_k(const Field& field, std::span<const Value> nodes, std::size_t j) {
    const std::size_t k = nodes.size();
    if (j < 1 || j > k) throw std::invalid_argument("cofactor row index out of range");
    require_distinct(field, nodes);
    std::vector<std::vector<Value>> minor;
    minor.reserve(k - 1);
    for (std::size_t row = 0; row < k; ++row) {
        if (row == j - 1) continue;
        std::vector<Value> entries;
        entries.reserve(k - 1);
        Value p = field.one();
        for (std::size_t col = 0; col + 1 < k; ++col) {
            entries.push_back(p);
            p = field.mul(p, nodes[row]);
        }
        minor.push_back(std::move(entries));
    }
    Value det = k == 1 ? field.one() : det_bruteforce(field, std::move(minor));
    return (k + j) % 2 == 0 ? det : field.neg(det);
}

std::string serialize_table(const NodeTable& t) {
    std::ostringstream out;
    out << "vexp-table v1\n";
    switch (t.field.kind()) {
    case FieldKind::prime: out << "field prime " << t.field.modulus() << "\n"; break;
    case FieldKind::rational: out << "field rational\n"; break;
    case FieldKind::complex_fp: {
        char buf[64];
        auto res = std::to_chars(buf, buf + sizeof buf, t.field.tolerance());
        out << "field complex " << std::string_view(buf, res.ptr) << "\n";
        break;
    }
    }
    out << "k " << t.k << "\n";
    for (const Value& p : t.nodes) out << "node " << t.field.format(p) << "\n";
    for (const Value& c : t.coeffs) out << "coeff " << t.field.format(c) << "\n";
    return out.str();
}

namespace {

struct LineReader {
    std::string_view input;
    std::size_t line_number = 0;

    std::string_view next(std::string_view expected_key) {
        if (input.empty())
            throw MalformedTableFile(line_number + 1,
                                     "unexpected end of file, wanted '" +
                                         std::string(expected_key) + "'");
        ++line_number;
        auto eol = input.find('\n');
        std::string_view line = input.substr(0, eol);
        input = eol == std::string_view::npos ? std::string_view{} : input.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return line;
    }

    // "key rest" -> rest, with the key checked.
    std::string_view field_of(std::string_view line, std::string_view key) {
        if (line.substr(0, key.size()) != key || line.size() <= key.size() ||
            line[key.size()] != ' ')
            throw MalformedTableFile(line_number, "expected '" + std::string(key) +
                                                      " ...', got '" + std::string(line) + "'");
        return line.substr(key.size() + 1);
    }
};

} // namespace

NodeTable deserialize_table(std::string_view bytes) {
    LineReader reader{bytes};

    if (reader.next("vexp-table v1") != "vexp-table v1")
        throw MalformedTableFile(1, "missing 'vexp-table v1' header");

    auto field_line = reader.next("field");
    auto field_spec = reader.field_of(field_line, "field");
    Field field = [&]() -> Field {
        try {
            if (field_spec == "rational") return Field::rational();
            if (field_spec.substr(0, 6) == "prime ") {
                std::uint64_t p{};
                auto body = field_spec.substr(6);
                auto res = std::from_chars(body.data(), body.data() + body.size(), p);
                if (res.ec != std::errc{} || res.ptr != body.data() + body.size())
                    throw MalformedTableFile(reader.line_number, "bad prime modulus");
                return Field::prime(p);
            }
            if (field_spec == "complex") return Field::complex_fp();
            if (field_spec.substr(0, 8) == "complex ") {
                double tol{};
                auto body = field_spec.substr(8);
                auto res = std::from_chars(body.data(), body.data() + body.size(), tol);
                if (res.ec != std::errc{} || res.ptr != body.data() + body.size())
                    throw MalformedTableFile(reader.line_number, "bad complex tolerance");
                return Field::complex_fp(tol);
            }
        } catch (const CompositeModulus& e) {
            throw MalformedTableFile(reader.line_number, e.what());
        } catch (const BadTolerance& e) {
            throw MalformedTableFile(reader.line_number, e.what());
        }
        throw MalformedTableFile(reader.line_number,
                                 "unknown field kind '" + std::string(field_spec) + "'");
    }();

    auto k_body = reader.field_of(reader.next("k"), "k");
    std::size_t k{};
    auto res = std::from_chars(k_body.data(), k_body.data() + k_body.size(), k);
    if (res.ec != std::errc{} || res.ptr != k_body.data() + k_body.size())
        throw MalformedTableFile(reader.line_number, "bad k value '" + std::string(k_body) + "'");
    if (k < 2) throw MalformedTableFile(reader.line_number, "k must be >= 2");

    auto parse_values = [&](std::string_view key) {
        std::vector<Value> values;
        values.reserve(k);
        for (std::size_t i = 0; i < k; ++i) {
            auto body = reader.field_of(reader.next(key), key);
            try {
                values.push_back(field.parse(body));
            } catch (const BadEncoding& e) {
                throw MalformedTableFile(reader.line_number, e.what());
            }
        }
        return values;
    };
    std::vector<Value> nodes = parse_values("node");
    std::vector<Value> coeffs = parse_values("coeff");

    if (!reader.input.empty() && reader.input != "\n")
        throw MalformedTableFile(reader.line_number + 1, "trailing content after table");

    verify_invariants(field, nodes, coeffs);

    NodeTable t{field, k, std::move(nodes), std::move(coeffs), {}};
    t.powers = compute_powers(field, t.nodes);
    return t;
}

std::uint64_t table_checksum(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace vexp
