// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdio>
#include <string>
#include <vector>

#include "vexp/evaluator.hpp"
#include "vexp/special_forms.hpp"
#include "vexp/verification.hpp"

namespace py = pybind11;
using namespace vexp;

// Values cross the boundary as their canonical text encodings; Python callers
// never touch GMP or std::complex directly.
namespace {

Field field_from_spec(const std::string& spec) {
    if (spec == "rational") return Field::rational();
    if (spec == "complex") return Field::complex_fp();
    if (spec.rfind("prime:", 0) == 0) {
        const std::string body = spec.substr(6);
        std::size_t used = 0;
        const std::uint64_t p = std::stoull(body, &used);
        if (used != body.size()) throw BadEncoding("bad prime modulus '" + body + "'");
        return Field::prime(p);
    }
    throw BadEncoding("unknown field spec '" + spec + "', want prime:<p>|rational|complex");
}

std::string field_label(const Field& f) {
    switch (f.kind()) {
    case FieldKind::prime: return "prime:" + std::to_string(f.modulus());
    case FieldKind::rational: return "rational";
    case FieldKind::complex_fp: return "complex";
    }
    return "?";
}

std::vector<std::string> format_all(const Field& f, const std::vector<Value>& xs) {
    std::vector<std::string> out;
    out.reserve(xs.size());
    for (const Value& x : xs) out.push_back(f.format(x));
    return out;
}

struct PyTable {
    NodeTable t;
};

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exponentiation through precomputed node tables";

    py::register_exception<Error>(m, "VexpError");

    py::class_<PyTable>(m, "Table")
        .def_property_readonly("k", [](const PyTable& s) { return s.t.k; })
        .def_property_readonly("field", [](const PyTable& s) { return field_label(s.t.field); })
        .def_property_readonly("nodes",
                               [](const PyTable& s) { return format_all(s.t.field, s.t.nodes); })
        .def_property_readonly("coeffs",
                               [](const PyTable& s) { return format_all(s.t.field, s.t.coeffs); })
        .def(
            "eval",
            [](const PyTable& s, const std::string& base, std::size_t n, unsigned threads) {
                const EvalOutcome out = eval_power(s.t, s.t.field.parse(base), n, threads);
                return s.t.field.format(out.value);
            },
            py::arg("base"), py::arg("n"), py::arg("threads") = 1)
        .def(
            "eval_traced",
            [](const PyTable& s, const std::string& base, std::size_t n) {
                const EvalOutcome out = eval_power(s.t, s.t.field.parse(base), n);
                py::dict d;
                d["value"] = s.t.field.format(out.value);
                d["numerator_summands"] = format_all(s.t.field, out.numerator_summands);
                d["denominator_summands"] = format_all(s.t.field, out.denominator_summands);
                d["reduction_depth"] = out.reduction_depth;
                d["division_count"] = out.division_count;
                return d;
            },
            py::arg("base"), py::arg("n"))
        .def(
            "eval_shifted",
            [](const PyTable& s, const std::string& alpha, const std::string& beta,
               const std::string& base) {
                const Field& f = s.t.field;
                return f.format(eval_shifted(s.t, f.parse(alpha), f.parse(beta), f.parse(base)));
            },
            py::arg("alpha"), py::arg("beta"), py::arg("base"))
        .def("serialize", [](const PyTable& s) { return serialize_table(s.t); })
        .def("checksum", [](const PyTable& s) {
            char buf[17];
            std::snprintf(buf, sizeof buf, "%016llx",
                          static_cast<unsigned long long>(
                              table_checksum(serialize_table(s.t))));
            return std::string(buf);
        });

    m.def(
        "build_table",
        [](const std::string& field_spec, const std::vector<std::string>& nodes) {
            const Field f = field_from_spec(field_spec);
            std::vector<Value> vals;
            vals.reserve(nodes.size());
            for (const std::string& s : nodes) vals.push_back(f.parse(s));
            return PyTable{build_node_table(f, std::move(vals))};
        },
        py::arg("field"), py::arg("nodes"));

    m.def(
        "load_table", [](const std::string& text) { return PyTable{deserialize_table(text)}; },
        py::arg("text"));

    m.def(
        "pow_oracle",
        [](const std::string& field_spec, const std::string& base, std::uint64_t n) {
            const Field f = field_from_spec(field_spec);
            return f.format(f.pow_oracle(f.parse(base), n));
        },
        py::arg("field"), py::arg("base"), py::arg("n"));

    m.def(
        "binomial_form",
        [](const std::string& field_spec, std::size_t k, const std::string& base) {
            const Field f = field_from_spec(field_spec);
            return f.format(binomial_form_eval(f, k, f.parse(base)));
        },
        py::arg("field"), py::arg("k"), py::arg("base"));

    m.def(
        "roots_form",
        [](const std::string& field_spec, std::size_t order, const std::string& base) {
            const Field f = field_from_spec(field_spec);
            return f.format(roots_unity_eval(make_roots_context(f, order), f.parse(base)));
        },
        py::arg("field"), py::arg("m"), py::arg("base"));

    m.def(
        "partial_fraction",
        [](const std::string& field_spec, std::size_t order, const std::string& base) {
            const Field f = field_from_spec(field_spec);
            return f.format(partial_fraction_eval(make_roots_context(f, order), f.parse(base)));
        },
        py::arg("field"), py::arg("m"), py::arg("base"));

    m.def(
        "product_form",
        [](const std::string& field_spec, std::size_t order, const std::string& base) {
            const Field f = field_from_spec(field_spec);
            return f.format(product_form_eval(make_roots_context(f, order), f.parse(base)));
        },
        py::arg("field"), py::arg("m"), py::arg("base"));

    m.def(
        "run_suite",
        [](std::uint64_t seed, std::size_t trials, std::size_t kmax, const std::string& fault) {
            SuiteConfig cfg;
            cfg.seed = seed;
            cfg.trials = trials;
            cfg.k_max = kmax;
            cfg.inject_fault = fault;
            const VerifyReport report = run_property_suite(cfg);
            return py::make_tuple(report.render_machine(), report.total_failures());
        },
        py::arg("seed") = 42, py::arg("trials") = 100, py::arg("kmax") = 32,
        py::arg("fault") = std::string{});

    m.def(
        "cost_report",
        [](std::size_t k, std::uint64_t n) {
            const CostReport rep = cost_report(k, n);
            py::dict d;
            d["k"] = rep.k;
            d["n"] = rep.n;
            d["vexp_local_ops"] = rep.vexp_local_ops;
            d["vexp_reduction_depth"] = rep.vexp_reduction_depth;
            d["vexp_divisions"] = rep.vexp_divisions;
            d["binexp_multiplications"] = rep.binexp_multiplications;
            return d;
        },
        py::arg("k"), py::arg("n"));
}
