// Copyright (c) 2026 The vexp authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vexp/evaluator.hpp"
#include "vexp/special_forms.hpp"
#include "vexp/verification.hpp"

namespace {

using namespace vexp;

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

Field parse_field_flag(const std::string& spec) {
    if (spec == "rational") return Field::rational();
    if (spec == "complex") return Field::complex_fp();
    if (spec.rfind("prime:", 0) == 0) {
        const std::string body = spec.substr(6);
        std::uint64_t p = 0;
        std::size_t used = 0;
        try {
            p = std::stoull(body, &used);
        } catch (const std::exception&) {
            throw BadEncoding("bad prime modulus '" + body + "'");
        }
        if (used != body.size()) throw BadEncoding("bad prime modulus '" + body + "'");
        return Field::prime(p);
    }
    throw BadEncoding("unknown field spec '" + spec + "', want prime:<p>|rational|complex");
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string::size_type start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        out.push_back(text.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

// Complex encodings contain commas, so multi-node complex lists use ';'.
// The other backends accept either separator.
std::vector<Value> parse_nodes_list(const Field& f, const std::string& text) {
    char sep = ';';
    if (f.kind() != FieldKind::complex_fp && text.find(';') == std::string::npos) sep = ',';
    std::vector<Value> nodes;
    for (const std::string& piece : split(text, sep)) nodes.push_back(f.parse(piece));
    return nodes;
}

std::vector<Value> parse_nodes_range(const Field& f, const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw BadEncoding("bad range '" + text + "', want <lo>..<hi>");
    std::int64_t lo = 0, hi = 0;
    try {
        std::size_t used = 0;
        lo = std::stoll(text.substr(0, dots), &used);
        if (used != dots) throw std::invalid_argument("");
        const std::string tail = text.substr(dots + 2);
        hi = std::stoll(tail, &used);
        if (used != tail.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw BadEncoding("bad range '" + text + "', want <lo>..<hi>");
    }
    if (hi < lo) throw BadEncoding("empty range '" + text + "'");
    std::vector<Value> nodes;
    nodes.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t v = lo; v <= hi; ++v) nodes.push_back(f.from_integer(v));
    return nodes;
}

// "m" or "m+<extra node>", e.g. "12+0" or "6+5".
std::vector<Value> parse_nodes_roots(const Field& f, const std::string& text) {
    const auto plus = text.find('+');
    std::uint64_t m = 0;
    try {
        std::size_t used = 0;
        const std::string head = text.substr(0, plus);
        m = std::stoull(head, &used);
        if (used != head.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
        throw BadEncoding("bad roots spec '" + text + "', want m or m+<extra>");
    }
    std::optional<Value> extra;
    if (plus != std::string::npos) extra = f.parse(text.substr(plus + 1));
    RootsOfUnityContext ctx = make_roots_context(f, m, std::move(extra));
    return ctx.table.nodes;
}

NodeTable load_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open table file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_table(buf.str());
}

std::string checksum_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

int cmd_precompute(const std::string& field_spec, const std::string& nodes_list,
                   const std::string& nodes_range, const std::string& nodes_roots,
                   const std::string& out_path) {
    const Field field = parse_field_flag(field_spec);
    const int sources = int(!nodes_list.empty()) + int(!nodes_range.empty()) +
                        int(!nodes_roots.empty());
    if (sources != 1) {
        std::cerr << "error: need exactly one of --nodes, --nodes-range, --nodes-roots\n";
        return 2;
    }
    std::vector<Value> nodes;
    if (!nodes_list.empty()) nodes = parse_nodes_list(field, nodes_list);
    if (!nodes_range.empty()) nodes = parse_nodes_range(field, nodes_range);
    if (!nodes_roots.empty()) nodes = parse_nodes_roots(field, nodes_roots);

    const NodeTable t = build_node_table(field, std::move(nodes));
    const std::string bytes = serialize_table(t);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write table file '" + out_path + "'");
    out << bytes;
    out.close();
    std::cout << "k=" << t.k << " checksum=" << checksum_hex(table_checksum(bytes)) << "\n";
    return 0;
}

int cmd_eval(const std::string& table_path, const std::string& base_text, std::uint64_t n,
             bool trace, bool check, unsigned threads) {
    const NodeTable t = load_table(table_path);
    const Field& f = t.field;
    const Value a = f.parse(base_text);
    const EvalOutcome out = eval_power(t, a, static_cast<std::size_t>(n), threads);
    std::cout << f.format(out.value) << "\n";
    if (trace) {
        auto list = [&](const std::vector<Value>& xs) {
            std::string s;
            for (std::size_t i = 0; i < xs.size(); ++i) {
                if (i) s += ' ';
                s += f.format(xs[i]);
            }
            return s;
        };
        std::cout << "numerator " << list(out.numerator_summands) << "\n";
        std::cout << "denominator " << list(out.denominator_summands) << "\n";
        std::cout << "depth " << out.reduction_depth << "\n";
        std::cout << "divisions " << out.division_count << "\n";
    }
    if (check) {
        const Value oracle = f.pow_oracle(a, n);
        const bool match = f.equals(out.value, oracle);
        std::cout << "oracle " << f.format(oracle) << (match ? " MATCH" : " MISMATCH") << "\n";
        if (!match) return 1;
    }
    return 0;
}

int cmd_verify(std::uint64_t seed, std::size_t trials, std::size_t kmax,
               const std::string& fault) {
    SuiteConfig cfg;
    cfg.seed = seed;
    cfg.trials = trials;
    cfg.k_max = kmax;
    cfg.inject_fault = fault;
    const VerifyReport report = run_property_suite(cfg);
    std::cout << report.render_machine();
    std::cerr << "elapsed "
              << std::chrono::duration_cast<std::chrono::milliseconds>(report.elapsed).count()
              << " ms\n";
    return report.passed() ? 0 : 1;
}

std::uint64_t percentile_ns(std::vector<double>& samples, int pct) {
    std::sort(samples.begin(), samples.end());
    const std::size_t idx = (samples.size() - 1) * static_cast<std::size_t>(pct) / 100;
    return static_cast<std::uint64_t>(samples[idx]);
}

int cmd_bench(const std::string& field_spec, const std::string& k_list, std::size_t trials,
              unsigned threads) {
    const Field field = parse_field_flag(field_spec);
    if (field.kind() != FieldKind::prime) {
        std::cerr << "error: bench supports prime fields only\n";
        return 2;
    }
    std::vector<std::size_t> ks;
    for (const std::string& piece : split(k_list, ',')) ks.push_back(std::stoull(piece));

    std::cout << "method,field,k,n,trials,threads,median_ns,p10_ns,p90_ns\n";
    SplitMix rng{42};
    for (const std::size_t k : ks) {
        std::vector<Value> nodes;
        while (nodes.size() < k) {
            Value v = field.from_integer(static_cast<std::int64_t>(rng.below(field.modulus())));
            if (std::none_of(nodes.begin(), nodes.end(),
                             [&](const Value& w) { return field.equals(v, w); }))
                nodes.push_back(std::move(v));
        }
        const NodeTable t = build_node_table(field, std::move(nodes));
        const std::size_t n = k - 1;

        std::vector<Value> bases;
        bases.reserve(trials);
        while (bases.size() < trials) {
            Value a = field.from_integer(static_cast<std::int64_t>(rng.below(field.modulus())));
            if (std::none_of(t.nodes.begin(), t.nodes.end(),
                             [&](const Value& w) { return field.equals(a, w); }))
                bases.push_back(std::move(a));
        }

        std::cout << "# depth k=" << k << " d=" << eval_power(t, bases[0], n).reduction_depth
                  << "\n";

        const auto time_ns = [](auto&& body, std::size_t reps) {
            const auto start = std::chrono::steady_clock::now();
            for (std::size_t i = 0; i < reps; ++i) body();
            const auto stop = std::chrono::steady_clock::now();
            return std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count() /
                   static_cast<double>(reps);
        };

        std::vector<double> vexp_ns, binexp_ns;
        vexp_ns.reserve(trials);
        binexp_ns.reserve(trials);
        Value sink = field.zero();
        for (const Value& a : bases) {
            vexp_ns.push_back(time_ns([&] { sink = eval_power(t, a, n, threads).value; }, 16));
            binexp_ns.push_back(time_ns([&] { sink = field.pow_oracle(a, n); }, 256));
        }
        if (field.is_zero(sink) && trials == 0) std::cerr << "";

        const std::string label = "prime:" + std::to_string(field.modulus());
        auto row = [&](const char* method, std::vector<double>& samples) {
            std::cout << method << ',' << label << ',' << k << ',' << n << ',' << trials << ','
                      << threads << ',' << percentile_ns(samples, 50) << ','
                      << percentile_ns(samples, 10) << ',' << percentile_ns(samples, 90) << "\n";
        };
        row("vexp", vexp_ns);
        row("binexp", binexp_ns);
    }
    return 0;
}

int run_form(const Field& f, const std::string& which, std::uint64_t k_or_m,
             const std::string& base_text) {
    const Value a = f.parse(base_text);
    Value value = f.zero(), oracle = f.zero();
    if (which == "binomial") {
        value = binomial_form_eval(f, static_cast<std::size_t>(k_or_m), a);
        oracle = f.pow_oracle(a, k_or_m - 1);
    } else {
        RootsOfUnityContext ctx = make_roots_context(f, static_cast<std::size_t>(k_or_m));
        if (which == "roots") {
            value = roots_unity_eval(ctx, a);
            oracle = f.sub(f.pow_oracle(a, ctx.m), f.one());
        } else {
            value = partial_fraction_eval(ctx, a);
            oracle = f.inverse(f.sub(f.pow_oracle(a, ctx.m), f.one()));
        }
    }
    const bool match = f.equals(value, oracle);
    std::cout << f.format(value) << ' ' << f.format(oracle) << (match ? " MATCH" : " MISMATCH")
              << "\n";
    return match ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exponentiation through precomputed node tables, with oracles"};
    app.require_subcommand(1);
    int exit_code = 0;

    auto* pre = app.add_subcommand("precompute", "Build a node table and write it to a file");
    auto pre_field = std::make_shared<std::string>();
    auto pre_nodes = std::make_shared<std::string>();
    auto pre_range = std::make_shared<std::string>();
    auto pre_roots = std::make_shared<std::string>();
    auto pre_out = std::make_shared<std::string>();
    pre->add_option("--field", *pre_field, "prime:<p>|rational|complex")->required();
    pre->add_option("--nodes", *pre_nodes, "node list (';' separated for complex)");
    pre->add_option("--nodes-range", *pre_range, "integer nodes <lo>..<hi>");
    pre->add_option("--nodes-roots", *pre_roots, "roots of unity: m or m+<extra>");
    pre->add_option("--out", *pre_out, "output path")->required();
    pre->callback([=, &exit_code] {
        exit_code = cmd_precompute(*pre_field, *pre_nodes, *pre_range, *pre_roots, *pre_out);
    });

    auto* ev = app.add_subcommand("eval", "Evaluate base^exp against a table");
    auto ev_table = std::make_shared<std::string>();
    auto ev_base = std::make_shared<std::string>();
    auto ev_exp = std::make_shared<std::uint64_t>(0);
    auto ev_trace = std::make_shared<bool>(false);
    auto ev_check = std::make_shared<bool>(false);
    auto ev_threads = std::make_shared<unsigned>(1);
    ev->add_option("--table", *ev_table, "table file path")->required();
    ev->add_option("--base", *ev_base, "base in the field's text encoding")->required();
    ev->add_option("--exp", *ev_exp, "exponent in [0, k-1]")->required();
    ev->add_flag("--trace", *ev_trace, "print summands, depth, division count");
    ev->add_flag("--check", *ev_check, "compare against square-and-multiply");
    ev->add_option("--threads", *ev_threads, "summand worker threads");
    ev->callback([=, &exit_code] {
        exit_code = cmd_eval(*ev_table, *ev_base, *ev_exp, *ev_trace, *ev_check, *ev_threads);
    });

    auto* ver = app.add_subcommand("verify", "Run the randomized property suite");
    auto ver_seed = std::make_shared<std::uint64_t>(42);
    auto ver_trials = std::make_shared<std::size_t>(100);
    auto ver_kmax = std::make_shared<std::size_t>(32);
    auto ver_fault = std::make_shared<std::string>();
    ver->add_option("--seed", *ver_seed, "suite seed");
    ver->add_option("--trials", *ver_trials, "instances per check");
    ver->add_option("--kmax", *ver_kmax, "largest table size");
    ver->add_option("--inject-fault", *ver_fault, "tamper mode: coeff");
    ver->callback([=, &exit_code] {
        exit_code = cmd_verify(*ver_seed, *ver_trials, *ver_kmax, *ver_fault);
    });

    auto* ben = app.add_subcommand("bench", "Time table evaluation vs square-and-multiply");
    auto ben_field = std::make_shared<std::string>("prime:1000003");
    auto ben_k = std::make_shared<std::string>("16");
    auto ben_trials = std::make_shared<std::size_t>(32);
    auto ben_threads = std::make_shared<unsigned>(1);
    ben->add_option("--field", *ben_field, "prime:<p>");
    ben->add_option("--k", *ben_k, "comma-separated table sizes");
    ben->add_option("--trials", *ben_trials, "samples per row");
    ben->add_option("--threads", *ben_threads, "summand worker threads");
    ben->callback([=, &exit_code] {
        exit_code = cmd_bench(*ben_field, *ben_k, *ben_trials, *ben_threads);
    });

    auto* forms = app.add_subcommand("forms", "Evaluate the specialized closed forms");
    forms->require_subcommand(1);
    auto add_form = [&](const char* name, const char* size_flag, const char* help,
                        const char* default_field) {
        auto* sub = forms->add_subcommand(name, help);
        auto field = std::make_shared<std::string>(default_field);
        auto size = std::make_shared<std::uint64_t>(0);
        auto base = std::make_shared<std::string>();
        sub->add_option("--field", *field, "prime:<p>|rational|complex");
        sub->add_option(size_flag, *size, "size parameter")->required();
        sub->add_option("--base", *base, "base in the field's text encoding")->required();
        std::string which = name;
        sub->callback([=, &exit_code] {
            exit_code = run_form(parse_field_flag(*field), which, *size, *base);
        });
    };
    add_form("binomial", "--k", "a^(k-1) from signed binomial weights on nodes 1..k",
             "rational");
    add_form("roots", "--m", "a^m - 1 from the m-th roots of unity", "complex");
    add_form("pfrac", "--m", "1/(a^m - 1) as a sum over simple poles", "complex");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const vexp::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
