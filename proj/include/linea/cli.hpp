// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Command line driver. Exit codes: 0 all assertions proved (or none),
// 1 some assertion unknown, 2 input or usage error.

#include <linea/concrete.hpp>
#include <linea/parser.hpp>
#include <linea/report.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace linea {

namespace detail {

inline mult_strategy mult_from_name(const std::string& name) {
    if (name == "all-cases") return mult_strategy::all_cases();
    if (name == "width") return mult_strategy::interval_size(false);
    if (name == "rel-width") return mult_strategy::interval_size(true);
    if (name == "homogeneous") return mult_strategy::homogeneity();
    return mult_strategy::simplification();
}

inline subst_strategy subst_from_name(const std::string& name) {
    if (name == "none") return subst_strategy::none;
    if (name == "full") return subst_strategy::full;
    if (name == "det") return subst_strategy::deterministic;
    if (name == "linear") return subst_strategy::linear_only;
    return subst_strategy::full_noconst;
}

inline std::vector<rational> parse_threshold_list(const std::string& text) {
    std::vector<rational> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::optional<rational> v = rat_parse(item);
        if (!v) throw std::runtime_error("bad threshold '" + item + "'");
        out.push_back(*v);
    }
    return out;
}

// Box syntax mirrors interval literals: "[-3,3],[0,5]", one per variable.
inline concrete_box parse_box(const std::string& text, std::uint32_t var_count) {
    concrete_box box;
    std::size_t i = 0;
    auto skip_ws = [&] { while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i; };
    auto expect = [&](char c) {
        skip_ws();
        if (i >= text.size() || text[i] != c)
            throw std::runtime_error(std::string("expected '") + c + "' in box");
        ++i;
    };
    auto number = [&]() -> mpz_class {
        skip_ws();
        std::size_t j = i;
        if (j < text.size() && (text[j] == '-' || text[j] == '+')) ++j;
        while (j < text.size() && (std::isdigit(static_cast<unsigned char>(text[j])) ||
                                   text[j] == '.' || text[j] == '/'))
            ++j;
        if (j == i) throw std::runtime_error("expected number in box");
        std::optional<rational> q = rat_parse(text.substr(i, j - i));
        if (!q || !rat_is_integer(*q)) throw std::runtime_error("box bounds must be integers");
        i = j;
        return q->get_num();
    };
    for (;;) {
        expect('[');
        mpz_class lo = number();
        expect(',');
        mpz_class hi = number();
        expect(']');
        if (lo > hi) throw std::runtime_error("empty box range");
        box.ranges.emplace_back(lo, hi);
        skip_ws();
        if (i >= text.size()) break;
        expect(',');
    }
    if (box.ranges.size() != var_count)
        throw std::runtime_error("box has " + std::to_string(box.ranges.size()) +
                                 " ranges for " + std::to_string(var_count) + " variables");
    return box;
}

inline void oracle_report(std::ostream& out, const program& p,
                          const std::vector<std::set<concrete_env>>& states) {
    for (point_id l = 0; l < p.point_count(); ++l) {
        out << p.point_name(l) << ": " << states[l].size() << " states";
        for (std::uint32_t i = 0; i < p.var_count(); ++i) {
            std::set<mpz_class> vals = collect_values(states, l, var_id{i});
            out << (i == 0 ? "; " : ", ") << p.var_name(var_id{i}) << " in {";
            std::size_t shown = 0;
            for (const mpz_class& v : vals) {
                if (shown == 24) {
                    out << ",... " << vals.size() << " values";
                    break;
                }
                out << (shown ? "," : "") << v.get_str();
                ++shown;
            }
            out << "}";
        }
        out << "\n";
    }
}

}  // namespace detail

// args are the command line without the program name, in natural order.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"numerical invariant analyzer for a small imperative language"};
    app.name("linea");

    std::string file;
    std::string mult = "simplify";
    std::string subst = "full-noconst";
    bool combo = true;
    int reduce = 0;
    std::string mode;
    int widen_delay = 1;
    std::string thresholds;
    int narrow = 1;
    std::string format = "text";
    bool want_dump_cfg = false;
    std::string oracle_box;

    app.add_option("file", file, "source file (.an)")->required();
    app.add_option("--mult", mult, "multiplication strategy")
        ->check(CLI::IsMember({"all-cases", "width", "rel-width", "simplify", "homogeneous"}))
        ->capture_default_str();
    app.add_option("--subst", subst, "substitution strategy")
        ->check(CLI::IsMember({"none", "full", "full-noconst", "det", "linear"}))
        ->capture_default_str();
    app.add_flag("--combo,!--no-combo", combo,
                 "meet with the plain interval transfer (default on)");
    app.add_option("--reduce", reduce, "reduction rounds after each transfer")
        ->check(CLI::Range(0, 10))
        ->capture_default_str();
    app.add_option("--mode", mode, "value semantics (int or rat); overrides the source pragma")
        ->check(CLI::IsMember({"int", "rat"}));
    app.add_option("--widen-delay", widen_delay, "joins before widening kicks in")
        ->check(CLI::Range(0, 1000000))
        ->capture_default_str();
    app.add_option("--thresholds", thresholds, "comma separated widening thresholds");
    app.add_option("--narrow", narrow, "decreasing passes after stabilization")
        ->check(CLI::Range(0, 10))
        ->capture_default_str();
    app.add_option("--format", format, "report format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    app.add_flag("--dump-cfg", want_dump_cfg, "print the desugared control flow graph");
    app.add_option("--oracle-box", oracle_box,
                   "debug: enumerate concrete states from this entry box instead of analyzing")
        ->group("");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    std::ifstream in(file);
    if (!in) {
        err << "error: cannot read '" << file << "'\n";
        return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    std::optional<compiled_program> parsed;
    try {
        parsed = parse_program(buf.str());
    } catch (const parse_error& e) {
        err << file << ":" << e.what() << "\n";
        return 2;
    }
    const compiled_program& cp = *parsed;

    analysis_options opts;
    opts.mult = detail::mult_from_name(mult);
    opts.subst = detail::subst_from_name(subst);
    opts.combo = combo;
    opts.reduce_rounds = reduce;
    opts.widening_delay = widen_delay;
    opts.decreasing_passes = narrow;
    opts.mode = mode.empty() ? cp.mode
                             : (mode == "int" ? semantics_mode::integers
                                              : semantics_mode::rationals);
    try {
        opts.thresholds = detail::parse_threshold_list(thresholds);
    } catch (const std::exception& e) {
        err << "error: bad --thresholds: " << e.what() << "\n";
        return 2;
    }

    if (want_dump_cfg) dump_cfg(out, cp.prog);

    if (!oracle_box.empty()) {
        if (opts.mode != semantics_mode::integers) {
            err << "error: --oracle-box requires int mode\n";
            return 2;
        }
        try {
            concrete_box box = detail::parse_box(oracle_box, cp.prog.var_count());
            detail::oracle_report(out, cp.prog, collect(cp.prog, box, 500000));
        } catch (const std::exception& e) {
            err << "error: oracle enumeration failed: " << e.what() << "\n";
            return 2;
        }
        return 0;
    }

    solve_result res;
    try {
        res = solve(cp.prog, opts);
    } catch (const std::exception& e) {
        err << "error: analysis failed: " << e.what() << "\n";
        return 2;
    }

    if (format == "json")
        out << json_report(cp, res.states, opts).dump(2) << "\n";
    else
        text_report(out, cp, res.states, opts);

    for (assert_status s : check_asserts(cp, res.states, opts))
        if (s == assert_status::unknown) return 1;
    return 0;
}

}  // namespace linea
