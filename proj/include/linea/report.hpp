// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Invariant report emission and assertion checking. An assertion `c` at
// point l is proved when the abstract state at l rules out its negation:
// transfer(state, test(not c)) is Bottom. Text output prints one line per
// point plus a `where` line for symbolic bindings; JSON output uses exact
// bounds serialized as "p/q", "-oo", "+oo" strings so golden tests never
// chase rounding.

#include <linea/analyzer.hpp>
#include <linea/parser.hpp>

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace linea {

enum class assert_status { proved, unknown };

inline const char* assert_status_str(assert_status s) {
    return s == assert_status::proved ? "proved" : "unknown";
}

inline assert_status check_assert(const abstract_state& st, const instr& check,
                                  const analysis_options& opts) {
    instr negated = instr::test(check.arg(), cmp_negate(check.cmp()));
    return transfer(st, negated, opts).is_bottom() ? assert_status::proved
                                                   : assert_status::unknown;
}

inline std::vector<assert_status> check_asserts(const compiled_program& cp,
                                                const std::vector<abstract_state>& states,
                                                const analysis_options& opts) {
    std::vector<assert_status> out;
    out.reserve(cp.asserts.size());
    for (const source_assert& a : cp.asserts)
        out.push_back(check_assert(states.at(a.at), a.check, opts));
    return out;
}

inline std::string bound_str(const bound& b) {
    if (b.is_minus_inf()) return "-oo";
    if (b.is_plus_inf()) return "+oo";
    return rat_str(b.value());
}

inline void text_report(std::ostream& out, const compiled_program& cp,
                        const std::vector<abstract_state>& states,
                        const analysis_options& opts) {
    const program& p = cp.prog;
    for (point_id l = 0; l < p.point_count(); ++l) {
        const abstract_state& st = states.at(l);
        out << p.point_name(l) << ":";
        if (st.is_bottom()) {
            out << " unreachable\n";
            continue;
        }
        for (std::uint32_t i = 0; i < p.var_count(); ++i) {
            out << (i ? ", " : " ") << p.var_name(var_id{i}) << " in "
                << st.num.get(var_id{i}).str();
        }
        out << "\n";
        std::string bindings;
        for (std::uint32_t i = 0; i < p.var_count(); ++i) {
            const cexpr& c = st.sym.binding(var_id{i});
            if (!c) continue;
            if (!bindings.empty()) bindings += ", ";
            bindings += p.var_name(var_id{i}) + " := " + expr_str(c, p.var_names());
        }
        if (!bindings.empty()) out << "  where " << bindings << "\n";
    }
    std::vector<assert_status> statuses = check_asserts(cp, states, opts);
    for (std::size_t i = 0; i < cp.asserts.size(); ++i)
        out << "assert (line " << cp.asserts[i].line << ") at "
            << p.point_name(cp.asserts[i].at) << ": " << assert_status_str(statuses[i])
            << "\n";
}

inline nlohmann::json json_report(const compiled_program& cp,
                                  const std::vector<abstract_state>& states,
                                  const analysis_options& opts) {
    const program& p = cp.prog;
    nlohmann::json points = nlohmann::json::object();
    for (point_id l = 0; l < p.point_count(); ++l) {
        const abstract_state& st = states.at(l);
        nlohmann::json intervals = nlohmann::json::object();
        nlohmann::json symbolic = nlohmann::json::object();
        if (!st.is_bottom()) {
            for (std::uint32_t i = 0; i < p.var_count(); ++i) {
                const interval& iv = st.num.get(var_id{i});
                intervals[p.var_name(var_id{i})] = {bound_str(iv.lo()), bound_str(iv.hi())};
                const cexpr& c = st.sym.binding(var_id{i});
                symbolic[p.var_name(var_id{i})] =
                    c ? nlohmann::json(expr_str(c, p.var_names())) : nlohmann::json(nullptr);
            }
        }
        points[std::to_string(l)] = {{"name", p.point_name(l)},
                                     {"reachable", !st.is_bottom()},
                                     {"intervals", std::move(intervals)},
                                     {"symbolic", std::move(symbolic)}};
    }
    nlohmann::json asserts = nlohmann::json::array();
    std::vector<assert_status> statuses = check_asserts(cp, states, opts);
    for (std::size_t i = 0; i < cp.asserts.size(); ++i)
        asserts.push_back({{"point", cp.asserts[i].at},
                           {"line", cp.asserts[i].line},
                           {"status", assert_status_str(statuses[i])}});
    return {{"points", std::move(points)}, {"assertions", std::move(asserts)}};
}

inline void dump_cfg(std::ostream& out, const program& p) {
    out << "entry " << p.point_name(p.entry()) << ", " << p.point_count() << " points\n";
    for (const arc& a : p.arcs())
        out << p.point_name(a.src) << " -> " << p.point_name(a.dst) << ": "
            << instr_str(a.ins, p.var_names()) << "\n";
}

}  // namespace linea
