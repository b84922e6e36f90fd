// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Shared test helpers: interval shorthands, random affine forms for the
// exactness properties, and a deterministic generator of small int-mode
// programs whose concrete states stay enumerable (loops run on dedicated
// counters that only count up, so every run terminates).

#include <linea/linea.hpp>

#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace linea::testing {

inline rational rat(const std::string& s) {
    auto v = rat_parse(s);
    if (!v) throw std::runtime_error("bad rational literal: " + s);
    return *v;
}

inline interval iv(long a, long b) {
    return interval(bound(rational(a)), bound(rational(b)));
}

inline interval iv(const std::string& a, const std::string& b) {
    return interval(bound(rat(a)), bound(rat(b)));
}

inline rational random_rat(std::mt19937& rng, int num_range = 12, int max_den = 4) {
    std::uniform_int_distribution<int> num(-num_range, num_range);
    std::uniform_int_distribution<int> den(1, max_den);
    rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

inline interval random_finite_iv(std::mt19937& rng, int num_range = 12, int max_den = 4) {
    rational a = random_rat(rng, num_range, max_den);
    rational b = random_rat(rng, num_range, max_den);
    if (b < a) std::swap(a, b);
    return interval(bound(a), bound(b));
}

inline affine_form random_form(std::mt19937& rng, int n_vars) {
    affine_form f(random_finite_iv(rng));
    std::uniform_int_distribution<int> coin(0, 1);
    for (int v = 0; v < n_vars; ++v)
        if (coin(rng)) f.set_term(var_id{static_cast<std::uint32_t>(v)}, random_finite_iv(rng));
    return f;
}

inline std::vector<rational> random_point(std::mt19937& rng, int n_vars) {
    std::vector<rational> rho;
    rho.reserve(n_vars);
    for (int v = 0; v < n_vars; ++v) rho.push_back(random_rat(rng));
    return rho;
}

// Source-level program generator. Data variables take assignments; counter
// variables exist only to bound while loops.
class program_gen {
public:
    explicit program_gen(std::mt19937& rng) : rng_(rng) {}

    std::string source() {
        n_data_ = pick(1, 2);
        n_counters_ = pick(0, 2);
        out_.str("");
        out_ << "mode int;\nvar ";
        for (int i = 0; i < n_data_ + n_counters_; ++i) out_ << (i ? ", " : "") << name(i);
        out_ << ";\n";
        for (int i = 0; i < n_data_; ++i) {
            int a = pick(-8, 8), b = pick(-8, 8);
            if (b < a) std::swap(a, b);
            out_ << name(i) << " = [" << a << ", " << b << "];\n";
        }
        // Counters start at zero; their whole range comes from loop bounds.
        for (int i = n_data_; i < n_data_ + n_counters_; ++i) out_ << name(i) << " = 0;\n";
        next_counter_ = 0;
        block(0, 4);
        return out_.str();
    }

private:
    std::mt19937& rng_;
    std::ostringstream out_;
    int n_data_ = 0, n_counters_ = 0, next_counter_ = 0;

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    std::string name(int i) const {
        static const char* data[] = {"A", "B"};
        static const char* counters[] = {"I", "J"};
        return i < n_data_ ? data[i] : counters[i - n_data_];
    }
    std::string data_var() { return name(pick(0, n_data_ - 1)); }
    std::string indent(int depth) const { return std::string(2 * depth, ' '); }

    // Mixes variables, small scalars and nondeterministic intervals;
    // multiplications are capped to keep linearization products small.
    std::string expression(int depth, int& muls) {
        int kind = pick(0, 9);
        if (depth >= 2 || kind < 4) {
            int leaf = pick(0, 2);
            if (leaf == 0) return data_var();
            if (leaf == 1) return std::to_string(pick(-8, 8));
            int a = pick(-8, 8), b = pick(-8, 8);
            if (b < a) std::swap(a, b);
            return "[" + std::to_string(a) + ", " + std::to_string(b) + "]";
        }
        const char* op = "+";
        if (kind < 6)
            op = "-";
        else if (kind < 8 && muls > 0) {
            op = "*";
            --muls;
        } else if (kind == 9) {
            op = "/";
        }
        std::string l = expression(depth + 1, muls);
        std::string r = expression(depth + 1, muls);
        return "(" + l + " " + op + " " + r + ")";
    }

    std::string condition() {
        static const char* ops[] = {"==", "!=", "<", "<=", ">", ">="};
        return data_var() + " " + ops[pick(0, 5)] + " " + std::to_string(pick(-4, 4));
    }

    void block(int depth, int budget) {
        int n = pick(1, budget);
        for (int i = 0; i < n; ++i) statement(depth);
    }

    void statement(int depth) {
        int kind = pick(0, 9);
        if (depth < 2 && kind == 8) {
            out_ << indent(depth) << "if (" << condition() << ") {\n";
            block(depth + 1, 2);
            out_ << indent(depth) << "}";
            if (pick(0, 1)) {
                out_ << " else {\n";
                block(depth + 1, 2);
                out_ << indent(depth) << "}";
            }
            out_ << "\n";
            return;
        }
        if (depth < 2 && kind == 9 && next_counter_ < n_counters_) {
            std::string c = name(n_data_ + next_counter_++);
            int limit = pick(1, 4);
            out_ << indent(depth) << c << " = 0;\n";
            out_ << indent(depth) << "while (" << c << " <= " << limit << ") {\n";
            block(depth + 1, 2);
            out_ << indent(depth + 1) << c << " = " << c << " + 1;\n";
            out_ << indent(depth) << "}\n";
            return;
        }
        if (kind == 7) {
            out_ << indent(depth) << "assume(" << condition() << ");\n";
            return;
        }
        // Clamping after each write keeps the stored range (and with it the
        // concrete state count) small without pruning paths.
        int muls = 2;
        std::string v = data_var();
        out_ << indent(depth) << v << " = " << expression(0, muls) << ";\n";
        out_ << indent(depth) << "if (" << v << " > 8) { " << v << " = 8; }\n";
        out_ << indent(depth) << "if (" << v << " < -8) { " << v << " = -8; }\n";
    }
};

// Entry box fixed at the origin: generated programs assign every variable
// before reading it, so the box only seeds the enumeration.
inline concrete_box origin_box(const program& p) {
    concrete_box box;
    box.ranges.assign(p.var_count(), {mpz_class(0), mpz_class(0)});
    return box;
}

// Point lookup by the parser-assigned name ("entry", "exit", "L3", ...).
inline point_id named_point(const program& p, const std::string& name) {
    for (point_id l = 0; l < p.point_count(); ++l)
        if (p.point_name(l) == name) return l;
    throw std::out_of_range("no point named " + name);
}

// The strategy grid for soundness sweeps: every multiplication strategy
// and every substitution strategy appears at least once.
inline std::vector<analysis_options> soundness_grid() {
    std::vector<analysis_options> grid(6);
    grid[0].mult = mult_strategy::all_cases();
    grid[0].subst = subst_strategy::none;
    grid[0].combo = false;
    grid[1].mult = mult_strategy::interval_size(false);
    grid[1].subst = subst_strategy::full;
    grid[2].mult = mult_strategy::interval_size(true);
    grid[2].subst = subst_strategy::full_noconst;
    grid[2].reduce_rounds = 1;
    grid[3].mult = mult_strategy::simplification();
    grid[3].subst = subst_strategy::deterministic;
    grid[3].decreasing_passes = 2;
    grid[4].mult = mult_strategy::homogeneity();
    grid[4].subst = subst_strategy::linear_only;
    grid[4].combo = false;
    grid[4].reduce_rounds = 2;
    grid[5].thresholds = {rational(-8), rational(0), rational(8)};
    grid[5].widening_delay = 0;
    for (analysis_options& o : grid) o.mode = semantics_mode::integers;
    return grid;
}

// Every oracle-reachable environment must lie in the concretization of the
// abstract state at its point. Returns a description of the first
// violation, or empty.
inline std::string check_soundness(const program& p,
                                   const std::vector<std::set<concrete_env>>& oracle,
                                   const std::vector<abstract_state>& states) {
    for (point_id l = 0; l < p.point_count(); ++l) {
        for (const concrete_env& rho : oracle[l]) {
            std::string where = "point " + p.point_name(l);
            if (states[l].is_bottom()) return where + ": reachable env at bottom state";
            for (std::uint32_t i = 0; i < p.var_count(); ++i) {
                if (!icontains(states[l].num.get(var_id{i}), rational(rho[i])))
                    return where + ": " + p.var_name(var_id{i}) + "=" + rho[i].get_str() +
                           " outside " + states[l].num.get(var_id{i}).str();
            }
            if (!sc_gamma_holds(states[l].sym, rho))
                return where + ": symbolic binding excludes a reachable env";
        }
    }
    return "";
}

}  // namespace linea::testing
