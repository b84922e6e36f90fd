// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Structural abstraction of arbitrary expressions into interval affine
// forms. Sums and differences map to the exact form operators; a division
// intervalizes its right argument; a multiplication must intervalize one
// side, and which side is picked by a pluggable strategy:
//   all_cases       keep every combination of choices (set of forms)
//   interval_size   intervalize the side with the narrower range, absolute
//                   or relative amplitude
//   simplification  intervalize the side whose variables occur least in the
//                   rest of the expression, to maximize cancellation
//   homogeneity     intervalize the smallest variable subset making the
//                   expression degree-homogeneous
// Every returned form soundly over-approximates the expression under the
// given bounds. The transformation is deliberately not monotone in e.

#include <linea/affine.hpp>
#include <linea/interval.hpp>
#include <linea/lang.hpp>

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

namespace linea {

enum class mult_kind { all_cases, interval_size, simplification, homogeneity };

struct mult_strategy {
    mult_kind kind = mult_kind::simplification;
    bool relative = false;  // interval_size: compare relative amplitudes

    static mult_strategy all_cases() { return {mult_kind::all_cases, false}; }
    static mult_strategy interval_size(bool relative) { return {mult_kind::interval_size, relative}; }
    static mult_strategy simplification() { return {mult_kind::simplification, false}; }
    static mult_strategy homogeneity() { return {mult_kind::homogeneity, false}; }
};

// Degree of an expression once the given variables are intervalized (they
// count as constants): nullopt means inhomogeneous. +/- require equal
// degrees, * adds, / subtracts.
inline std::optional<int> expr_degree(const expr_ptr& e, const std::set<var_id>& intervalized) {
    switch (e->node_kind()) {
        case expr::kind::var: return intervalized.count(e->var_ref()) ? 0 : 1;
        case expr::kind::constant: return 0;
        default: {
            auto dl = expr_degree(e->lhs(), intervalized);
            auto dr = expr_degree(e->rhs(), intervalized);
            if (!dl || !dr) return std::nullopt;
            switch (e->op()) {
                case binop::add:
                case binop::sub: return dl == dr ? dl : std::nullopt;
                case binop::mul: return *dl + *dr;
                default: return *dl - *dr;
            }
        }
    }
}

namespace detail {

constexpr std::size_t all_cases_cap = 256;

inline void count_occurrences(const expr_ptr& e, std::map<var_id, int>& out) {
    switch (e->node_kind()) {
        case expr::kind::var: ++out[e->var_ref()]; break;
        case expr::kind::constant: break;
        default:
            count_occurrences(e->lhs(), out);
            count_occurrences(e->rhs(), out);
    }
}

struct lin_ctx {
    const var_bounds& bounds;
    mult_strategy strat;
    semantics_mode mode;
    bool refine_trunc;
    std::map<var_id, int> totals;    // occurrence counts over the whole expression
    bool have_homog = false;
    std::set<var_id> homog;          // chosen subset when have_homog
};

// True when the left operand is the one to intervalize by range width.
// An unbounded side never wins against a bounded one; relative amplitude
// (b-a)/|a+b| applies only when both ranges are finite and off-center, and
// falls back to absolute width otherwise. Ties go left.
inline bool narrower_left(const interval& il, const interval& ir, bool relative) {
    auto wl = il.finite_width();
    auto wr = ir.finite_width();
    if (relative && wl && wr) {
        rational sl = il.lo().value() + il.hi().value();
        rational sr = ir.lo().value() + ir.hi().value();
        if (sl != 0 && sr != 0)
            return *wl / abs(sl) <= *wr / abs(sr);
    }
    if (!wl) return !wr;
    if (!wr) return true;
    return *wl <= *wr;
}

inline int rest_count(const expr_ptr& side, const lin_ctx& ctx) {
    std::map<var_id, int> in_side;
    count_occurrences(side, in_side);
    int rest = 0;
    for (const auto& [v, n] : in_side) rest += ctx.totals.at(v) - n;
    return rest;
}

// Strategy decision for one multiplication node with both sides linearized.
inline bool intervalize_left(const expr_ptr& le, const expr_ptr& re, const interval& il,
                             const interval& ir, const lin_ctx& ctx) {
    auto by_simplification = [&]() {
        int rl = rest_count(le, ctx);
        int rr = rest_count(re, ctx);
        if (rl != rr) return rl < rr;
        return narrower_left(il, ir, false);
    };
    switch (ctx.strat.kind) {
        case mult_kind::interval_size: return narrower_left(il, ir, ctx.strat.relative);
        case mult_kind::homogeneity:
            if (ctx.have_homog) {
                auto subset = [&](const expr_ptr& s) {
                    for (var_id v : vars_of(s))
                        if (!ctx.homog.count(v)) return false;
                    return true;
                };
                bool ls = subset(le), rs = subset(re);
                if (ls != rs) return ls;
                if (ls && rs) return true;
            }
            return by_simplification();
        default: return by_simplification();
    }
}

inline void push_form(std::vector<affine_form>& out, affine_form f) {
    if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(std::move(f));
    if (out.size() > all_cases_cap)
        throw std::runtime_error("linearization exceeded the all-cases form cap");
}

// A sub-form whose range is empty denotes an expression with no value at
// all (only possible in integer mode, e.g. a fractional constant); any
// enclosure is then vacuously sound, so degrade to an unbounded constant.
inline affine_form top_form() { return affine_form(interval::top()); }

inline std::vector<affine_form> lin(const expr_ptr& e, const lin_ctx& ctx) {
    std::vector<affine_form> out;
    switch (e->node_kind()) {
        case expr::kind::var:
            out.push_back(affine_form::from_var(e->var_ref()));
            break;
        case expr::kind::constant:
            out.push_back(affine_form(e->constant_value()));
            break;
        default: {
            std::vector<affine_form> ls = lin(e->lhs(), ctx);
            std::vector<affine_form> rs = lin(e->rhs(), ctx);
            switch (e->op()) {
                case binop::add:
                case binop::sub:
                    for (const affine_form& l : ls)
                        for (const affine_form& r : rs)
                            push_form(out, e->op() == binop::add ? aadd(l, r) : asub(l, r));
                    break;
                case binop::div:
                    for (const affine_form& l : ls) {
                        for (const affine_form& r : rs) {
                            interval d = intervalize(r, ctx.bounds, ctx.mode);
                            if (d.is_empty())
                                push_form(out, top_form());
                            else
                                push_form(out, adivc(l, d, ctx.mode, ctx.refine_trunc));
                        }
                    }
                    break;
                default:
                    for (const affine_form& l : ls) {
                        for (const affine_form& r : rs) {
                            interval il = intervalize(l, ctx.bounds, ctx.mode);
                            interval ir = intervalize(r, ctx.bounds, ctx.mode);
                            if (il.is_empty() || ir.is_empty()) {
                                push_form(out, top_form());
                                continue;
                            }
                            // A side already reduced to a constant is the one
                            // intervalized; no strategy consulted.
                            if (l.is_constant()) {
                                push_form(out, ascale(il, r, ctx.mode));
                            } else if (r.is_constant()) {
                                push_form(out, ascale(ir, l, ctx.mode));
                            } else if (ctx.strat.kind == mult_kind::all_cases) {
                                push_form(out, ascale(il, r, ctx.mode));
                                push_form(out, ascale(ir, l, ctx.mode));
                            } else if (intervalize_left(e->lhs(), e->rhs(), il, ir, ctx)) {
                                push_form(out, ascale(il, r, ctx.mode));
                            } else {
                                push_form(out, ascale(ir, l, ctx.mode));
                            }
                        }
                    }
            }
        }
    }
    return out;
}

// Smallest variable subset (cardinality first, then lexicographic by index)
// whose intervalization makes the expression homogeneous.
inline std::optional<std::set<var_id>> homogeneity_subset(const expr_ptr& e) {
    std::set<var_id> vs = vars_of(e);
    if (vs.size() > 16) return std::nullopt;
    std::vector<var_id> order(vs.begin(), vs.end());
    std::uint32_t n = static_cast<std::uint32_t>(order.size());
    std::vector<std::uint32_t> masks(1u << n);
    for (std::uint32_t m = 0; m < masks.size(); ++m) masks[m] = m;
    auto indices = [&](std::uint32_t m) {
        std::vector<std::uint32_t> ix;
        for (std::uint32_t b = 0; b < n; ++b)
            if (m & (1u << b)) ix.push_back(order[b].index);
        return ix;
    };
    std::sort(masks.begin(), masks.end(), [&](std::uint32_t a, std::uint32_t b) {
        int pa = __builtin_popcount(a), pb = __builtin_popcount(b);
        if (pa != pb) return pa < pb;
        return indices(a) < indices(b);
    });
    for (std::uint32_t m : masks) {
        std::set<var_id> subset;
        for (std::uint32_t b = 0; b < n; ++b)
            if (m & (1u << b)) subset.insert(order[b]);
        if (expr_degree(e, subset)) return subset;
    }
    return std::nullopt;
}

}  // namespace detail

// Linearizes e under the given variable bounds. Deterministic strategies
// return exactly one form; all_cases may return several (capped), each a
// sound over-approximation. refine_trunc selects the truncation-slack
// handling of integer division (vs outward coefficient rounding).
inline std::vector<affine_form> linearize(const expr_ptr& e, const var_bounds& bounds,
                                          const mult_strategy& strat, semantics_mode mode,
                                          bool refine_trunc = true) {
    detail::lin_ctx ctx{bounds, strat, mode, refine_trunc, {}, false, {}};
    detail::count_occurrences(e, ctx.totals);
    if (strat.kind == mult_kind::homogeneity) {
        if (auto h = detail::homogeneity_subset(e)) {
            ctx.have_homog = true;
            ctx.homog = std::move(*h);
        }
    }
    return detail::lin(e, ctx);
}

}  // namespace linea
