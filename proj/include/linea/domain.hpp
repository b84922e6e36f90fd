// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The interval abstract domain over program environments: bottom or one
// interval per variable. Transfer functions come in two flavors, raw
// interval evaluation of the expression tree and assignment/test over a
// linearized affine form. Tests refine variable bounds by isolating each
// variable with an invertible coefficient; the raw test only checks
// feasibility (refinement is the affine path's job, and linear tests
// linearize to themselves).

#include <linea/affine.hpp>
#include <linea/interval.hpp>
#include <linea/lang.hpp>

#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace linea {

// Bottom, or a total non-empty interval per variable. Any empty entry
// collapses the whole environment to bottom.
class interval_env {
public:
    interval_env() = default;

    static interval_env bottom() { return interval_env(); }
    static interval_env top(std::uint32_t var_count) {
        interval_env r;
        r.vals_.emplace(var_count, interval::top());
        return r;
    }
    static interval_env make(std::vector<interval> vals) {
        for (const interval& i : vals)
            if (i.is_empty()) return bottom();
        interval_env r;
        r.vals_ = std::move(vals);
        return r;
    }

    bool is_bottom() const { return !vals_.has_value(); }
    std::uint32_t var_count() const {
        assert(!is_bottom());
        return static_cast<std::uint32_t>(vals_->size());
    }
    const interval& get(var_id v) const {
        assert(!is_bottom());
        return vals_->at(v.index);
    }
    const var_bounds& bounds() const {
        assert(!is_bottom());
        return *vals_;
    }

    // Setting an empty interval collapses to bottom.
    void set(var_id v, interval i) {
        assert(!is_bottom());
        if (i.is_empty()) {
            vals_.reset();
            return;
        }
        vals_->at(v.index) = std::move(i);
    }

    friend bool operator==(const interval_env& a, const interval_env& b) {
        return a.vals_ == b.vals_;
    }
    friend bool operator!=(const interval_env& a, const interval_env& b) { return !(a == b); }

private:
    std::optional<std::vector<interval>> vals_;
};

namespace detail {
inline void check_same_vars(const interval_env& a, const interval_env& b) {
    if (!a.is_bottom() && !b.is_bottom() && a.var_count() != b.var_count())
        throw std::invalid_argument("interval environments over different variable sets");
}
}  // namespace detail

inline bool env_leq(const interval_env& a, const interval_env& b) {
    detail::check_same_vars(a, b);
    if (a.is_bottom()) return true;
    if (b.is_bottom()) return false;
    for (std::uint32_t i = 0; i < a.var_count(); ++i)
        if (!a.get(var_id{i}).leq(b.get(var_id{i}))) return false;
    return true;
}

inline interval_env env_join(const interval_env& a, const interval_env& b) {
    detail::check_same_vars(a, b);
    if (a.is_bottom()) return b;
    if (b.is_bottom()) return a;
    std::vector<interval> vals;
    vals.reserve(a.var_count());
    for (std::uint32_t i = 0; i < a.var_count(); ++i)
        vals.push_back(ijoin(a.get(var_id{i}), b.get(var_id{i})));
    return interval_env::make(std::move(vals));
}

inline interval_env env_meet(const interval_env& a, const interval_env& b) {
    detail::check_same_vars(a, b);
    if (a.is_bottom() || b.is_bottom()) return interval_env::bottom();
    std::vector<interval> vals;
    vals.reserve(a.var_count());
    for (std::uint32_t i = 0; i < a.var_count(); ++i)
        vals.push_back(imeet(a.get(var_id{i}), b.get(var_id{i})));
    return interval_env::make(std::move(vals));
}

inline interval_env env_widen(const interval_env& a, const interval_env& b,
                              const std::vector<rational>& thresholds) {
    detail::check_same_vars(a, b);
    if (a.is_bottom()) return b;
    if (b.is_bottom()) return a;
    std::vector<interval> vals;
    vals.reserve(a.var_count());
    for (std::uint32_t i = 0; i < a.var_count(); ++i)
        vals.push_back(iwiden(a.get(var_id{i}), b.get(var_id{i}), thresholds));
    return interval_env::make(std::move(vals));
}

// Bottom-up interval evaluation of a raw expression tree. May return the
// empty interval (a constant holding no representable value, in integer
// mode).
inline interval eval_expr(const expr_ptr& e, const interval_env& r, semantics_mode mode) {
    assert(!r.is_bottom());
    switch (e->node_kind()) {
        case expr::kind::var: return r.get(e->var_ref());
        case expr::kind::constant: return tighten(e->constant_value(), mode);
        default:
            return iarith(e->op(), eval_expr(e->lhs(), r, mode), eval_expr(e->rhs(), r, mode),
                          mode);
    }
}

inline interval_env assign_affine(const interval_env& r, var_id v, const affine_form& l,
                                  semantics_mode mode) {
    if (r.is_bottom()) return r;
    interval_env out = r;
    out.set(v, intervalize(l, r.bounds(), mode));
    return out;
}

inline interval_env assign_expr(const interval_env& r, var_id v, const expr_ptr& e,
                                semantics_mode mode) {
    if (r.is_bottom()) return r;
    interval_env out = r;
    out.set(v, eval_expr(e, r, mode));
    return out;
}

namespace detail {

// One ">= 0" constraint over an affine form; strict tracks a residual
// strict inequality that closed interval bounds cannot express but
// infeasibility detection can still use.
struct sign_constraint {
    affine_form form;
    bool strict = false;
};

// Normalizes a comparison against 0 into >= 0 constraints. Integer mode
// absorbs strictness by shifting one unit; rational mode keeps the bound
// closed and only remembers strictness for the feasibility check.
inline std::vector<sign_constraint> to_ge_constraints(const affine_form& l, cmp_op cmp,
                                                      semantics_mode mode) {
    auto negated = [&]() { return ascale(interval::singleton(rational(-1)), l, mode); };
    auto minus_one = [&](affine_form f) {
        f.set_constant(isub(f.constant_part(), interval::singleton(rational(1))));
        return f;
    };
    bool integers = mode == semantics_mode::integers;
    switch (cmp) {
        case cmp_op::ge: return {{l, false}};
        case cmp_op::le: return {{negated(), false}};
        case cmp_op::gt:
            if (integers) return {{minus_one(l), false}};
            return {{l, true}};
        case cmp_op::lt:
            if (integers) return {{minus_one(negated()), false}};
            return {{negated(), true}};
        case cmp_op::eq: return {{l, false}, {negated(), false}};
        default: return {};  // != handled by the caller
    }
}

}  // namespace detail

// Refines r under the test "l cmp 0". For every variable whose coefficient
// excludes 0, the form is solved for that variable and the quotient bound
// applied; rounds iterate to a small cap since refinements feed each other.
inline interval_env test_affine(const interval_env& r, const affine_form& l, cmp_op cmp,
                                semantics_mode mode) {
    if (r.is_bottom()) return r;
    interval_env cur = r;

    if (cmp == cmp_op::ne) {
        // No refinement (intervals cannot be punctured); infeasible only
        // when the form is constantly zero.
        if (intervalize(l, cur.bounds(), semantics_mode::rationals) ==
            interval::singleton(rational(0)))
            return interval_env::bottom();
        return cur;
    }

    auto constraints = detail::to_ge_constraints(l, cmp, mode);
    const int round_cap = 5;
    for (int round = 0; round < round_cap; ++round) {
        bool changed = false;
        for (const auto& c : constraints) {
            // Feasibility of "form >= 0" (or > 0 when strict) against the
            // current bounds, over the rationals.
            interval whole = intervalize(c.form, cur.bounds(), semantics_mode::rationals);
            if (whole.is_empty()) return interval_env::bottom();
            if (whole.hi() < bound(rational(0)) ||
                (c.strict && whole.hi() == bound(rational(0))))
                return interval_env::bottom();

            for (const auto& [v, coeff] : c.form.terms()) {
                if (icontains_zero(coeff)) continue;
                // rest = form without v's term; then coeff*V >= -rest.
                affine_form rest = c.form;
                rest.set_term(v, interval::singleton(rational(0)));
                interval rest_val = intervalize(rest, cur.bounds(), semantics_mode::rationals);
                interval q = idiv(ineg(rest_val), coeff, semantics_mode::rationals);
                bool positive = coeff.lo() > bound(rational(0));
                interval refinement = positive ? interval(q.lo(), bound::plus_inf())
                                              : interval(bound::minus_inf(), q.hi());
                refinement = tighten(refinement, mode);
                interval next = imeet(cur.get(v), refinement);
                if (next != cur.get(v)) {
                    changed = true;
                    cur.set(v, next);
                    if (cur.is_bottom()) return cur;
                }
            }
        }
        if (!changed) break;
    }
    return cur;
}

// Raw test: feasibility check only, no bound refinement.
inline interval_env test_expr(const interval_env& r, const expr_ptr& e, cmp_op cmp,
                              semantics_mode mode) {
    if (r.is_bottom()) return r;
    interval q = eval_expr(e, r, mode);
    if (q.is_empty()) return interval_env::bottom();
    bound zero{rational(0)};
    bool feasible = false;
    switch (cmp) {
        case cmp_op::eq: feasible = q.contains(rational(0)); break;
        case cmp_op::ne: feasible = q != interval::singleton(rational(0)); break;
        case cmp_op::lt: feasible = q.lo() < zero; break;
        case cmp_op::le: feasible = q.lo() <= zero; break;
        case cmp_op::ge: feasible = q.hi() >= zero; break;
        default: feasible = q.hi() > zero; break;
    }
    return feasible ? r : interval_env::bottom();
}

}  // namespace linea
