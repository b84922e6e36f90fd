// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Interval affine forms i0 + sum_k ik*Vk with interval coefficients, the
// symbolic counterparts of +,-,*,/ on them, intervalization (evaluating a
// form to one interval under variable bounds) and quasi-linearization
// (squeezing interval coefficients to their midpoint, pushing the slack into
// the constant). Addition and subtraction are exact on form semantics;
// scaling and division are exact over the rationals and sound over the
// integers, where division optionally carries a truncation slack instead of
// rounding coefficients outward.

#include <linea/interval.hpp>
#include <linea/lang.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace linea {

inline bool is_zero(const interval& i) {
    return !i.is_empty() && i.lo() == bound(rational(0)) && i.hi() == bound(rational(0));
}

// Bounds for every program variable, indexed densely.
using var_bounds = std::vector<interval>;

// Canonical form: the term map never stores a [0,0] coefficient, and no
// stored interval is empty.
class affine_form {
public:
    affine_form() : constant_(interval::singleton(rational(0))) {}
    explicit affine_form(interval constant) : constant_(std::move(constant)) {
        assert(!constant_.is_empty());
    }
    static affine_form from_var(var_id v) {
        affine_form f;
        f.set_term(v, interval::singleton(rational(1)));
        return f;
    }

    const interval& constant_part() const { return constant_; }
    void set_constant(interval c) {
        assert(!c.is_empty());
        constant_ = std::move(c);
    }

    const std::map<var_id, interval>& terms() const { return terms_; }
    interval term(var_id v) const {
        auto it = terms_.find(v);
        return it == terms_.end() ? interval::singleton(rational(0)) : it->second;
    }
    void set_term(var_id v, interval c) {
        assert(!c.is_empty());
        if (is_zero(c))
            terms_.erase(v);
        else
            terms_.insert_or_assign(v, std::move(c));
    }

    bool is_constant() const { return terms_.empty(); }

    friend bool operator==(const affine_form& a, const affine_form& b) {
        return a.constant_ == b.constant_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const affine_form& a, const affine_form& b) { return !(a == b); }

    std::string str(const std::vector<std::string>& names) const {
        std::string out = constant_.str();
        for (const auto& [v, c] : terms_) out += " + " + c.str() + "*" + names.at(v.index);
        return out;
    }

private:
    interval constant_;
    std::map<var_id, interval> terms_;
};

inline affine_form aadd(const affine_form& l1, const affine_form& l2) {
    affine_form r(iadd(l1.constant_part(), l2.constant_part()));
    for (const auto& [v, c] : l1.terms()) r.set_term(v, c);
    for (const auto& [v, c] : l2.terms()) r.set_term(v, iadd(r.term(v), c));
    return r;
}

inline affine_form asub(const affine_form& l1, const affine_form& l2) {
    affine_form r(isub(l1.constant_part(), l2.constant_part()));
    for (const auto& [v, c] : l1.terms()) r.set_term(v, c);
    for (const auto& [v, c] : l2.terms()) r.set_term(v, isub(r.term(v), c));
    return r;
}

// Coefficient-wise product. Exact over the rationals; over the integers the
// interval products already over-approximate, so no extra rounding is done
// (rational coefficients are legitimate in either mode).
inline affine_form ascale(const interval& i, const affine_form& l, semantics_mode mode) {
    assert(!i.is_empty());
    (void)mode;
    affine_form r(imul(i, l.constant_part()));
    for (const auto& [v, c] : l.terms()) r.set_term(v, imul(i, c));
    return r;
}

// Coefficient-wise quotient. A divisor straddling 0 degrades every stored
// interval to top. In integer mode the quotient over rationals misses the
// truncation of / ; either add the slack [-1+x,1-x], x = 1/max(|a|,|b|)
// (refine_trunc, requires min(|a|,|b|) >= 1) or round each coefficient
// outward. The slack must cover the divisor with the LARGEST magnitude: a
// quotient n/d truncates by at most 1 - 1/|d|, which grows with |d|.
inline affine_form adivc(const affine_form& l, const interval& i, semantics_mode mode,
                         bool refine_trunc) {
    assert(!i.is_empty());
    if (icontains_zero(i)) {
        affine_form r{interval::top()};
        for (const auto& [v, c] : l.terms()) {
            (void)c;
            r.set_term(v, interval::top());
        }
        return r;
    }
    affine_form r(idiv(l.constant_part(), i, semantics_mode::rationals));
    for (const auto& [v, c] : l.terms()) r.set_term(v, idiv(c, i, semantics_mode::rationals));
    if (mode != semantics_mode::integers) return r;

    // 0 lies outside i, so the bound nearer zero is finite and carries
    // min(|a|,|b|); the far bound may be infinite, driving x to 0.
    rational near_m, far_m;
    bool have_m = false, far_finite = true;
    for (const bound& b : {i.lo(), i.hi()}) {
        if (!b.is_finite()) {
            far_finite = false;
            continue;
        }
        rational a = b.value() < 0 ? rational(-b.value()) : b.value();
        if (!have_m) {
            near_m = far_m = a;
            have_m = true;
        } else {
            if (a < near_m) near_m = a;
            if (far_m < a) far_m = a;
        }
    }
    if (refine_trunc && have_m && near_m >= 1) {
        rational x = far_finite ? rational(1) / far_m : rational(0);
        interval slack(bound(rational(x - 1)), bound(rational(1 - x)));
        r.set_constant(iadd(r.constant_part(), slack));
        return r;
    }
    // Outward rounding of every stored interval to integer bounds.
    auto outward = [](const interval& c) { return interval(c.lo().floor(), c.hi().ceil()); };
    affine_form q(outward(r.constant_part()));
    for (const auto& [v, c] : r.terms()) q.set_term(v, outward(c));
    return q;
}

// Evaluates the form to a single interval under per-variable bounds.
// Arithmetic runs over the rationals; in integer mode the final interval is
// tightened to its integer part (the concrete values being enclosed are
// integers, so this stays sound).
inline interval intervalize(const affine_form& l, const var_bounds& bounds, semantics_mode mode) {
    interval acc = l.constant_part();
    for (const auto& [v, c] : l.terms()) acc = iadd(acc, imul(c, bounds.at(v.index)));
    return tighten(acc, mode);
}

// Replaces every interval coefficient [a,b] by its midpoint and adds the
// slack [(a-b)/2,(b-a)/2]*pi_k to the constant. Rejects infinite coefficient
// bounds; an unbounded pi_k under a non-singleton coefficient degrades the
// constant to top.
inline affine_form quasi_linearize(const affine_form& l, const var_bounds& bounds) {
    affine_form r(l.constant_part());
    interval acc = l.constant_part();
    for (const auto& [v, c] : l.terms()) {
        if (!c.lo().is_finite() || !c.hi().is_finite())
            throw std::domain_error("quasi-linearization requires finite coefficients");
        const rational& a = c.lo().value();
        const rational& b = c.hi().value();
        rational mid = (a + b) / 2;
        r.set_term(v, interval::singleton(mid));
        if (a != b) {
            interval slack(bound(rational((a - b) / 2)), bound(rational((b - a) / 2)));
            acc = iadd(acc, imul(slack, bounds.at(v.index)));
        }
    }
    r.set_constant(acc);
    return r;
}

// Form value under a rational valuation, as an interval.
inline interval aeval(const affine_form& l, const std::vector<rational>& rho) {
    interval acc = l.constant_part();
    for (const auto& [v, c] : l.terms())
        acc = iadd(acc, imul(c, interval::singleton(rho.at(v.index))));
    return acc;
}

}  // namespace linea
