// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Intervals over extended rationals. This is the base numerical abstraction:
// a value is either the empty interval (unreachable) or [lo,hi] with
// lo in {-oo} u Q, hi in Q u {+oo}, lo <= hi. Arithmetic follows the classic
// rules: bound products use the 0 * oo = 0 convention, division by an
// interval containing 0 degrades to [-oo,+oo], and in integer mode division
// bounds are rounded outward. Widening jumps to a supplied threshold ladder
// before giving up to +-oo.

#include <linea/rational.hpp>

#include <cassert>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace linea {

enum class semantics_mode { integers, rationals };

// -oo | finite rational | +oo, totally ordered.
class bound {
public:
    bound() : sign_(0), v_(0) {}
    explicit bound(rational v) : sign_(0), v_(std::move(v)) {}
    static bound minus_inf() { return bound(-1); }
    static bound plus_inf() { return bound(+1); }

    bool is_finite() const { return sign_ == 0; }
    bool is_minus_inf() const { return sign_ < 0; }
    bool is_plus_inf() const { return sign_ > 0; }
    const rational& value() const {
        assert(is_finite());
        return v_;
    }

    friend bool operator==(const bound& a, const bound& b) {
        if (a.sign_ != b.sign_) return false;
        return a.sign_ != 0 || a.v_ == b.v_;
    }
    friend bool operator!=(const bound& a, const bound& b) { return !(a == b); }
    friend bool operator<(const bound& a, const bound& b) {
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_;
        return a.sign_ == 0 && a.v_ < b.v_;
    }
    friend bool operator<=(const bound& a, const bound& b) { return !(b < a); }
    friend bool operator>(const bound& a, const bound& b) { return b < a; }
    friend bool operator>=(const bound& a, const bound& b) { return !(a < b); }

    bound operator-() const {
        if (sign_ != 0) return bound(-sign_);
        return bound(rational(-v_));
    }

    // Addition never sees -oo + +oo in interval arithmetic (lows add to lows,
    // highs to highs); assert it away.
    static bound add(const bound& a, const bound& b) {
        if (a.is_finite() && b.is_finite()) return bound(rational(a.v_ + b.v_));
        if (!a.is_finite() && !b.is_finite()) {
            assert(a.sign_ == b.sign_);
            return a;
        }
        return a.is_finite() ? b : a;
    }

    // 0 * +-oo = 0.
    static bound mul(const bound& a, const bound& b) {
        if ((a.is_finite() && a.v_ == 0) || (b.is_finite() && b.v_ == 0)) return bound(rational(0));
        if (a.is_finite() && b.is_finite()) return bound(rational(a.v_ * b.v_));
        return bound(a.sgn() * b.sgn());
    }

    // Pre: b is not zero. Limit conventions: q / +-oo = 0, +-oo / q keeps the
    // sign product, +-oo / +-oo likewise.
    static bound div(const bound& a, const bound& b) {
        assert(!(b.is_finite() && b.v_ == 0));
        if (a.is_finite() && a.v_ == 0) return bound(rational(0));
        if (a.is_finite()) {
            if (!b.is_finite()) return bound(rational(0));
            return bound(rational(a.v_ / b.v_));
        }
        return bound(a.sgn() * b.sgn());
    }

    static bound min(const bound& a, const bound& b) { return a < b ? a : b; }
    static bound max(const bound& a, const bound& b) { return a < b ? b : a; }

    bound floor() const { return is_finite() ? bound(rat_floor(v_)) : *this; }
    bound ceil() const { return is_finite() ? bound(rat_ceil(v_)) : *this; }

private:
    explicit bound(int s) : sign_(s), v_(0) {}
    int sgn() const {
        if (sign_ != 0) return sign_;
        return v_ > 0 ? 1 : v_ < 0 ? -1 : 0;
    }
    int sign_;  // -1: -oo, 0: finite, +1: +oo
    rational v_;
};

class interval {
public:
    // Default is top; use empty() for bottom.
    interval() : empty_(false), lo_(bound::minus_inf()), hi_(bound::plus_inf()) {}
    interval(bound lo, bound hi) : empty_(false), lo_(std::move(lo)), hi_(std::move(hi)) {
        assert(!lo_.is_plus_inf() && !hi_.is_minus_inf() && lo_ <= hi_);
    }

    static interval empty() {
        interval r;
        r.empty_ = true;
        return r;
    }
    static interval top() { return interval(); }
    static interval singleton(const rational& v) { return interval(bound(v), bound(v)); }

    // Mode-aware constructor: integer mode keeps only the integers of [lo,hi],
    // so the bounds tighten inward and the result may be empty.
    static interval make(const bound& lo, const bound& hi, semantics_mode mode) {
        bound l = lo, h = hi;
        if (mode == semantics_mode::integers) {
            l = l.ceil();
            h = h.floor();
        }
        if (l.is_plus_inf() || h.is_minus_inf() || h < l) return empty();
        return interval(l, h);
    }

    bool is_empty() const { return empty_; }
    const bound& lo() const {
        assert(!empty_);
        return lo_;
    }
    const bound& hi() const {
        assert(!empty_);
        return hi_;
    }

    bool contains(const rational& v) const {
        return !empty_ && lo_ <= bound(v) && bound(v) <= hi_;
    }

    // Inclusion order of the lattice.
    bool leq(const interval& o) const {
        if (empty_) return true;
        if (o.empty_) return false;
        return o.lo_ <= lo_ && hi_ <= o.hi_;
    }

    friend bool operator==(const interval& a, const interval& b) {
        if (a.empty_ || b.empty_) return a.empty_ == b.empty_;
        return a.lo_ == b.lo_ && a.hi_ == b.hi_;
    }
    friend bool operator!=(const interval& a, const interval& b) { return !(a == b); }

    // Finite width hi - lo, or nullopt when unbounded. Pre: not empty.
    std::optional<rational> finite_width() const {
        assert(!empty_);
        if (!lo_.is_finite() || !hi_.is_finite()) return std::nullopt;
        return rational(hi_.value() - lo_.value());
    }

    std::string str() const {
        if (empty_) return "empty";
        std::string l = lo_.is_minus_inf() ? "-oo" : rat_str_decimal(lo_.value());
        std::string h = hi_.is_plus_inf() ? "+oo" : rat_str_decimal(hi_.value());
        return "[" + l + "," + h + "]";
    }

    // Parses "[a,b]" with bounds as numbers, "-oo", "+oo" or "oo".
    static std::optional<interval> parse(std::string_view s) {
        auto strip = [](std::string_view v) {
            while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
            while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
            return v;
        };
        s = strip(s);
        if (s.size() < 2 || s.front() != '[' || s.back() != ']') return std::nullopt;
        s = s.substr(1, s.size() - 2);
        auto comma = s.find(',');
        if (comma == std::string_view::npos) return std::nullopt;
        auto pb = [&](std::string_view t, bool low) -> std::optional<bound> {
            t = strip(t);
            if (t == "-oo") return bound::minus_inf();
            if (t == "+oo" || t == "oo") return bound::plus_inf();
            auto q = rat_parse(t);
            if (!q) return std::nullopt;
            (void)low;
            return bound(*q);
        };
        auto lo = pb(s.substr(0, comma), true);
        auto hi = pb(s.substr(comma + 1), false);
        if (!lo || !hi) return std::nullopt;
        if (lo->is_plus_inf() || hi->is_minus_inf() || *hi < *lo) return std::nullopt;
        return interval(*lo, *hi);
    }

private:
    bool empty_;
    bound lo_, hi_;
};

inline interval tighten(const interval& x, semantics_mode mode) {
    if (x.is_empty() || mode == semantics_mode::rationals) return x;
    return interval::make(x.lo(), x.hi(), mode);
}

inline interval ijoin(const interval& a, const interval& b) {
    if (a.is_empty()) return b;
    if (b.is_empty()) return a;
    return interval(bound::min(a.lo(), b.lo()), bound::max(a.hi(), b.hi()));
}

inline interval imeet(const interval& a, const interval& b) {
    if (a.is_empty() || b.is_empty()) return interval::empty();
    bound lo = bound::max(a.lo(), b.lo());
    bound hi = bound::min(a.hi(), b.hi());
    if (hi < lo) return interval::empty();
    return interval(lo, hi);
}

// Widening with a sorted threshold ladder: an unstable bound jumps to the
// nearest enclosing threshold, or to +-oo when the ladder is exhausted.
inline interval iwiden(const interval& x, const interval& y, const std::vector<rational>& thresholds) {
    if (x.is_empty()) return y;
    if (y.is_empty()) return x;
    bound lo = x.lo(), hi = x.hi();
    if (y.lo() < x.lo()) {
        lo = bound::minus_inf();
        for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
            if (bound(*it) <= y.lo()) {
                lo = bound(*it);
                break;
            }
        }
    }
    if (y.hi() > x.hi()) {
        hi = bound::plus_inf();
        for (const rational& t : thresholds) {
            if (bound(t) >= y.hi()) {
                hi = bound(t);
                break;
            }
        }
    }
    return interval(lo, hi);
}

inline interval iadd(const interval& a, const interval& b) {
    if (a.is_empty() || b.is_empty()) return interval::empty();
    return interval(bound::add(a.lo(), b.lo()), bound::add(a.hi(), b.hi()));
}

inline interval isub(const interval& a, const interval& b) {
    if (a.is_empty() || b.is_empty()) return interval::empty();
    return interval(bound::add(a.lo(), -b.hi()), bound::add(a.hi(), -b.lo()));
}

inline interval ineg(const interval& a) {
    if (a.is_empty()) return a;
    return interval(-a.hi(), -a.lo());
}

inline interval imul(const interval& a, const interval& b) {
    if (a.is_empty() || b.is_empty()) return interval::empty();
    bound p1 = bound::mul(a.lo(), b.lo());
    bound p2 = bound::mul(a.lo(), b.hi());
    bound p3 = bound::mul(a.hi(), b.lo());
    bound p4 = bound::mul(a.hi(), b.hi());
    bound lo = bound::min(bound::min(p1, p2), bound::min(p3, p4));
    bound hi = bound::max(bound::max(p1, p2), bound::max(p3, p4));
    return interval(lo, hi);
}

inline bool icontains_zero(const interval& a) {
    return !a.is_empty() && a.lo() <= bound(rational(0)) && bound(rational(0)) <= a.hi();
}

inline interval idiv(const interval& a, const interval& b, semantics_mode mode) {
    if (a.is_empty() || b.is_empty()) return interval::empty();
    if (icontains_zero(b)) return interval::top();
    bound q1 = bound::div(a.lo(), b.lo());
    bound q2 = bound::div(a.lo(), b.hi());
    bound q3 = bound::div(a.hi(), b.lo());
    bound q4 = bound::div(a.hi(), b.hi());
    bound lo = bound::min(bound::min(q1, q2), bound::min(q3, q4));
    bound hi = bound::max(bound::max(q1, q2), bound::max(q3, q4));
    if (mode == semantics_mode::integers) {
        lo = lo.floor();
        hi = hi.ceil();
    }
    return interval(lo, hi);
}

inline bool icontains(const interval& a, const rational& v) { return a.contains(v); }

}  // namespace linea
