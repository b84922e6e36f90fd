// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Concrete collecting semantics for integer programs, by exhaustive
// enumeration. This is the ground truth the analyzer is tested against:
// expressions evaluate to value sets (interval constants draw a fresh value
// per evaluation, division skips zero denominators and truncates toward
// zero), and collect() runs the whole CFG to a least fixpoint from a finite
// initial box. Only practical for small state spaces; a cap guards runaway
// instances.

#include <linea/lang.hpp>

#include <map>
#include <set>
#include <stdexcept>
#include <vector>

namespace linea {

// Total environment, indexed by variable.
using concrete_env = std::vector<mpz_class>;

// Per-variable inclusive integer ranges for the entry states.
struct concrete_box {
    std::vector<std::pair<mpz_class, mpz_class>> ranges;
};

inline std::set<mpz_class> concrete_eval(const expr_ptr& e, const concrete_env& rho) {
    std::set<mpz_class> out;
    switch (e->node_kind()) {
        case expr::kind::var:
            out.insert(rho.at(e->var_ref().index));
            break;
        case expr::kind::constant: {
            const interval& c = e->constant_value();
            if (c.is_empty()) break;
            if (!c.lo().is_finite() || !c.hi().is_finite())
                throw std::domain_error("cannot enumerate an unbounded constant");
            mpz_class lo = rat_ceil(c.lo().value()).get_num();
            mpz_class hi = rat_floor(c.hi().value()).get_num();
            for (mpz_class v = lo; v <= hi; ++v) out.insert(v);
            break;
        }
        default: {
            std::set<mpz_class> ls = concrete_eval(e->lhs(), rho);
            std::set<mpz_class> rs = concrete_eval(e->rhs(), rho);
            for (const mpz_class& x : ls) {
                for (const mpz_class& y : rs) {
                    switch (e->op()) {
                        case binop::add: out.insert(x + y); break;
                        case binop::sub: out.insert(x - y); break;
                        case binop::mul: out.insert(x * y); break;
                        default:
                            if (y != 0) {
                                mpz_class q;
                                mpz_tdiv_q(q.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
                                out.insert(q);
                            }
                    }
                }
            }
        }
    }
    return out;
}

inline bool cmp_holds(cmp_op c, const mpz_class& v) {
    switch (c) {
        case cmp_op::eq: return v == 0;
        case cmp_op::ne: return v != 0;
        case cmp_op::lt: return v < 0;
        case cmp_op::le: return v <= 0;
        case cmp_op::ge: return v >= 0;
        default: return v > 0;
    }
}

// A test keeps an environment when some drawn value satisfies the comparison.
inline bool concrete_test(const instr& i, const concrete_env& rho) {
    for (const mpz_class& v : concrete_eval(i.arg(), rho))
        if (cmp_holds(i.cmp(), v)) return true;
    return false;
}

// Least fixpoint of the collecting semantics by a worklist over individual
// states. Returns, per point, the set of reachable environments. Throws when
// the total number of stored states exceeds state_cap.
inline std::vector<std::set<concrete_env>> collect(const program& p, const concrete_box& box,
                                                   std::size_t state_cap) {
    if (box.ranges.size() != p.var_count())
        throw std::invalid_argument("initial box arity does not match the program");
    std::vector<std::set<concrete_env>> states(p.point_count());
    std::vector<std::pair<point_id, concrete_env>> work;
    std::size_t total = 0;

    auto push = [&](point_id l, concrete_env rho) {
        auto [it, fresh] = states[l].insert(std::move(rho));
        if (!fresh) return;
        if (++total > state_cap) throw std::runtime_error("concrete state cap exceeded");
        work.emplace_back(l, *it);
    };

    // Entry: every environment of the box.
    concrete_env rho(p.var_count());
    for (std::uint32_t i = 0; i < p.var_count(); ++i) {
        if (box.ranges[i].first > box.ranges[i].second)
            return states;  // empty box, nothing reachable
        rho[i] = box.ranges[i].first;
    }
    for (;;) {
        push(p.entry(), rho);
        std::uint32_t i = 0;
        for (; i < p.var_count(); ++i) {
            if (rho[i] < box.ranges[i].second) {
                ++rho[i];
                break;
            }
            rho[i] = box.ranges[i].first;
        }
        if (i == p.var_count()) break;
    }

    while (!work.empty()) {
        auto [l, cur] = std::move(work.back());
        work.pop_back();
        for (const arc& a : p.arcs()) {
            if (a.src != l) continue;
            if (a.ins.is_assign()) {
                for (const mpz_class& v : concrete_eval(a.ins.arg(), cur)) {
                    concrete_env next = cur;
                    next[a.ins.target().index] = v;
                    push(a.dst, std::move(next));
                }
            } else if (concrete_test(a.ins, cur)) {
                push(a.dst, cur);
            }
        }
    }
    return states;
}

// Projection helper for tests: all values of one variable at one point.
inline std::set<mpz_class> collect_values(const std::vector<std::set<concrete_env>>& states, point_id l,
                                          var_id v) {
    std::set<mpz_class> out;
    for (const concrete_env& rho : states.at(l)) out.insert(rho.at(v.index));
    return out;
}

}  // namespace linea
