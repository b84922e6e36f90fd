// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// The product of the interval environment and the symbolic constant map,
// the combined transfer function, and the fixpoint engine. The numeric leg
// of a transfer rewrites the expression through the substitution strategy,
// linearizes it, and applies the affine transfer; the symbolic leg always
// sees the original expression. Combo mode additionally meets the raw
// interval transfer and the linearization of the unsubstituted expression.
// Reduction feeds a binding back into the intervals via the test
// "V - binding = 0".
//
// solve() runs a reverse-postorder worklist with widening at back-edge
// targets (delayed joins first, threshold ladder after), then optional
// decreasing passes. Because transfers are not monotone, a decreasing pass
// can break arc-wise absorption; a bounded repair sweep re-joins until every
// arc absorbs again, reverting to the pre-narrowing solution if it fails to
// settle.

#include <linea/domain.hpp>
#include <linea/lang.hpp>
#include <linea/linearize.hpp>
#include <linea/symbolic.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>
#include <vector>

namespace linea {

struct analysis_options {
    mult_strategy mult = mult_strategy::simplification();
    subst_strategy subst = subst_strategy::full_noconst;
    bool combo = true;
    int reduce_rounds = 0;  // at most 10
    int widening_delay = 1;
    std::vector<rational> thresholds;  // sorted ascending by solve()
    int decreasing_passes = 1;
    semantics_mode mode = semantics_mode::rationals;
    bool refine_trunc = true;  // truncation slack for integer division
};

struct abstract_state {
    interval_env num;  // bottom makes the whole state bottom
    sym_env sym;

    static abstract_state bottom(std::uint32_t var_count) {
        return {interval_env::bottom(), sym_env(var_count)};
    }
    static abstract_state top(std::uint32_t var_count) {
        return {interval_env::top(var_count), sym_env(var_count)};
    }
    bool is_bottom() const { return num.is_bottom(); }
};

// Per-binding flat order: below means equal binding or top above.
inline bool sym_leq(const sym_env& a, const sym_env& b) {
    assert(a.var_count() == b.var_count());
    for (std::uint32_t i = 0; i < a.var_count(); ++i) {
        const cexpr& bb = b.binding(var_id{i});
        if (bb && !expr_equal(a.binding(var_id{i}), bb)) return false;
    }
    return true;
}

inline bool state_leq(const abstract_state& a, const abstract_state& b) {
    if (a.is_bottom()) return true;
    if (b.is_bottom()) return false;
    return env_leq(a.num, b.num) && sym_leq(a.sym, b.sym);
}

inline abstract_state state_join(const abstract_state& a, const abstract_state& b) {
    if (a.is_bottom()) return b;
    if (b.is_bottom()) return a;
    return {env_join(a.num, b.num), sc_join(a.sym, b.sym)};
}

inline bool state_equal(const abstract_state& a, const abstract_state& b) {
    if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
    return a.num == b.num && a.sym == b.sym;
}

namespace detail {

// Meet of the affine transfer applied to each linearization result.
inline interval_env assign_forms(const interval_env& r, var_id v,
                                 const std::vector<affine_form>& forms, semantics_mode mode) {
    interval_env out = r.is_bottom() ? r : interval_env::top(r.var_count());
    bool first = true;
    for (const affine_form& f : forms) {
        interval_env one = assign_affine(r, v, f, mode);
        out = first ? one : env_meet(out, one);
        first = false;
    }
    return out;
}

inline interval_env test_forms(const interval_env& r, const std::vector<affine_form>& forms,
                               cmp_op cmp, semantics_mode mode) {
    interval_env out = r;
    for (const affine_form& f : forms) out = env_meet(out, test_affine(out, f, cmp, mode));
    return out;
}

}  // namespace detail

// Shrinks the intervals with the knowledge "V = binding(V)" for one bound
// variable. The symbolic map is unchanged; the result never grows.
inline abstract_state reduce(const abstract_state& st, var_id v, const analysis_options& opts) {
    if (st.is_bottom()) return st;
    const cexpr& c = st.sym.binding(v);
    if (!c) return st;
    expr_ptr diff = expr::binary(binop::sub, expr::var(v), c);
    auto forms = linearize(diff, st.num.bounds(), opts.mult, opts.mode, opts.refine_trunc);
    interval_env num = detail::test_forms(st.num, forms, cmp_op::eq, opts.mode);
    return {std::move(num), st.sym};
}

namespace detail {
inline abstract_state reduce_all(abstract_state st, const analysis_options& opts) {
    assert(opts.reduce_rounds <= 10);
    for (int round = 0; round < opts.reduce_rounds && !st.is_bottom(); ++round)
        for (std::uint32_t i = 0; i < st.sym.var_count() && !st.is_bottom(); ++i)
            st = reduce(st, var_id{i}, opts);
    return st;
}
}  // namespace detail

inline abstract_state transfer(const abstract_state& st, const instr& ins,
                               const analysis_options& opts) {
    if (st.is_bottom()) return st;
    const expr_ptr& e = ins.arg();
    expr_ptr rewritten = apply_strat(e, st.sym, opts.subst);
    auto forms = linearize(rewritten, st.num.bounds(), opts.mult, opts.mode, opts.refine_trunc);

    interval_env num;
    sym_env sym = st.sym;
    if (ins.is_assign()) {
        num = detail::assign_forms(st.num, ins.target(), forms, opts.mode);
        if (opts.combo) {
            num = env_meet(num, assign_expr(st.num, ins.target(), e, opts.mode));
            auto plain = linearize(e, st.num.bounds(), opts.mult, opts.mode, opts.refine_trunc);
            num = env_meet(num, detail::assign_forms(st.num, ins.target(), plain, opts.mode));
        }
        sym = sc_assign(st.sym, ins.target(), e);
    } else {
        num = detail::test_forms(st.num, forms, ins.cmp(), opts.mode);
        if (opts.combo) {
            num = env_meet(num, test_expr(st.num, e, ins.cmp(), opts.mode));
            auto plain = linearize(e, st.num.bounds(), opts.mult, opts.mode, opts.refine_trunc);
            num = env_meet(num, detail::test_forms(st.num, plain, ins.cmp(), opts.mode));
        }
        sym = sc_test(st.sym, ins);
    }
    return detail::reduce_all({std::move(num), std::move(sym)}, opts);
}

struct solve_stats {
    std::size_t widen_point_updates = 0;  // state changes at widening points
    std::size_t pops = 0;                 // worklist extractions
    std::size_t repair_joins = 0;         // arc repairs after narrowing
    bool narrowing_reverted = false;
};

struct solve_result {
    std::vector<abstract_state> states;
    std::vector<point_id> widening_points;
    solve_stats stats;
};

namespace detail {

struct cfg_order {
    std::vector<point_id> rpo;              // reachable points, reverse postorder
    std::vector<std::uint32_t> rpo_index;   // point -> position (or npos)
    std::vector<bool> widen_at;             // back-edge targets
    static constexpr std::uint32_t npos = ~0u;
};

// Iterative DFS from the entry; a successor sitting on the current DFS
// stack marks a back edge, whose target gets a widening point. Taking every
// back-edge target (rather than one point per SCC) puts a widening point on
// every cycle, which nested loops need for termination.
inline cfg_order order_cfg(const program& p) {
    cfg_order o;
    o.rpo_index.assign(p.point_count(), cfg_order::npos);
    o.widen_at.assign(p.point_count(), false);
    std::vector<int> state(p.point_count(), 0);  // 0 new, 1 on stack, 2 done
    std::vector<point_id> postorder;
    struct frame {
        point_id l;
        std::vector<std::pair<instr, point_id>> succ;
        std::size_t next = 0;
    };
    std::vector<frame> stack;
    stack.push_back({p.entry(), p.successors(p.entry()), 0});
    state[p.entry()] = 1;
    while (!stack.empty()) {
        frame& f = stack.back();
        if (f.next < f.succ.size()) {
            point_id s = f.succ[f.next++].second;
            if (state[s] == 0) {
                state[s] = 1;
                stack.push_back({s, p.successors(s), 0});
            } else if (state[s] == 1) {
                o.widen_at[s] = true;
            }
        } else {
            state[f.l] = 2;
            postorder.push_back(f.l);
            stack.pop_back();
        }
    }
    o.rpo.assign(postorder.rbegin(), postorder.rend());
    for (std::uint32_t i = 0; i < o.rpo.size(); ++i) o.rpo_index[o.rpo[i]] = i;
    return o;
}

}  // namespace detail

// Recomputes one point from its incoming arcs.
inline abstract_state incoming_join(const program& p, const std::vector<abstract_state>& states,
                                    point_id l, const analysis_options& opts) {
    abstract_state fresh = abstract_state::bottom(p.var_count());
    for (const arc& a : p.arcs())
        if (a.dst == l) fresh = state_join(fresh, transfer(states[a.src], a.ins, opts));
    return fresh;
}

// True when the solution absorbs every arc and fixes the entry at top.
inline bool check_post_fixpoint(const program& p, const std::vector<abstract_state>& states,
                                const analysis_options& opts) {
    if (!state_equal(states.at(p.entry()), abstract_state::top(p.var_count()))) return false;
    for (const arc& a : p.arcs())
        if (!state_leq(transfer(states[a.src], a.ins, opts), states[a.dst])) return false;
    return true;
}

inline solve_result solve(const program& p, analysis_options opts) {
    std::sort(opts.thresholds.begin(), opts.thresholds.end());
    opts.thresholds.erase(std::unique(opts.thresholds.begin(), opts.thresholds.end()),
                          opts.thresholds.end());

    const std::uint32_t n = p.var_count();
    detail::cfg_order order = detail::order_cfg(p);

    solve_result res;
    res.states.assign(p.point_count(), abstract_state::bottom(n));
    res.states[p.entry()] = abstract_state::top(n);
    for (point_id l = 0; l < p.point_count(); ++l)
        if (order.widen_at[l]) res.widening_points.push_back(l);

    std::vector<std::size_t> visits(p.point_count(), 0);
    std::set<std::uint32_t> work;  // rpo positions, entry excluded (fixed at top)
    for (std::uint32_t i = 0; i < order.rpo.size(); ++i)
        if (order.rpo[i] != p.entry()) work.insert(i);

    auto push_successors = [&](point_id l) {
        for (const arc& a : p.arcs())
            if (a.src == l && a.dst != p.entry() &&
                order.rpo_index[a.dst] != detail::cfg_order::npos)
                work.insert(order.rpo_index[a.dst]);
    };

    // Ascending phase. Termination: widening ladders are finite per bound,
    // the symbolic join only drops bindings, and the non-widening subgraph
    // is acyclic. The cap is a bug guard, not part of the argument.
    const std::size_t pop_cap = 100000 + 1000 * static_cast<std::size_t>(p.point_count());
    while (!work.empty()) {
        if (++res.stats.pops > pop_cap) throw std::runtime_error("fixpoint iteration diverged");
        point_id l = order.rpo[*work.begin()];
        work.erase(work.begin());
        abstract_state fresh = incoming_join(p, res.states, l, opts);
        if (order.widen_at[l]) {
            if (state_leq(fresh, res.states[l])) continue;
            ++visits[l];
            abstract_state up = state_join(res.states[l], fresh);
            if (visits[l] > static_cast<std::size_t>(opts.widening_delay))
                up.num = env_widen(res.states[l].num, up.num, opts.thresholds);
            res.states[l] = std::move(up);
            ++res.stats.widen_point_updates;
            push_successors(l);
        } else {
            if (state_equal(fresh, res.states[l])) continue;
            res.states[l] = std::move(fresh);
            push_successors(l);
        }
    }

    if (opts.decreasing_passes <= 0) return res;

    // Narrowing: meet each point with its recomputation, in RPO.
    std::vector<abstract_state> snapshot = res.states;
    for (int pass = 0; pass < opts.decreasing_passes; ++pass) {
        for (point_id l : order.rpo) {
            if (l == p.entry()) continue;
            abstract_state fresh = incoming_join(p, res.states, l, opts);
            if (fresh.is_bottom() || res.states[l].is_bottom()) {
                res.states[l] = abstract_state::bottom(n);
                continue;
            }
            res.states[l] = {env_meet(res.states[l].num, fresh.num), fresh.sym};
        }
    }

    // Repair: transfers are not monotone, so narrowed inputs can push an
    // arc's output above the stored state; join until every arc absorbs.
    const std::size_t repair_cap = 3 * static_cast<std::size_t>(p.point_count()) + 10;
    for (std::size_t round = 0;; ++round) {
        if (round >= repair_cap) {
            res.states = std::move(snapshot);  // known post-fixpoint
            res.stats.narrowing_reverted = true;
            break;
        }
        bool stable = true;
        for (const arc& a : p.arcs()) {
            if (a.dst == p.entry()) continue;
            abstract_state t = transfer(res.states[a.src], a.ins, opts);
            if (!state_leq(t, res.states[a.dst])) {
                res.states[a.dst] = state_join(res.states[a.dst], t);
                ++res.stats.repair_joins;
                stable = false;
            }
        }
        if (stable) break;
    }
    return res;
}

}  // namespace linea
