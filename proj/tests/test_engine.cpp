// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0

// The combined transfer function and the fixpoint engine: strategy legs,
// reduction, widening/narrowing behavior, termination accounting, and a
// randomized soundness sweep against the concrete oracle.

#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace linea;
using namespace linea::testing;

namespace {

const var_id X{0};
const var_id Y{1};

expr_ptr vx() { return expr::var(X); }
expr_ptr num(long n) { return expr::scalar(rational(n)); }
expr_ptr bin(binop o, expr_ptr l, expr_ptr r) { return expr::binary(o, std::move(l), std::move(r)); }

abstract_state state2(interval ix, interval iy) {
    abstract_state st = abstract_state::top(2);
    st.num.set(X, std::move(ix));
    st.num.set(Y, std::move(iy));
    return st;
}

point_id loop_head(const program& p) {
    point_id head = p.point_count();
    for (const arc& a : p.arcs())
        if (!a.ins.is_assign()) head = a.src;
    REQUIRE(head < p.point_count());
    return head;
}

}  // namespace

TEST_CASE("transfer records and uses symbolic bindings") {
    analysis_options opts;
    abstract_state st = state2(iv(0, 1), interval::top());
    abstract_state after = transfer(st, instr::assign(Y, vx()), opts);
    CHECK(after.num.get(Y) == iv(0, 1));
    REQUIRE(after.sym.binding(Y) != nullptr);
    CHECK(expr_equal(after.sym.binding(Y), vx()));
    // The binding pays off once X is refined: Y - 0 <= 0 refines X through Y.
    abstract_state tested = transfer(after, instr::test(expr::var(Y), cmp_op::le), opts);
    CHECK(tested.num.get(Y) == iv(0, 0));
    CHECK(tested.num.get(X) == iv(0, 0));
}

TEST_CASE("combo mode meets the raw transfer against the linearized one") {
    // Y = (X/2)*2 over the integers with X in [0,10]: the linearized leg
    // alone gives [-1,11], the raw interval leg [0,10]; combo meets them.
    analysis_options opts;
    opts.mode = semantics_mode::integers;
    expr_ptr e = bin(binop::mul, bin(binop::div, vx(), num(2)), num(2));
    abstract_state st = state2(iv(0, 10), interval::top());
    opts.combo = false;
    CHECK(transfer(st, instr::assign(Y, e), opts).num.get(Y) == iv(-1, 11));
    opts.combo = true;
    CHECK(transfer(st, instr::assign(Y, e), opts).num.get(Y) == iv(0, 10));
}

TEST_CASE("substitution closes the gap between two bindings") {
    // Y = X; Z := X - Y cancels only when Y's binding is substituted.
    analysis_options opts;
    opts.subst = subst_strategy::full_noconst;
    abstract_state st = state2(iv(0, 1), interval::top());
    st = transfer(st, instr::assign(Y, vx()), opts);
    expr_ptr zexpr = bin(binop::sub, vx(), expr::var(Y));
    CHECK(transfer(st, instr::assign(Y, zexpr), opts).num.get(Y) == iv(0, 0));
    opts.subst = subst_strategy::none;
    opts.combo = false;
    CHECK(transfer(st, instr::assign(Y, zexpr), opts).num.get(Y) == iv(-1, 1));
}

TEST_CASE("reduction feeds bindings back into the intervals") {
    analysis_options opts;
    abstract_state st = state2(iv(0, 1), iv(-5, 5));
    st.sym.set_binding(Y, vx());
    abstract_state out = reduce(st, Y, opts);
    CHECK(out.num.get(Y) == iv(0, 1));
    CHECK(out.num.get(X) == iv(0, 1));
    // An interval-constant binding works the same way.
    abstract_state st2 = state2(iv(0, 1), iv(-5, 5));
    st2.sym.set_binding(Y, expr::constant(iv(0, 1)));
    CHECK(reduce(st2, Y, opts).num.get(Y) == iv(0, 1));
    // Reduction rounds inside transfer: enabled via options.
    opts.reduce_rounds = 1;
    abstract_state chained = state2(iv(0, 1), iv(-5, 5));
    chained.sym.set_binding(Y, vx());
    abstract_state after = transfer(chained, instr::test(vx(), cmp_op::ge), opts);
    CHECK(after.num.get(Y) == iv(0, 1));
}

TEST_CASE("a bounded loop solves to its exact head and exit invariants") {
    auto cp = parse_program(R"(
        mode int;
        var X;
        X = 0;
        while (X - 100 <= 0) { X = X + 1; }
    )");
    analysis_options opts;
    opts.mode = semantics_mode::integers;
    solve_result res = solve(cp.prog, opts);
    point_id head = loop_head(cp.prog);
    point_id exit = named_point(cp.prog, "exit");
    CHECK(res.states[head].num.get(X) == iv(0, 101));
    CHECK(res.states[exit].num.get(X) == iv(101, 101));
    CHECK(res.widening_points == std::vector<point_id>{head});
    CHECK(res.stats.widen_point_updates == 2);
    CHECK_FALSE(res.stats.narrowing_reverted);
    CHECK(check_post_fixpoint(cp.prog, res.states, opts));
    // Without a decreasing pass the head keeps the widened bound.
    opts.decreasing_passes = 0;
    solve_result wide = solve(cp.prog, opts);
    CHECK(wide.states[head].num.get(X) == interval(bound(rat("0")), bound::plus_inf()));
    // The exit keeps only the guard's lower bound; the cap needs narrowing.
    CHECK(wide.states[exit].num.get(X) == interval(bound(rat("101")), bound::plus_inf()));
    CHECK(check_post_fixpoint(cp.prog, wide.states, opts));
    // Thresholds catch the bound before infinity even without narrowing.
    opts.thresholds = {rat("50"), rat("128")};
    solve_result thr = solve(cp.prog, opts);
    CHECK(thr.states[head].num.get(X) == iv(0, 128));
    CHECK(thr.states[exit].num.get(X) == iv(101, 128));
}

TEST_CASE("widening accounting stays within the engine bound") {
    auto cp = parse_program(R"(
        mode int;
        var I, J, S;
        I = 0;
        S = 0;
        while (I - 3 <= 0) {
            J = 0;
            while (J - 3 <= 0) { J = J + 1; S = S + [0, 1]; }
            I = I + 1;
        }
    )");
    for (int delay : {0, 1, 3}) {
        for (bool with_thresholds : {false, true}) {
            analysis_options opts;
            opts.mode = semantics_mode::integers;
            opts.widening_delay = delay;
            if (with_thresholds) opts.thresholds = {rat("-8"), rat("0"), rat("2"), rat("8")};
            solve_result res = solve(cp.prog, opts);
            CHECK(res.widening_points.size() == 2);  // one per loop
            std::size_t ladder = opts.thresholds.size() + 2;
            std::size_t bound = ladder * 2 * cp.prog.var_count() * res.widening_points.size() +
                                static_cast<std::size_t>(delay);
            CHECK(res.stats.widen_point_updates <= bound);
            CHECK(check_post_fixpoint(cp.prog, res.states, opts));
            // The exit guard pins I's lower bound exactly. The upper bound
            // stays widened: the inner head's back edge feeds the widened I
            // back to itself, which a decreasing pass cannot undo.
            const interval& exit_i = res.states[named_point(cp.prog, "exit")].num.get(var_id{0});
            REQUIRE(exit_i.lo().is_finite());
            CHECK(exit_i.lo().value() == rat("4"));
            CHECK(icontains(exit_i, rat("4")));
        }
    }
}

TEST_CASE("code behind an infeasible test stays unreachable") {
    auto cp = parse_program(R"(
        mode int;
        var X;
        X = 0;
        assume (X >= 1);
        X = 5;
    )");
    analysis_options opts;
    opts.mode = semantics_mode::integers;
    solve_result res = solve(cp.prog, opts);
    CHECK(res.states[named_point(cp.prog, "exit")].is_bottom());
    CHECK(check_post_fixpoint(cp.prog, res.states, opts));
}

TEST_CASE("joins keep agreeing bindings and drop the rest") {
    auto cp = parse_program(R"(
        var X, Y, Z;
        X = [-1, 1];
        if (X >= 0) { Y = X; Z = 1; } else { Y = X; Z = 2; }
    )");
    analysis_options opts;
    solve_result res = solve(cp.prog, opts);
    const abstract_state& exit = res.states[named_point(cp.prog, "exit")];
    REQUIRE_FALSE(exit.is_bottom());
    CHECK(expr_equal(exit.sym.binding(var_id{1}), expr::var(var_id{0})));  // Y := X survives
    CHECK(exit.sym.binding(var_id{2}) == nullptr);                        // Z differs per branch
    CHECK(exit.num.get(var_id{2}) == iv(1, 2));
}

TEST_CASE("randomized soundness sweep against the oracle") {
    std::mt19937 rng(43);
    auto grid = soundness_grid();
    int checked = 0;
    for (int trial = 0; trial < 30; ++trial) {
        program_gen gen(rng);
        std::string src = gen.source();
        INFO("program:\n" << src);
        auto cp = parse_program(src);
        auto oracle = collect(cp.prog, origin_box(cp.prog), 600000);
        for (std::size_t gi : {std::size_t{0}, std::size_t{3}}) {
            analysis_options opts = grid[gi];
            solve_result res = solve(cp.prog, opts);
            std::string violation = check_soundness(cp.prog, oracle, res.states);
            if (!violation.empty()) FAIL("config " << gi << ": " << violation);
            CHECK(check_post_fixpoint(cp.prog, res.states, opts));
            ++checked;
        }
    }
    CHECK(checked == 60);
}
