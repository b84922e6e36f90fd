// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0

// The concrete enumeration oracle itself: expression value sets, test
// filtering, and whole-program collection. Everything else in the suite
// leans on this being right, so it is pinned in detail here.

#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace linea;
using namespace linea::testing;

namespace {

std::set<mpz_class> vals(std::initializer_list<long> xs) {
    std::set<mpz_class> out;
    for (long x : xs) out.insert(mpz_class(x));
    return out;
}

}  // namespace

TEST_CASE("concrete evaluation draws interval constants afresh per occurrence") {
    expr_ptr e = expr::binary(binop::add, expr::constant(iv(1, 3)), expr::constant(iv(0, 1)));
    CHECK(concrete_eval(e, {}) == vals({1, 2, 3, 4}));
    // Two occurrences of the same interval are independent draws.
    expr_ptr d = expr::binary(binop::sub, expr::constant(iv(0, 1)), expr::constant(iv(0, 1)));
    CHECK(concrete_eval(d, {}) == vals({-1, 0, 1}));
    // ...but two occurrences of the same variable are the same value.
    expr_ptr x = expr::var(var_id{0});
    CHECK(concrete_eval(expr::binary(binop::sub, x, x), {mpz_class(7)}) == vals({0}));
}

TEST_CASE("concrete division truncates toward zero and skips zero denominators") {
    auto q = [](long a, long b) {
        return concrete_eval(expr::binary(binop::div, expr::scalar(rational(a)), expr::scalar(rational(b))),
                             {});
    };
    CHECK(q(-7, 2) == vals({-3}));
    CHECK(q(7, -2) == vals({-3}));
    CHECK(q(7, 2) == vals({3}));
    // X / X at X = 0 has no outcome at all.
    expr_ptr x = expr::var(var_id{0});
    CHECK(concrete_eval(expr::binary(binop::div, x, x), {mpz_class(0)}).empty());
    // A denominator range straddling zero just loses the zero draw.
    expr_ptr e = expr::binary(binop::div, expr::scalar(rat("6")), expr::constant(iv(-1, 2)));
    CHECK(concrete_eval(e, {}) == vals({-6, 3, 6}));
}

TEST_CASE("unbounded constants cannot be enumerated") {
    expr_ptr e = expr::constant(interval(bound(rat("0")), bound::plus_inf()));
    CHECK_THROWS_AS(concrete_eval(e, {}), std::domain_error);
    CHECK(concrete_eval(expr::constant(interval::empty()), {}).empty());
}

TEST_CASE("tests keep an environment when some drawn value satisfies them") {
    expr_ptr diff = expr::binary(binop::sub, expr::var(var_id{0}), expr::constant(iv(0, 1)));
    instr t = instr::test(diff, cmp_op::eq);
    CHECK(concrete_test(t, {mpz_class(1)}));
    CHECK_FALSE(concrete_test(t, {mpz_class(2)}));
    instr never = instr::test(expr::scalar(rat("1")), cmp_op::eq);
    CHECK_FALSE(concrete_test(never, {mpz_class(0)}));
}

TEST_CASE("collection of a straight-line program") {
    // X = [0,1]; Y = X;
    program p({"X", "Y"}, 0, 3);
    p.add_arc(0, instr::assign(var_id{0}, expr::constant(iv(0, 1))), 1);
    p.add_arc(1, instr::assign(var_id{1}, expr::var(var_id{0})), 2);
    auto states = collect(p, origin_box(p), 1000);
    std::set<concrete_env> expect = {{mpz_class(0), mpz_class(0)}, {mpz_class(1), mpz_class(1)}};
    CHECK(states[2] == expect);
    CHECK(states[0].size() == 1);  // the origin box is a single environment
}

TEST_CASE("collection through a branch merges both outcomes") {
    auto cp = parse_program(R"(
        # Absolute-value shape on a small range.
        mode int;
        var X, Y;
        X = [-3, 3];
        Y = X;
        if (Y <= 0) { Y = 0 - X; }
    )");
    auto states = collect(cp.prog, origin_box(cp.prog), 10000);
    CHECK(collect_values(states, named_point(cp.prog, "exit"), var_id{1}) == vals({0, 1, 2, 3}));
    CHECK(collect_values(states, named_point(cp.prog, "exit"), var_id{0}) == vals({-3, -2, -1, 0, 1, 2, 3}));
}

TEST_CASE("collection runs loops to their least fixpoint") {
    auto cp = parse_program(R"(
        mode int;
        var X;
        X = 0;
        while (X - 4 <= 0) { X = X + 1; }
    )");
    auto states = collect(cp.prog, origin_box(cp.prog), 10000);
    CHECK(collect_values(states, named_point(cp.prog, "exit"), var_id{0}) == vals({5}));
    // The loop head (source of the complementary guard arcs) sees every iterate.
    point_id head = cp.prog.point_count();
    for (const arc& a : cp.prog.arcs())
        if (!a.ins.is_assign()) head = a.src;
    REQUIRE(head < cp.prog.point_count());
    CHECK(collect_values(states, head, var_id{0}) == vals({0, 1, 2, 3, 4, 5}));
}

TEST_CASE("an infeasible test cuts everything downstream") {
    auto cp = parse_program(R"(
        mode int;
        var X;
        X = 0;
        assume (1 == 0);
        X = 5;
    )");
    auto states = collect(cp.prog, origin_box(cp.prog), 1000);
    CHECK(states[named_point(cp.prog, "exit")].empty());
}

TEST_CASE("collection is deterministic and respects its state cap") {
    auto cp = parse_program(R"(
        mode int;
        var A, B;
        A = [-2, 2];
        B = A * A;
    )");
    auto s1 = collect(cp.prog, origin_box(cp.prog), 10000);
    auto s2 = collect(cp.prog, origin_box(cp.prog), 10000);
    CHECK(s1 == s2);
    CHECK(collect_values(s1, named_point(cp.prog, "exit"), var_id{1}) == vals({0, 1, 4}));
    CHECK_THROWS_AS(collect(cp.prog, origin_box(cp.prog), 3), std::runtime_error);
    concrete_box bad;  // wrong arity
    CHECK_THROWS_AS(collect(cp.prog, bad, 1000), std::invalid_argument);
}
