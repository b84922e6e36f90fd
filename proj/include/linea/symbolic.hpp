// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Symbolic constant propagation: a map from each variable to the expression
// last assigned to it, or "any value" (top, represented by a null tree).
// The dependency graph of bindings stays acyclic, which makes substitution
// terminate. Assignments rewrite the map per the usual strongest
// post-condition, tests leave it unchanged, joins keep only syntactically
// equal bindings, and the meet keeps its left argument (mixing bindings
// could create cycles). Substitution strategies control which bindings get
// inlined into an expression before linearization.

#include <linea/concrete.hpp>
#include <linea/lang.hpp>

#include <set>
#include <string>
#include <vector>

namespace linea {

// Binding: null means top ("any value").
using cexpr = expr_ptr;

inline std::set<var_id> occ(const cexpr& c) {
    if (!c) return {};
    return vars_of(c);
}

namespace detail {
// Pre: r non-null, e non-null. Shares untouched subtrees.
inline expr_ptr subst_tree(const expr_ptr& e, var_id v, const expr_ptr& r) {
    switch (e->node_kind()) {
        case expr::kind::var: return e->var_ref() == v ? r : e;
        case expr::kind::constant: return e;
        default: {
            expr_ptr l = subst_tree(e->lhs(), v, r);
            expr_ptr rr = subst_tree(e->rhs(), v, r);
            if (l == e->lhs() && rr == e->rhs()) return e;
            return expr::binary(e->op(), l, rr);
        }
    }
}
}  // namespace detail

// Substitutes v by r in c. Substituting top into a tree that mentions v
// makes the whole tree top; trees not mentioning v are untouched.
inline cexpr subst(const cexpr& c, var_id v, const cexpr& r) {
    if (!c) return nullptr;
    if (!occ(c).count(v)) return c;
    if (!r) return nullptr;
    return detail::subst_tree(c, v, r);
}

// Total map variable -> binding; default top everywhere.
class sym_env {
public:
    sym_env() = default;
    explicit sym_env(std::uint32_t var_count) : bindings_(var_count) {}

    std::uint32_t var_count() const { return static_cast<std::uint32_t>(bindings_.size()); }
    const cexpr& binding(var_id v) const { return bindings_.at(v.index); }

    // Stores a binding; a variable bound to itself carries no information
    // and would be a one-node cycle, so it normalizes to top.
    void set_binding(var_id v, cexpr c) {
        if (c && c->is_var() && c->var_ref() == v) c = nullptr;
        bindings_.at(v.index) = std::move(c);
    }

    friend bool operator==(const sym_env& a, const sym_env& b) {
        if (a.var_count() != b.var_count()) return false;
        for (std::uint32_t i = 0; i < a.var_count(); ++i)
            if (!expr_equal(a.bindings_[i], b.bindings_[i])) return false;
        return true;
    }
    friend bool operator!=(const sym_env& a, const sym_env& b) { return !(a == b); }

    std::string str(const std::vector<std::string>& names) const {
        std::string out;
        for (std::uint32_t i = 0; i < var_count(); ++i) {
            out += names.at(i) + " := ";
            out += bindings_[i] ? expr_str(bindings_[i], names) : "T";
            out += "\n";
        }
        return out;
    }

private:
    std::vector<cexpr> bindings_;
};

// True when the binding dependency graph (V depends on the variables
// occurring in its binding) has no cycle. Debug aid; the transfer
// operators preserve it.
inline bool sc_acyclic(const sym_env& s) {
    std::uint32_t n = s.var_count();
    std::vector<int> mark(n, 0);  // 0 fresh, 1 on stack, 2 done
    auto dfs = [&](auto&& self, std::uint32_t i) -> bool {
        mark[i] = 1;
        for (var_id w : occ(s.binding(var_id{i}))) {
            if (mark[w.index] == 1) return false;
            if (mark[w.index] == 0 && !self(self, w.index)) return false;
        }
        mark[i] = 2;
        return true;
    };
    for (std::uint32_t i = 0; i < n; ++i)
        if (mark[i] == 0 && !dfs(dfs, i)) return false;
    return true;
}

// Assignment v <- e: v's new binding is e with any self-reference replaced
// by v's old binding, and every other binding drops its references to the
// old v the same way.
inline sym_env sc_assign(const sym_env& s, var_id v, const expr_ptr& e) {
    sym_env r(s.var_count());
    const cexpr& old = s.binding(v);
    r.set_binding(v, subst(e, v, old));
    for (std::uint32_t i = 0; i < s.var_count(); ++i) {
        if (var_id{i} == v) continue;
        r.set_binding(var_id{i}, subst(s.binding(var_id{i}), v, old));
    }
    return r;
}

// Tests carry no new equality information for this domain.
inline sym_env sc_test(const sym_env& s, const instr&) { return s; }

// Keep syntactically equal bindings, drop the rest to top. Least upper
// bound; no widening is ever needed on top of it.
inline sym_env sc_join(const sym_env& a, const sym_env& b) {
    assert(a.var_count() == b.var_count());
    sym_env r(a.var_count());
    for (std::uint32_t i = 0; i < a.var_count(); ++i) {
        var_id v{i};
        if (expr_equal(a.binding(v), b.binding(v))) r.set_binding(v, a.binding(v));
    }
    return r;
}

// Sound meet that keeps the left argument: mixing bindings across the two
// sides could break acyclicity.
inline sym_env sc_meet(const sym_env& a, const sym_env& b) {
    assert(a.var_count() == b.var_count());
    (void)b;
    return a;
}

// Concretization membership over integer environments: every binding must
// admit the environment's value among its possible evaluations. (The
// concrete enumeration is integer-only, which is where all oracle testing
// happens.)
inline bool sc_gamma_holds(const sym_env& s, const concrete_env& rho) {
    for (std::uint32_t i = 0; i < s.var_count(); ++i) {
        const cexpr& c = s.binding(var_id{i});
        if (!c) continue;
        if (!concrete_eval(c, rho).count(rho.at(i))) return false;
    }
    return true;
}

enum class subst_strategy { none, full, full_noconst, deterministic, linear_only };

namespace detail {
inline bool has_nonsingleton_const(const expr_ptr& e) {
    switch (e->node_kind()) {
        case expr::kind::var: return false;
        case expr::kind::constant: {
            const interval& c = e->constant_value();
            return c.is_empty() || c.lo() != c.hi();
        }
        default: return has_nonsingleton_const(e->lhs()) || has_nonsingleton_const(e->rhs());
    }
}

inline bool has_mul_div(const expr_ptr& e) {
    if (!e->is_binary()) return false;
    if (e->op() == binop::mul || e->op() == binop::div) return true;
    return has_mul_div(e->lhs()) || has_mul_div(e->rhs());
}

inline bool eligible(const cexpr& c, subst_strategy st) {
    if (!c) return false;  // top never substituted, it would erase information
    switch (st) {
        case subst_strategy::full: return true;
        case subst_strategy::full_noconst: return !occ(c).empty();
        case subst_strategy::deterministic: return !has_nonsingleton_const(c);
        case subst_strategy::linear_only: return !has_nonsingleton_const(c) && !has_mul_div(c);
        default: return false;
    }
}
}  // namespace detail

// Substitutes eligible bindings into e, in variable index order, until no
// eligible variable remains in the expression. Terminates by acyclicity.
inline expr_ptr apply_strat(expr_ptr e, const sym_env& s, subst_strategy st) {
    if (st == subst_strategy::none) return e;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::uint32_t i = 0; i < s.var_count(); ++i) {
            var_id v{i};
            if (!vars_of(e).count(v)) continue;
            const cexpr& c = s.binding(v);
            if (!detail::eligible(c, st)) continue;
            e = detail::subst_tree(e, v, c);
            changed = true;
        }
    }
    return e;
}

}  // namespace linea
