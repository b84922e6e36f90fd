// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Core program representation: expressions over a fixed set of variables,
// instructions (assignment and test against 0), and programs as arc-labelled
// control-flow graphs. Everything here is an immutable value; expression
// trees share subtrees freely.

#include <linea/interval.hpp>

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace linea {

// Dense index into a program's variable table.
struct var_id {
    std::uint32_t index = 0;
    friend bool operator==(var_id a, var_id b) { return a.index == b.index; }
    friend bool operator!=(var_id a, var_id b) { return a.index != b.index; }
    friend bool operator<(var_id a, var_id b) { return a.index < b.index; }
};

enum class binop { add, sub, mul, div };

inline const char* binop_str(binop op) {
    switch (op) {
        case binop::add: return "+";
        case binop::sub: return "-";
        case binop::mul: return "*";
        default: return "/";
    }
}

// Interval counterpart of a binary operator.
inline interval iarith(binop op, const interval& a, const interval& b, semantics_mode mode) {
    switch (op) {
        case binop::add: return iadd(a, b);
        case binop::sub: return isub(a, b);
        case binop::mul: return imul(a, b);
        default: return idiv(a, b, mode);
    }
}

class expr;
using expr_ptr = std::shared_ptr<const expr>;

// Var | Const (interval, possibly unbounded) | Binop. Constants are
// nondeterministic: each evaluation may pick a fresh value in the interval.
class expr {
public:
    enum class kind { var, constant, binary };

    static expr_ptr var(var_id v) { return std::make_shared<expr>(tag{}, v); }
    static expr_ptr constant(interval c) { return std::make_shared<expr>(tag{}, std::move(c)); }
    static expr_ptr scalar(const rational& q) { return constant(interval::singleton(q)); }
    static expr_ptr binary(binop op, expr_ptr l, expr_ptr r) {
        return std::make_shared<expr>(tag{}, op, std::move(l), std::move(r));
    }

    kind node_kind() const { return kind_; }
    bool is_var() const { return kind_ == kind::var; }
    bool is_constant() const { return kind_ == kind::constant; }
    bool is_binary() const { return kind_ == kind::binary; }

    var_id var_ref() const {
        assert(is_var());
        return var_;
    }
    const interval& constant_value() const {
        assert(is_constant());
        return const_;
    }
    binop op() const {
        assert(is_binary());
        return op_;
    }
    const expr_ptr& lhs() const {
        assert(is_binary());
        return lhs_;
    }
    const expr_ptr& rhs() const {
        assert(is_binary());
        return rhs_;
    }

    // Constructors are public for make_shared but gated by the private tag.
    struct tag {};
    expr(tag, var_id v) : kind_(kind::var), var_(v), const_(interval::empty()) {}
    expr(tag, interval c) : kind_(kind::constant), const_(std::move(c)) {}
    expr(tag, binop op, expr_ptr l, expr_ptr r)
        : kind_(kind::binary), const_(interval::empty()), op_(op), lhs_(std::move(l)), rhs_(std::move(r)) {}

private:
    kind kind_;
    var_id var_{};
    interval const_;
    binop op_ = binop::add;
    expr_ptr lhs_, rhs_;
};

inline bool expr_equal(const expr_ptr& a, const expr_ptr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->node_kind() != b->node_kind()) return false;
    switch (a->node_kind()) {
        case expr::kind::var: return a->var_ref() == b->var_ref();
        case expr::kind::constant: return a->constant_value() == b->constant_value();
        default:
            return a->op() == b->op() && expr_equal(a->lhs(), b->lhs()) && expr_equal(a->rhs(), b->rhs());
    }
}

inline void vars_of_into(const expr_ptr& e, std::set<var_id>& out) {
    switch (e->node_kind()) {
        case expr::kind::var: out.insert(e->var_ref()); break;
        case expr::kind::constant: break;
        default:
            vars_of_into(e->lhs(), out);
            vars_of_into(e->rhs(), out);
    }
}

inline std::set<var_id> vars_of(const expr_ptr& e) {
    std::set<var_id> out;
    vars_of_into(e, out);
    return out;
}

enum class cmp_op { eq, ne, lt, le, ge, gt };

inline const char* cmp_str(cmp_op c) {
    switch (c) {
        case cmp_op::eq: return "=";
        case cmp_op::ne: return "!=";
        case cmp_op::lt: return "<";
        case cmp_op::le: return "<=";
        case cmp_op::ge: return ">=";
        default: return ">";
    }
}

inline cmp_op cmp_negate(cmp_op c) {
    switch (c) {
        case cmp_op::eq: return cmp_op::ne;
        case cmp_op::ne: return cmp_op::eq;
        case cmp_op::lt: return cmp_op::ge;
        case cmp_op::le: return cmp_op::gt;
        case cmp_op::ge: return cmp_op::lt;
        default: return cmp_op::le;
    }
}

// Assign(target, rhs) or Test(lhs ⋈ 0 ?).
class instr {
public:
    enum class kind { assign, test };

    static instr assign(var_id target, expr_ptr rhs) {
        instr i;
        i.kind_ = kind::assign;
        i.target_ = target;
        i.expr_ = std::move(rhs);
        return i;
    }
    static instr test(expr_ptr lhs, cmp_op cmp) {
        instr i;
        i.kind_ = kind::test;
        i.cmp_ = cmp;
        i.expr_ = std::move(lhs);
        return i;
    }

    kind node_kind() const { return kind_; }
    bool is_assign() const { return kind_ == kind::assign; }
    var_id target() const {
        assert(is_assign());
        return target_;
    }
    cmp_op cmp() const {
        assert(!is_assign());
        return cmp_;
    }
    // Assignment rhs, or the tested expression.
    const expr_ptr& arg() const { return expr_; }

private:
    kind kind_ = kind::assign;
    var_id target_{};
    cmp_op cmp_ = cmp_op::eq;
    expr_ptr expr_;
};

using point_id = std::uint32_t;

struct arc {
    point_id src = 0;
    instr ins;
    point_id dst = 0;
};

// CFG with dense points 0..point_count-1 and named variables 0..var_count-1.
class program {
public:
    program(std::vector<std::string> var_names, point_id entry, std::uint32_t point_count)
        : var_names_(std::move(var_names)), entry_(entry), point_count_(point_count) {
        assert(entry_ < point_count_);
        point_names_.resize(point_count_);
        for (point_id l = 0; l < point_count_; ++l) point_names_[l] = std::to_string(l);
    }

    std::uint32_t var_count() const { return static_cast<std::uint32_t>(var_names_.size()); }
    const std::string& var_name(var_id v) const { return var_names_.at(v.index); }
    const std::vector<std::string>& var_names() const { return var_names_; }

    point_id entry() const { return entry_; }
    std::uint32_t point_count() const { return point_count_; }
    const std::string& point_name(point_id l) const { return point_names_.at(l); }
    void set_point_name(point_id l, std::string name) { point_names_.at(l) = std::move(name); }

    void add_arc(point_id src, instr ins, point_id dst) {
        assert(src < point_count_ && dst < point_count_);
        arcs_.push_back(arc{src, std::move(ins), dst});
    }
    const std::vector<arc>& arcs() const { return arcs_; }

    std::vector<std::pair<instr, point_id>> successors(point_id l) const {
        if (l >= point_count_) throw std::out_of_range("unknown program point");
        std::vector<std::pair<instr, point_id>> out;
        for (const arc& a : arcs_)
            if (a.src == l) out.emplace_back(a.ins, a.dst);
        return out;
    }

private:
    std::vector<std::string> var_names_;
    point_id entry_;
    std::uint32_t point_count_;
    std::vector<std::string> point_names_;
    std::vector<arc> arcs_;
};

// Printer. Output re-parses to a structurally identical tree: singleton
// constants print bare when their value has a finite decimal form, and as
// [p/q,p/q] otherwise (a bare p/q would re-parse as a division).

namespace detail {
inline int expr_prec(const expr_ptr& e) {
    if (!e->is_binary()) return 3;
    return (e->op() == binop::mul || e->op() == binop::div) ? 2 : 1;
}
}  // namespace detail

inline std::string expr_str(const expr_ptr& e, const std::vector<std::string>& names) {
    switch (e->node_kind()) {
        case expr::kind::var: return names.at(e->var_ref().index);
        case expr::kind::constant: {
            const interval& c = e->constant_value();
            if (c.is_empty()) return "[empty]";
            if (c.lo() == c.hi()) {
                std::string d = rat_str_decimal(c.lo().value());
                if (d.find('/') == std::string::npos) return d;
            }
            return c.str();
        }
        default: {
            int prec = detail::expr_prec(e);
            auto side = [&](const expr_ptr& s, bool right) {
                std::string t = expr_str(s, names);
                int sp = detail::expr_prec(s);
                // Parenthesize on lower precedence, and on equal precedence to
                // the right of - and / (left-associative grammar).
                bool need = sp < prec || (right && sp == prec && (e->op() == binop::sub || e->op() == binop::div));
                // Also to the right of * when the sibling is / at equal level.
                if (right && sp == prec && e->op() == binop::mul && s->is_binary() && s->op() == binop::div)
                    need = true;
                return need ? "(" + t + ")" : t;
            };
            return side(e->lhs(), false) + " " + binop_str(e->op()) + " " + side(e->rhs(), true);
        }
    }
}

inline std::string instr_str(const instr& i, const std::vector<std::string>& names) {
    if (i.is_assign()) return names.at(i.target().index) + " = " + expr_str(i.arg(), names);
    return expr_str(i.arg(), names) + " " + cmp_str(i.cmp()) + " 0 ?";
}

}  // namespace linea
