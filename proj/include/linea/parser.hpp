// Copyright (c) Linea contributors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

// Frontend for the structured surface language:
//
//   var X, Y;            declarations first, then statements
//   mode int;            optional, default rat
//   X = [-10, 20];
//   if (Y <= 0) { Y = -X; } else { }
//   while (X - 100 <= 0) { X = X + 1; }
//   assume(X >= 0);
//   assert(Y <= 20);
//
// Comments run from '#' to end of line. Numbers are integers or decimals;
// interval bounds also accept p/q and -oo/+oo. Conditions are single
// comparisons, desugared to "e ? 0" form (the subtraction is skipped when
// the right side is literal 0). Unary minus directly on a number folds into
// the literal; elsewhere it becomes 0 - e.
//
// Desugaring threads statements through fresh program points. A while
// statement's entry point is its loop head: the body chain arcs back to it
// and both guard arcs leave it. assert(c) behaves as assume(c) and
// additionally records a proof obligation at the arc's source point.

#include <linea/interval.hpp>
#include <linea/lang.hpp>
#include <linea/rational.hpp>

#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace linea {

class parse_error : public std::runtime_error {
public:
    parse_error(int line, int col, const std::string& msg)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
          line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

// One proof obligation: at point `at`, the state must rule out the negation
// of `check`.
struct source_assert {
    point_id at;
    instr check;
    int line;
};

struct compiled_program {
    program prog;
    semantics_mode mode = semantics_mode::rationals;
    bool mode_declared = false;  // source carried a mode pragma
    std::vector<source_assert> asserts;
};

namespace detail {

enum class tok_kind { ident, keyword, number, punct, eof };

struct token {
    tok_kind kind;
    std::string text;
    int line;
    int col;
};

inline bool is_keyword(const std::string& s) {
    static const char* kws[] = {"var", "mode", "int", "rat", "if", "else", "while",
                                "assume", "assert", "oo"};
    for (const char* k : kws)
        if (s == k) return true;
    return false;
}

inline std::vector<token> tokenize(const std::string& text) {
    std::vector<token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        int tl = line, tc = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            std::string word = text.substr(i, j - i);
            advance(j - i);
            out.push_back({is_keyword(word) ? tok_kind::keyword : tok_kind::ident,
                           std::move(word), tl, tc});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            if (j < text.size() && text[j] == '.') {
                ++j;
                if (j >= text.size() || !std::isdigit(static_cast<unsigned char>(text[j])))
                    throw parse_error(tl, tc, "digits required after decimal point");
                while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            }
            std::string num = text.substr(i, j - i);
            advance(j - i);
            out.push_back({tok_kind::number, std::move(num), tl, tc});
            continue;
        }
        static const char* two[] = {"==", "!=", "<=", ">="};
        bool matched = false;
        for (const char* t : two) {
            if (text.compare(i, 2, t) == 0) {
                out.push_back({tok_kind::punct, t, tl, tc});
                advance(2);
                matched = true;
                break;
            }
        }
        if (matched) continue;
        if (std::string("=<>+-*/(){}[],;").find(c) != std::string::npos) {
            out.push_back({tok_kind::punct, std::string(1, c), tl, tc});
            advance(1);
            continue;
        }
        throw parse_error(tl, tc, std::string("unexpected character '") + c + "'");
    }
    out.push_back({tok_kind::eof, "", line, col});
    return out;
}

// Statement tree; desugared to arcs after parsing.
struct stmt;
using stmt_list = std::vector<stmt>;

struct cond {
    expr_ptr lhs;  // already in "lhs ? 0" form
    cmp_op cmp = cmp_op::eq;
    int line = 0;
};

struct stmt {
    enum class kind { assign, branch, loop, assume_c, assert_c } k;
    var_id target{0};       // assign
    expr_ptr rhs;           // assign
    cond guard;             // branch / loop / assume / assert
    stmt_list then_body;    // branch / loop
    stmt_list else_body;    // branch
    int line = 0;
};

class parser {
public:
    explicit parser(const std::string& text) : toks_(tokenize(text)) {}

    compiled_program run() {
        parse_decls();
        stmt_list body = parse_stmts(/*top=*/true);
        expect_eof();
        return desugar(body);
    }

private:
    std::vector<token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::string> var_names_;
    std::map<std::string, var_id> vars_;
    semantics_mode mode_ = semantics_mode::rationals;
    bool mode_declared_ = false;

    const token& cur() const { return toks_[pos_]; }
    const token& next() { return toks_[pos_++]; }
    [[noreturn]] void fail(const token& t, const std::string& msg) const {
        throw parse_error(t.line, t.col, msg);
    }
    bool at_punct(const std::string& p) const {
        return cur().kind == tok_kind::punct && cur().text == p;
    }
    bool at_keyword(const std::string& k) const {
        return cur().kind == tok_kind::keyword && cur().text == k;
    }
    void expect_punct(const std::string& p) {
        if (!at_punct(p)) fail(cur(), "expected '" + p + "'");
        ++pos_;
    }
    void expect_eof() const {
        if (cur().kind != tok_kind::eof) fail(cur(), "expected end of input");
    }

    void parse_decls() {
        while (at_keyword("var") || at_keyword("mode")) {
            if (next().text == "var") {
                for (;;) {
                    if (cur().kind != tok_kind::ident) fail(cur(), "expected variable name");
                    token t = next();
                    if (vars_.count(t.text)) fail(t, "duplicate variable '" + t.text + "'");
                    vars_.emplace(t.text, var_id{static_cast<std::uint32_t>(var_names_.size())});
                    var_names_.push_back(t.text);
                    if (at_punct(",")) {
                        ++pos_;
                        continue;
                    }
                    break;
                }
                expect_punct(";");
            } else {
                if (mode_declared_) fail(cur(), "duplicate mode pragma");
                if (at_keyword("int"))
                    mode_ = semantics_mode::integers;
                else if (at_keyword("rat"))
                    mode_ = semantics_mode::rationals;
                else
                    fail(cur(), "expected 'int' or 'rat'");
                ++pos_;
                mode_declared_ = true;
                expect_punct(";");
            }
        }
    }

    var_id lookup(const token& t) const {
        auto it = vars_.find(t.text);
        if (it == vars_.end()) fail(t, "undeclared variable '" + t.text + "'");
        return it->second;
    }

    stmt_list parse_stmts(bool top) {
        stmt_list out;
        while (true) {
            if (top ? cur().kind == tok_kind::eof : at_punct("}")) return out;
            out.push_back(parse_stmt());
        }
    }

    stmt_list parse_block() {
        expect_punct("{");
        stmt_list body = parse_stmts(/*top=*/false);
        expect_punct("}");
        return body;
    }

    stmt parse_stmt() {
        const token& t = cur();
        if (t.kind == tok_kind::ident) {
            stmt s;
            s.k = stmt::kind::assign;
            s.line = t.line;
            s.target = lookup(next());
            expect_punct("=");
            s.rhs = parse_expr();
            expect_punct(";");
            return s;
        }
        if (at_keyword("if")) {
            stmt s;
            s.k = stmt::kind::branch;
            s.line = t.line;
            ++pos_;
            expect_punct("(");
            s.guard = parse_cond();
            expect_punct(")");
            s.then_body = parse_block();
            if (at_keyword("else")) {
                ++pos_;
                s.else_body = parse_block();
            }
            return s;
        }
        if (at_keyword("while")) {
            stmt s;
            s.k = stmt::kind::loop;
            s.line = t.line;
            ++pos_;
            expect_punct("(");
            s.guard = parse_cond();
            expect_punct(")");
            s.then_body = parse_block();
            return s;
        }
        if (at_keyword("assume") || at_keyword("assert")) {
            stmt s;
            s.k = t.text == "assume" ? stmt::kind::assume_c : stmt::kind::assert_c;
            s.line = t.line;
            ++pos_;
            expect_punct("(");
            s.guard = parse_cond();
            expect_punct(")");
            expect_punct(";");
            return s;
        }
        fail(t, "expected statement");
    }

    cond parse_cond() {
        int line = cur().line;
        expr_ptr lhs = parse_expr();
        cmp_op op;
        if (at_punct("=="))
            op = cmp_op::eq;
        else if (at_punct("!="))
            op = cmp_op::ne;
        else if (at_punct("<="))
            op = cmp_op::le;
        else if (at_punct(">="))
            op = cmp_op::ge;
        else if (at_punct("<"))
            op = cmp_op::lt;
        else if (at_punct(">"))
            op = cmp_op::gt;
        else
            fail(cur(), "expected comparison operator");
        ++pos_;
        expr_ptr rhs = parse_expr();
        return {normalize_cmp_lhs(lhs, rhs), op, line};
    }

    // e1 ? e2 becomes (e1 - e2) ? 0; a literal-zero right side keeps e1.
    static expr_ptr normalize_cmp_lhs(const expr_ptr& lhs, const expr_ptr& rhs) {
        if (rhs->node_kind() == expr::kind::constant) {
            const interval& c = rhs->constant_value();
            if (!c.is_empty() && c.lo() == bound(rational(0)) && c.hi() == bound(rational(0)))
                return lhs;
        }
        return expr::binary(binop::sub, lhs, rhs);
    }

    expr_ptr parse_expr() {
        expr_ptr e = parse_term();
        while (at_punct("+") || at_punct("-")) {
            binop op = next().text == "+" ? binop::add : binop::sub;
            e = expr::binary(op, e, parse_term());
        }
        return e;
    }

    expr_ptr parse_term() {
        expr_ptr e = parse_factor();
        while (at_punct("*") || at_punct("/")) {
            binop op = next().text == "*" ? binop::mul : binop::div;
            e = expr::binary(op, e, parse_factor());
        }
        return e;
    }

    rational number_value() {
        const token& t = next();
        std::optional<rational> v = rat_parse(t.text);
        if (!v) fail(t, "bad number '" + t.text + "'");
        return *v;
    }

    expr_ptr parse_factor() {
        const token& t = cur();
        if (at_punct("-")) {
            ++pos_;
            if (cur().kind == tok_kind::number) return expr::scalar(-number_value());
            return expr::binary(binop::sub, expr::scalar(rational(0)), parse_factor());
        }
        if (at_punct("(")) {
            ++pos_;
            expr_ptr e = parse_expr();
            expect_punct(")");
            return e;
        }
        if (t.kind == tok_kind::number) return expr::scalar(number_value());
        if (at_punct("[")) return parse_interval();
        if (t.kind == tok_kind::ident) return expr::var(lookup(next()));
        fail(t, "expected expression");
    }

    // [a,b] with bounds: sign? (p | p/q | decimal | oo).
    expr_ptr parse_interval() {
        const token& open = cur();
        expect_punct("[");
        bound lo = parse_bound(/*upper=*/false);
        expect_punct(",");
        bound hi = parse_bound(/*upper=*/true);
        expect_punct("]");
        if (lo > hi) fail(open, "empty interval literal");
        return expr::constant(interval(lo, hi));
    }

    bound parse_bound(bool upper) {
        bool neg = false;
        if (at_punct("-") || at_punct("+")) neg = next().text == "-";
        if (at_keyword("oo")) {
            const token& t = next();
            if (neg != !upper)
                fail(t, upper ? "upper bound cannot be -oo" : "lower bound cannot be +oo");
            return neg ? bound::minus_inf() : bound::plus_inf();
        }
        if (cur().kind != tok_kind::number) fail(cur(), "expected interval bound");
        rational v = number_value();
        if (at_punct("/")) {
            const token& slash = next();
            if (cur().kind != tok_kind::number) fail(cur(), "expected denominator");
            rational d = number_value();
            if (d == 0) fail(slash, "zero denominator");
            v /= d;
        }
        return bound(neg ? rational(-v) : v);
    }

    // CFG construction. Points are allocated on demand; a statement chain
    // threads from a given source point to a given target point.
    struct build {
        std::uint32_t next_point = 0;
        std::vector<std::tuple<point_id, instr, point_id>> arcs;
        std::vector<source_assert> asserts;
        point_id alloc() { return next_point++; }
    };

    static void compile_block(build& b, const stmt_list& body, point_id from, point_id to) {
        point_id cur = from;
        for (std::size_t i = 0; i < body.size(); ++i) {
            point_id dst = i + 1 == body.size() ? to : b.alloc();
            compile_stmt(b, body[i], cur, dst);
            cur = dst;
        }
    }

    static void compile_guarded(build& b, const cond& c, bool positive, point_id from,
                                const stmt_list& body, point_id to) {
        instr guard = instr::test(c.lhs, positive ? c.cmp : cmp_negate(c.cmp));
        if (body.empty()) {
            b.arcs.emplace_back(from, guard, to);
            return;
        }
        point_id head = b.alloc();
        b.arcs.emplace_back(from, guard, head);
        compile_block(b, body, head, to);
    }

    static void compile_stmt(build& b, const stmt& s, point_id from, point_id to) {
        switch (s.k) {
            case stmt::kind::assign:
                b.arcs.emplace_back(from, instr::assign(s.target, s.rhs), to);
                return;
            case stmt::kind::branch:
                compile_guarded(b, s.guard, true, from, s.then_body, to);
                compile_guarded(b, s.guard, false, from, s.else_body, to);
                return;
            case stmt::kind::loop:
                // `from` is the loop head: body arcs return to it, the
                // negated guard leaves it.
                compile_guarded(b, s.guard, true, from, s.then_body, from);
                b.arcs.emplace_back(from, instr::test(s.guard.lhs, cmp_negate(s.guard.cmp)), to);
                return;
            case stmt::kind::assume_c:
                b.arcs.emplace_back(from, instr::test(s.guard.lhs, s.guard.cmp), to);
                return;
            case stmt::kind::assert_c:
                b.arcs.emplace_back(from, instr::test(s.guard.lhs, s.guard.cmp), to);
                b.asserts.push_back({from, instr::test(s.guard.lhs, s.guard.cmp), s.guard.line});
                return;
        }
    }

    compiled_program desugar(const stmt_list& body) {
        build b;
        point_id entry = b.alloc();
        point_id exit = body.empty() ? entry : b.alloc();
        compile_block(b, body, entry, exit);
        program prog(var_names_, entry, b.next_point);
        for (auto& [src, ins, dst] : b.arcs) prog.add_arc(src, std::move(ins), dst);
        for (point_id l = 0; l < prog.point_count(); ++l)
            prog.set_point_name(l, "L" + std::to_string(l));
        prog.set_point_name(entry, "entry");
        if (exit != entry) prog.set_point_name(exit, "exit");
        return {std::move(prog), mode_, mode_declared_, std::move(b.asserts)};
    }
};

}  // namespace detail

inline compiled_program parse_program(const std::string& text) {
    return detail::parser(text).run();
}

}  // namespace linea
