#include "funnel/expr.hpp"

#include <cassert>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdlib>

namespace funnel {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

ExprPtr make_const(const Interval& v) {
    Expr e;
    e.op = Expr::Op::Const;
    e.value = v;
    return node(std::move(e));
}

ExprPtr make_unary(Expr::Op op, ExprPtr a) {
    Expr e;
    e.op = op;
    e.a = std::move(a);
    return node(std::move(e));
}

ExprPtr make_binary(Expr::Op op, ExprPtr a, ExprPtr b) {
    Expr e;
    e.op = op;
    e.a = std::move(a);
    e.b = std::move(b);
    return node(std::move(e));
}

// Literal "digits[.digits]" as an interval: exact point when the value is a
// dyadic rational representable in double, else the 1-ulp outward hull of the
// nearest double.
Interval literal_value(const std::string& text, std::size_t pos) {
    std::size_t dot = text.find('.');
    std::string digits = text;
    int frac = 0;
    if (dot != std::string::npos) {
        digits = text.substr(0, dot) + text.substr(dot + 1);
        frac = static_cast<int>(text.size() - dot - 1);
    }
    while (digits.size() > 1 && digits[0] == '0') digits.erase(digits.begin());
    if (digits.size() <= 18) {
        std::int64_t v = 0;
        for (char ch : digits) v = v * 10 + (ch - '0');
        // value = v / (2^frac * 5^frac); dyadic iff 5^frac divides v.
        std::int64_t q = v;
        int f = frac;
        while (f > 0 && q % 5 == 0) {
            q /= 5;
            --f;
        }
        if (f == 0 && q <= (std::int64_t{1} << 53)) {
            double d = std::ldexp(static_cast<double>(q), -frac);
            double gd = grid_down(d), gu = grid_up(d);
            return Interval(gd, gu);
        }
    }
    double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v))
        throw SyntaxError(pos, "literal out of range: " + text);
    return Interval(grid_down(prev_double(v)), grid_up(next_double(v)));
}

struct Parser {
    const std::string& s;
    int n;
    std::size_t i = 0;

    explicit Parser(const std::string& text, int dim) : s(text), n(dim) {}

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }

    bool peek(char c) {
        skip_ws();
        return i < s.size() && s[i] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++i;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what) {
        if (!accept(c)) throw SyntaxError(i, std::string("expected '") + c + "' " + what);
    }

    ExprPtr parse_expression() {
        ExprPtr lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = make_binary(Expr::Op::Add, lhs, parse_term());
            else if (accept('-'))
                lhs = make_binary(Expr::Op::Sub, lhs, parse_term());
            else
                return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        while (accept('*'))
            lhs = make_binary(Expr::Op::Mul, lhs, parse_factor());
        return lhs;
    }

    ExprPtr parse_factor() {
        if (accept('-')) return make_unary(Expr::Op::Neg, parse_factor());
        return parse_primary();
    }

    ExprPtr parse_primary() {
        skip_ws();
        if (i >= s.size()) throw SyntaxError(i, "unexpected end of input");
        char c = s[i];
        if (c == '(') {
            ++i;
            ExprPtr e = parse_expression();
            expect(')', "to close parenthesis");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        throw SyntaxError(i, std::string("unexpected character '") + c + "'");
    }

    ExprPtr parse_number() {
        std::size_t start = i;
        bool saw_digit = false, saw_dot = false;
        while (i < s.size()) {
            char c = s[i];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                saw_digit = true;
                ++i;
            } else if (c == '.' && !saw_dot) {
                saw_dot = true;
                ++i;
            } else {
                break;
            }
        }
        if (!saw_digit) throw SyntaxError(start, "malformed number");
        return make_const(literal_value(s.substr(start, i - start), start));
    }

    ExprPtr parse_ident() {
        std::size_t start = i;
        while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])))) ++i;
        std::string id = s.substr(start, i - start);
        if (id == "x") {
            Expr e;
            e.op = Expr::Op::X;
            return node(std::move(e));
        }
        if (id == "abs" || id == "scbrt") {
            expect('(', "after function name");
            ExprPtr a = parse_expression();
            expect(')', "to close call");
            return make_unary(id == "abs" ? Expr::Op::Abs : Expr::Op::Scbrt, a);
        }
        if (id == "min" || id == "max") {
            expect('(', "after function name");
            ExprPtr a = parse_expression();
            expect(',', "between arguments");
            ExprPtr b = parse_expression();
            expect(')', "to close call");
            return make_binary(id == "min" ? Expr::Op::Min : Expr::Op::Max, a, b);
        }
        if (id[0] == 'y') {
            if (id.size() == 1) {
                if (n == 1) {
                    Expr e;
                    e.op = Expr::Op::Y;
                    e.yindex = 1;
                    return node(std::move(e));
                }
                throw SyntaxError(start, "bare 'y' is only valid in dimension 1; use y1..yn");
            }
            int idx = 0;
            for (std::size_t k = 1; k < id.size(); ++k) {
                if (!std::isdigit(static_cast<unsigned char>(id[k])))
                    throw SyntaxError(start, "unknown identifier '" + id + "'");
                idx = idx * 10 + (id[k] - '0');
                if (idx > 1000) throw DimensionError(start, "variable index too large");
            }
            if (idx < 1 || idx > n)
                throw DimensionError(start, "variable " + id + " exceeds dimension " + std::to_string(n));
            Expr e;
            e.op = Expr::Op::Y;
            e.yindex = idx;
            return node(std::move(e));
        }
        throw SyntaxError(start, "unknown identifier '" + id + "'");
    }
};

} // namespace

ExprPtr parse_expr_text(const std::string& text, int n) {
    Parser p(text, n);
    ExprPtr e = p.parse_expression();
    p.skip_ws();
    if (p.i != text.size()) throw SyntaxError(p.i, "trailing input");
    return e;
}

RhsDef parse_rhs(const std::string& text, int n) {
    if (n < 1) throw DimensionError(0, "dimension must be >= 1");
    RhsDef r;
    r.dim = n;
    Parser p(text, n);
    for (;;) {
        r.comps.push_back(p.parse_expression());
        p.skip_ws();
        if (p.accept(';')) continue;
        if (p.i != text.size()) throw SyntaxError(p.i, "trailing input");
        break;
    }
    if (static_cast<int>(r.comps.size()) != n)
        throw DimensionError(text.size(),
                             "expected " + std::to_string(n) + " components, got " +
                                 std::to_string(r.comps.size()));
    return r;
}

namespace {

std::string render_const(const Interval& v) {
    char buf[64];
    if (v.is_point())
        std::snprintf(buf, sizeof buf, "%.17g", v.lo);
    else
        std::snprintf(buf, sizeof buf, "%.17g", v.mid());
    return buf;
}

} // namespace

std::string print_expr(const ExprPtr& e) {
    switch (e->op) {
    case Expr::Op::Const: return render_const(e->value);
    case Expr::Op::X: return "x";
    case Expr::Op::Y: return "y" + std::to_string(e->yindex);
    case Expr::Op::Add: return "(" + print_expr(e->a) + "+" + print_expr(e->b) + ")";
    case Expr::Op::Sub: return "(" + print_expr(e->a) + "-" + print_expr(e->b) + ")";
    case Expr::Op::Mul: return "(" + print_expr(e->a) + "*" + print_expr(e->b) + ")";
    case Expr::Op::Neg: return "(-" + print_expr(e->a) + ")";
    case Expr::Op::Abs: return "abs(" + print_expr(e->a) + ")";
    case Expr::Op::Min: return "min(" + print_expr(e->a) + "," + print_expr(e->b) + ")";
    case Expr::Op::Max: return "max(" + print_expr(e->a) + "," + print_expr(e->b) + ")";
    case Expr::Op::Scbrt: return "scbrt(" + print_expr(e->a) + ")";
    }
    return "?";
}

std::string print_rhs(const RhsDef& r) {
    std::string out;
    for (std::size_t k = 0; k < r.comps.size(); ++k) {
        if (k) out += "; ";
        out += print_expr(r.comps[k]);
    }
    return out;
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->op != b->op) return false;
    switch (a->op) {
    case Expr::Op::Const: return a->value.lo == b->value.lo && a->value.hi == b->value.hi;
    case Expr::Op::X: return true;
    case Expr::Op::Y: return a->yindex == b->yindex;
    case Expr::Op::Neg:
    case Expr::Op::Abs:
    case Expr::Op::Scbrt: return expr_equal(a->a, b->a);
    default: return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
    }
}

Interval eval_expr(const ExprPtr& e, const IBox& box) {
    switch (e->op) {
    case Expr::Op::Const: return e->value;
    case Expr::Op::X: return box[0];
    case Expr::Op::Y: return box[static_cast<std::size_t>(e->yindex)];
    case Expr::Op::Add: return eval_expr(e->a, box) + eval_expr(e->b, box);
    case Expr::Op::Sub: return eval_expr(e->a, box) - eval_expr(e->b, box);
    case Expr::Op::Mul: return eval_expr(e->a, box) * eval_expr(e->b, box);
    case Expr::Op::Neg: return -eval_expr(e->a, box);
    case Expr::Op::Abs: return abs(eval_expr(e->a, box));
    case Expr::Op::Min: return min(eval_expr(e->a, box), eval_expr(e->b, box));
    case Expr::Op::Max: return max(eval_expr(e->a, box), eval_expr(e->b, box));
    case Expr::Op::Scbrt: return scbrt(eval_expr(e->a, box));
    }
    return Interval(0.0);
}

IBox eval_box(const RhsDef& r, const IBox& box) {
    assert(box.size() == static_cast<std::size_t>(r.dim) + 1);
    IBox out(static_cast<std::size_t>(r.dim));
    for (std::size_t k = 0; k < r.comps.size(); ++k)
        out[k] = eval_expr(r.comps[k], box);
    return out;
}

} // namespace funnel
