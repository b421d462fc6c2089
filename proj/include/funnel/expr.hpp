#ifndef FUNNEL_EXPR_HPP
#define FUNNEL_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "funnel/errors.hpp"
#include "funnel/interval.hpp"

namespace funnel {

// Right-hand-side expression language: infix + - *, unary -, abs(e),
// min(e,e), max(e,e), scbrt(e), variables x and y1..yn, decimal literals.
// Dyadic literals are stored exactly; other decimals are outward-rounded
// at parse time.

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Op { Const, X, Y, Add, Sub, Mul, Neg, Abs, Min, Max, Scbrt };
    Op op;
    Interval value;  // Const
    int yindex = 0;  // Y, 1-based
    ExprPtr a, b;
};

// One component per dimension.
struct RhsDef {
    int dim = 0;
    std::vector<ExprPtr> comps;
};

// Throws SyntaxError / DimensionError.
RhsDef parse_rhs(const std::string& text, int n);
ExprPtr parse_expr_text(const std::string& text, int n);

// Canonical fully-parenthesized rendering; reparses to an identical tree.
std::string print_expr(const ExprPtr& e);
std::string print_rhs(const RhsDef& r);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// box = (x, y1..yn), length n+1.
Interval eval_expr(const ExprPtr& e, const IBox& box);
IBox eval_box(const RhsDef& r, const IBox& box);

} // namespace funnel

#endif
