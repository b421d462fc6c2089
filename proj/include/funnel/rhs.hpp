#ifndef FUNNEL_RHS_HPP
#define FUNNEL_RHS_HPP

#include <variant>

#include "funnel/expr.hpp"
#include "funnel/gadgets.hpp"

namespace funnel {

// Right-hand side of y' = f(x,y): either a parsed expression vector or one of
// the built-in gadget families (piecewise in x, outside the expression
// grammar on purpose).

struct SingleGadgetRhs {
    BitStream p;
};

struct ParallelGadgetRhs {
    std::vector<BitStream> streams;
    int cell_budget = 12;
};

using Rhs = std::variant<RhsDef, SingleGadgetRhs, ParallelGadgetRhs>;

int rhs_dim(const Rhs& r);

// box = (x, y1..yn); result has length n.
IBox eval_rhs(const Rhs& r, const IBox& box);

} // namespace funnel

#endif
