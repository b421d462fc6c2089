#include "funnel/rhs.hpp"

namespace funnel {

int rhs_dim(const Rhs& r) {
    if (const auto* e = std::get_if<RhsDef>(&r)) return e->dim;
    return 1;  // gadget families are scalar ODEs
}

IBox eval_rhs(const Rhs& r, const IBox& box) {
    if (const auto* e = std::get_if<RhsDef>(&r)) return eval_box(*e, box);
    if (const auto* g = std::get_if<SingleGadgetRhs>(&r))
        return IBox{eval_g(g->p, box[0], box[1])};
    const auto& pg = std::get<ParallelGadgetRhs>(r);
    return IBox{eval_parallel_f(pg.streams, pg.cell_budget, box[0], box[1])};
}

} // namespace funnel
