#ifndef FUNNEL_DECODE_HPP
#define FUNNEL_DECODE_HPP

#include "funnel/extender.hpp"
#include "funnel/solver.hpp"

namespace funnel {

// A complete covering family of enclosures over one x-range: together the
// tubes contain every solution there, and a solution exists through the
// family's anchor. Individual tubes flagged `inside` each certify a solution
// of their own.
struct WitnessGroup {
    std::string id;
    std::vector<Tube> tubes;
    std::vector<bool> inside;
    double lo = 0.0, hi = 0.0;

    bool covers(double x) const { return lo <= x && x <= hi; }
};

struct DecodeInput {
    std::vector<WitnessGroup> groups;
    double cover_lo = 0.0, cover_hi = 0.0;
    int cell_budget = 0;
};

DecodeInput decode_input_from_solve(const SolveResult& res, int cell_budget);
DecodeInput decode_input_from_extension(const ExtensionState& st, int cell_budget);

struct DecodeConfig {
    // Budget for the decoder's own gadget-scale re-solve (y' = g_p over
    // [0,4] at unit scale, where the decision thresholds are +-1).
    SolveConfig gadget_solve;
    int gadget_rounds = 48;
    bool allow_gadget_resolve = true;
};

struct DecodedBit {
    int i = 0;
    int bit = 0;
    bool certified = false;
    int cell_m = -1;
    double sample_x = 0.0;
    std::string witness;  // which group/tube produced it, or "heuristic"
};

struct DecodeReport {
    std::vector<DecodedBit> bits;
    std::vector<int> unavailable;  // indices with no usable cell
    bool all_certified() const;
};

// Reads LLPO answers off enclosures. Bit i is available when some cell
// m = <k,i> has its sample point t_m = -2^-m + 2^-(m+2) inside the covered
// interval; the decision thresholds there are +-2^(-2(m+3)) (the images of
// the gadget-level thresholds +-1 under the cell scaling). A certified bit
// needs an Inside tube that decides an inequality (a solution threads it) or
// unanimity across one complete covering family (every solution decides it,
// and solutions exist). When the artifact is too coarse, the decoder
// re-solves the cell's gadget at unit scale, where the same implications
// read y(2) against +-1; the last resort is an uncertified sign-majority
// guess at the sample point.
DecodeReport decode_llpo(const DecodeInput& input, const std::vector<BitStream>& streams,
                         const std::vector<int>& indices, const DecodeConfig& cfg);

} // namespace funnel

#endif
