#ifndef FUNNEL_SOLVER_HPP
#define FUNNEL_SOLVER_HPP

#include <cstdint>
#include <string>

#include "funnel/tube.hpp"

namespace funnel {

struct SolveConfig {
    int depth = 8;
    int refine_rounds = 30;
    int max_bisections = 64;
    int precision = 53;
    // Node-width goal: branches at or below it are not split further, and
    // solve_unique only accepts a certificate at most this wide.
    double target_width = 1e-2;
    int threads = 1;
};

struct BranchTube {
    std::uint64_t id = 0;
    std::string split_path;  // "", "L", "LR", ... from the root
    Verdict verdict = Verdict::Unknown;
    Tube tube;
};

// confirmed: branches with a strict Inside certificate (a solution exists in
// each). undecided: unresolved branches. Only Empty-certified branches are
// discarded, so confirmed + undecided covers every solution on [a,b].
struct SolveResult {
    LocalBox box;
    std::vector<BranchTube> confirmed;
    std::vector<BranchTube> undecided;
    std::uint64_t pruned_count = 0;
    int bisections_used = 0;

    std::vector<const BranchTube*> all_tubes() const;
    // Nodewise hull over confirmed + undecided.
    Tube union_tube() const;
};

// Branch-and-prune enclosure of the full local solution set at (x,y).
SolveResult enclose_all(const IVPInstance& inst, double x, const std::vector<double>& y,
                        const SolveConfig& cfg);

// Same loop from a prepared local box and an interval anchor enclosure
// (used by the extender when restarting at segment endpoints).
SolveResult enclose_all_anchored(const IVPInstance& inst, const LocalBox& lb,
                                 const IBox& anchor_value, const SolveConfig& cfg);

// The single confirmed tube when the result is one certified branch, nothing
// undecided, and the tube meets the width target; throws NotProvenUnique
// otherwise (genuine funnel or insufficient budget).
Tube solve_unique(const IVPInstance& inst, double x, const std::vector<double>& y,
                  const SolveConfig& cfg);

} // namespace funnel

#endif
