#ifndef FUNNEL_EXTENDER_HPP
#define FUNNEL_EXTENDER_HPP

#include <functional>

#include "funnel/solver.hpp"

namespace funnel {

// One glued piece of the growing solution enclosure. The tube may extend past
// [lo, hi]; only that subrange belongs to the glued union. The per-branch
// solve result is retained for decoding and sign checks.
struct Segment {
    double lo = 0.0;
    double hi = 0.0;
    Tube tube;  // nodewise hull over the branches of `solve`
    SolveResult solve;
};

struct SideRecord {
    bool attempted = false;
    bool grew = false;
    std::string frozen_reason;
    double edge_before = 0.0;
    double edge_after = 0.0;
    double delta = 0.0;
    double M = 1.0;
    double anchor_rad = 0.0;
};

struct RoundRecord {
    int round = 0;  // 1-based; round 1 is the initial solve at (x0, y0)
    double a = 0.0;
    double b = 0.0;
    SideRecord left, right;
};

struct ExtensionState {
    int rounds_done = 0;
    double a = 0.0;
    double b = 0.0;
    std::vector<Segment> segments;  // ordered by lo; segments[0] spans x0
    std::vector<RoundRecord> records;
    bool left_growing = true;
    bool right_growing = true;
    std::string left_frozen_reason, right_frozen_reason;
    IBox left_value, right_value;  // endpoint enclosures

    const Segment* segment_at(double x) const;
};

// Iterated local-solve loop: round 1 solves at (x0, y0); each later round
// restarts at the current endpoints with the previous segments' endpoint
// enclosures as interval anchors and glues the new segments on. A side whose
// restart cannot verify an interior ball (or whose anchor enclosure grew too
// wide for the ball margin) freezes permanently. on_round, when set, streams
// each record as it completes.
using RoundSink = std::function<void(const RoundRecord&)>;
ExtensionState extend(const IVPInstance& inst, int rounds, const SolveConfig& cfg,
                      const RoundSink& on_round = {});

// Enclosure of y(x) across the glued union.
IBox evaluate_glued(const ExtensionState& st, double x);

// Eq.-15-style growth audit: every growing round must advance its endpoint by
// strictly more than delta/(2M) of the box it used.
struct StepBoundReport {
    struct Row {
        int round;
        char side;  // 'L' or 'R'
        double advance_down;
        double required_up;
        bool ok;
    };
    std::vector<Row> rows;
    bool all_ok = true;
};

StepBoundReport step_lower_bound_check(const ExtensionState& st);

} // namespace funnel

#endif
