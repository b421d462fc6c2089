#ifndef FUNNEL_TUBE_HPP
#define FUNNEL_TUBE_HPP

#include <array>
#include <optional>

#include "funnel/instance.hpp"

namespace funnel {

enum class Verdict { Inside, Empty, Unknown };

// Finite-resolution enclosure of a compact set of Lipschitz-M functions on
// [x_lo, x_hi] pinned at the anchor node: a dyadic grid of node boxes plus
// the Lipschitz bound. A function y belongs to the tube iff it is
// Lipschitz-M, y(x0) lies in anchor_value, and y(x_j) lies in nodes[j] for
// every grid node.
struct Tube {
    std::vector<double> xs;      // 2^depth + 1 node positions
    std::vector<IBox> nodes;     // one box of dimension n per node
    int depth = 0;
    double lip = 1.0;            // M
    int anchor = 0;              // j0 with xs[j0] == x0
    IBox anchor_value;
    IBox clip;                   // delta-ball around the local y0, outward-rounded

    double x_lo() const { return xs.front(); }
    double x_hi() const { return xs.back(); }
    int dim() const { return static_cast<int>(anchor_value.size()); }
    std::size_t node_count() const { return nodes.size(); }
    double max_width() const;
    // Upper bound on each node's distance to the next (used for Lipschitz
    // propagation); cell j spans [xs[j], xs[j+1]].
    double cell_width_up(std::size_t j) const { return sub_up(xs[j + 1], xs[j]); }
    double cell_width_down(std::size_t j) const { return sub_down(xs[j + 1], xs[j]); }
};

// The class-D cone at grid resolution: node j is anchor_value widened by
// +-M|x_j - x0|, intersected with the delta ball.
Tube initial_tube(const LocalBox& lb, const IBox& anchor_value, int depth);

// Lipschitz closure: intersect every node with its neighbors' +-M h bands and
// the anchor cone. Returns nullopt when some intersection empties (no
// function threads the tube).
std::optional<Tube> cone_closure(Tube t);

// Interval Picard image T#(t): node j = current anchor node + first-order
// interval Riemann sum of f over the cells between x0 and x_j (cell
// y-argument: hull of endpoint nodes widened by M h/2), re-intersected with
// the cone and the delta ball. nullopt means the tube provably contains no
// solution.
std::optional<Tube> picard_step(const Rhs& rhs, const LocalBox& lb, const Tube& t);

struct RefineOutcome {
    Tube tube;
    Verdict verdict = Verdict::Unknown;  // Empty or Unknown; never Inside
    int rounds_run = 0;
};

// Iterates t <- t meet T#(t); stops early once no endpoint moves.
RefineOutcome refine(const Rhs& rhs, const LocalBox& lb, Tube t, int rounds);

// Inside:  T#(t) strictly inside t at every non-anchor node (>= 1 ulp
//          margins) and the tube is threadable, certifying a solution in t
//          (Schauder).
// Empty:   T#(t) misses t at some node; no solution threads t.
// Unknown: anything else.
Verdict check_inclusion(const Rhs& rhs, const LocalBox& lb, const Tube& t);

// Nearest-node evaluation widened by M * distance; contains y(x) for every
// solution in the tube. Throws OutOfRange outside [x_lo, x_hi].
IBox evaluate(const Tube& t, double x);

// Split node/component at its midpoint; children are cone-closed, and a
// child that empties under closure is dropped (it contains no solution).
// Splitting the anchor node also narrows the child's anchor_value. Throws
// DegenerateSplit when the chosen interval is too thin to split.
std::array<std::optional<Tube>, 2> bisect(const Tube& t, int node, int comp);

// Pad every non-anchor node outward (epsilon-inflation for fixed-point
// certification); the result is clipped to the delta ball.
Tube inflate(const Tube& t, double rel, double abs_pad);

// Nodewise hull of tubes over an identical grid.
Tube hull_tubes(const std::vector<Tube>& ts);

std::optional<Tube> intersect_nodewise(const Tube& a, const Tube& b);

} // namespace funnel

#endif
