#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "funnel/tube.hpp"

using namespace funnel;

namespace {

// Hand-built local windows for direct tube tests; select_local_box has its
// own suite.
LocalBox window(double a, double b, double x0, double delta, double M, double y0) {
    LocalBox lb;
    lb.a = a;
    lb.b = b;
    lb.x0 = x0;
    lb.step = b - x0;
    lb.delta = delta;
    lb.M = M;
    lb.y0 = {y0};
    lb.K = IBox{Interval(a, b), Interval(y0 - delta, y0 + delta)};
    return lb;
}

IBox point_anchor(double v) { return IBox{Interval(v)}; }

Rhs expr_rhs(const char* text) { return Rhs{parse_rhs(text, 1)}; }

} // namespace

TEST_CASE("initial tube is the class-D cone at grid resolution") {
    LocalBox lb = window(-0.375, 0.375, 0.0, 0.5, 1.0, 0.0);
    Tube t = initial_tube(lb, point_anchor(0.0), 1);
    REQUIRE(t.node_count() == 3);
    CHECK(t.nodes[0][0].lo == -0.375);
    CHECK(t.nodes[0][0].hi == 0.375);
    CHECK(t.nodes[1][0].lo == 0.0);
    CHECK(t.nodes[1][0].hi == 0.0);
    CHECK(t.nodes[2][0].lo == -0.375);
    CHECK(t.nodes[2][0].hi == 0.375);
}

TEST_CASE("interval anchors widen the cone by their width") {
    LocalBox lb = window(-0.375, 0.375, 0.0, 0.5, 1.0, 0.0);
    IBox anchor{Interval(-0.0625, 0.0625)};
    Tube t = initial_tube(lb, anchor, 1);
    CHECK(t.nodes[0][0].lo == -0.4375);
    CHECK(t.nodes[0][0].hi == 0.4375);
    CHECK(t.nodes[1][0].lo == -0.0625);
    CHECK(t.nodes[1][0].hi == 0.0625);
}

TEST_CASE("delta ball clips the cone when M|x - x0| exceeds delta") {
    LocalBox lb = window(-0.375, 0.375, 0.0, 0.5, 2.0, 0.0);
    Tube t = initial_tube(lb, point_anchor(0.0), 1);
    // cone would be +-0.75 at the edges; the ball is +-0.5
    CHECK(t.nodes[0][0].lo == -0.5);
    CHECK(t.nodes[0][0].hi == 0.5);
}

TEST_CASE("picard: zero rhs reproduces the anchor everywhere") {
    LocalBox lb = window(-0.375, 0.375, 0.0, 0.5, 1.0, 0.0);
    Tube t = initial_tube(lb, point_anchor(0.0), 4);
    auto img = picard_step(expr_rhs("0"), lb, t);
    REQUIRE(img);
    for (std::size_t j = 0; j < img->node_count(); ++j) {
        CHECK(img->nodes[j][0].lo == 0.0);
        CHECK(img->nodes[j][0].hi == 0.0);
    }
}

TEST_CASE("picard: constant rhs integrates exactly on the dyadic grid") {
    LocalBox lb = window(-0.375, 0.375, 0.0, 0.5, 2.0, 0.0);
    Tube t = initial_tube(lb, point_anchor(0.0), 4);
    auto img = picard_step(expr_rhs("1"), lb, t);
    REQUIRE(img);
    for (std::size_t j = 0; j < img->node_count(); ++j) {
        double expect = img->xs[j];
        CHECK(img->nodes[j][0].lo == expect);
        CHECK(img->nodes[j][0].hi == expect);
    }
}

TEST_CASE("picard iteration encloses the exponential") {
    LocalBox lb = window(0.0, 0.5, 0.0, 1.0, 3.0, 1.0);
    Tube t = initial_tube(lb, point_anchor(1.0), 10);
    for (int it = 0; it < 20; ++it) {
        auto img = picard_step(expr_rhs("y1"), lb, t);
        REQUIRE(img);
        auto met = intersect_nodewise(t, *img);
        REQUIRE(met);
        t = *met;
    }
    const double e_half = 1.6487212707001282;
    Interval end = t.nodes.back()[0];
    CHECK(end.lo <= e_half);
    CHECK(e_half <= end.hi);
    CHECK(end.width_up() <= 1e-2);
    // every node encloses e^x
    for (std::size_t j = 0; j < t.node_count(); ++j) {
        double ex = std::exp(t.xs[j]);
        REQUIRE(t.nodes[j][0].lo <= ex);
        REQUIRE(ex <= t.nodes[j][0].hi);
    }
}

TEST_CASE("refine contracts monotonically and stops at the fixpoint") {
    LocalBox lb = window(0.0, 0.5, 0.0, 1.0, 3.0, 1.0);
    Tube t0 = initial_tube(lb, point_anchor(1.0), 10);
    RefineOutcome out = refine(expr_rhs("y1"), lb, t0, 40);
    CHECK(out.verdict == Verdict::Unknown);
    CHECK(out.tube.nodes.back()[0].width_up() <= 1e-2);
    for (std::size_t j = 0; j < out.tube.node_count(); ++j) {
        REQUIRE(out.tube.nodes[j][0].lo >= t0.nodes[j][0].lo);
        REQUIRE(out.tube.nodes[j][0].hi <= t0.nodes[j][0].hi);
        double ex = std::exp(out.tube.xs[j]);
        REQUIRE(out.tube.nodes[j][0].lo <= ex);
        REQUIRE(ex <= out.tube.nodes[j][0].hi);
    }
}

TEST_CASE("refine detects a tube narrowed away from all solutions") {
    LocalBox lb = window(0.0, 0.5, 0.0, 1.0, 3.0, 1.0);
    Tube t = initial_tube(lb, point_anchor(1.0), 6);
    for (std::size_t j = 1; j < t.node_count(); ++j)
        t.nodes[j][0] = Interval(0.99, 1.01);  // pretends y stays constant
    RefineOutcome out = refine(expr_rhs("y1"), lb, std::move(t), 20);
    CHECK(out.verdict == Verdict::Empty);
}

TEST_CASE("inclusion checks") {
    LocalBox lb = window(-0.375, 0.375, 0.0, 0.5, 1.0, 0.0);
    Tube cone = initial_tube(lb, point_anchor(0.0), 4);
    CHECK(check_inclusion(expr_rhs("0"), lb, cone) == Verdict::Inside);

    Tube shifted = cone;
    for (std::size_t j = 0; j < shifted.node_count(); ++j)
        if (j != static_cast<std::size_t>(shifted.anchor))
            shifted.nodes[j][0] = Interval(0.4, 0.45);
    CHECK(check_inclusion(expr_rhs("0"), lb, shifted) == Verdict::Empty);

    // exponential tube mid-refinement must never read Empty
    LocalBox lbe = window(0.0, 0.5, 0.0, 1.0, 3.0, 1.0);
    Tube te = initial_tube(lbe, point_anchor(1.0), 8);
    RefineOutcome out = refine(expr_rhs("y1"), lbe, std::move(te), 5);
    CHECK(out.verdict != Verdict::Empty);
    CHECK(check_inclusion(expr_rhs("y1"), lbe, out.tube) != Verdict::Empty);
}

TEST_CASE("evaluation widens by M times the distance to the nearest node") {
    LocalBox lb = window(0.0, 0.5, 0.0, 1.0, 3.0, 1.0);
    Tube t = initial_tube(lb, point_anchor(1.0), 10);
    RefineOutcome out = refine(expr_rhs("y1"), lb, std::move(t), 40);
    // exact grid node
    IBox at_node = evaluate(out.tube, out.tube.xs[7]);
    CHECK(at_node[0].lo == out.tube.nodes[7][0].lo);
    CHECK(at_node[0].hi == out.tube.nodes[7][0].hi);
    // off-grid point
    IBox v = evaluate(out.tube, 0.3);
    const double e_03 = 1.3498588075760032;
    CHECK(v[0].lo <= e_03);
    CHECK(e_03 <= v[0].hi);
    CHECK_THROWS_AS(evaluate(out.tube, 0.75), OutOfRange);
    CHECK_THROWS_AS(evaluate(out.tube, -0.1), OutOfRange);
}

TEST_CASE("bisect splits at the midpoint and propagates the cone") {
    LocalBox lb = window(-0.375, 0.375, 0.0, 0.5, 1.0, 0.0);
    Tube t = initial_tube(lb, point_anchor(0.0), 2);
    auto kids = bisect(t, static_cast<int>(t.node_count()) - 1, 0);
    REQUIRE(kids[0]);
    REQUIRE(kids[1]);
    const Interval& parent_end = t.nodes.back()[0];
    const Interval& lo_end = kids[0]->nodes.back()[0];
    const Interval& hi_end = kids[1]->nodes.back()[0];
    CHECK(lo_end.lo == parent_end.lo);
    CHECK(lo_end.hi == parent_end.mid());
    CHECK(hi_end.lo == parent_end.mid());
    CHECK(hi_end.hi == parent_end.hi);
    CHECK(hull(lo_end, hi_end).contains(parent_end));

    // splitting a point anchor is degenerate
    CHECK_THROWS_AS(bisect(t, t.anchor, 0), DegenerateSplit);
}

TEST_CASE("bisection keeps every sampled funnel solution in the union") {
    // s-amplifier funnel anchored at (0, 0): solutions +-(x^2(3-2x)-...)^{3/2}
    LocalBox lb = window(0.0, 0.25, 0.0, 0.5, 3.25, 0.0);
    Rhs s = expr_rhs("9*x*(1-x)*scbrt(y1)");
    Tube t = initial_tube(lb, point_anchor(0.0), 6);
    RefineOutcome ref = refine(s, lb, std::move(t), 10);
    REQUIRE(ref.verdict == Verdict::Unknown);
    auto kids = bisect(ref.tube, static_cast<int>(ref.tube.node_count()) - 1, 0);
    for (double c : {0.0, 0.05, 0.1}) {
        for (int sgn : {1, -1}) {
            for (std::size_t j = 0; j < ref.tube.node_count(); ++j) {
                double x = ref.tube.xs[j];
                double y = closed_solution_s(0.0, sgn, c, x);
                bool in0 = kids[0] && kids[0]->nodes[j][0].contains(y);
                bool in1 = kids[1] && kids[1]->nodes[j][0].contains(y);
                REQUIRE((in0 || in1));
            }
        }
    }
}

TEST_CASE("nodewise hull covers both inputs") {
    LocalBox lb = window(-0.375, 0.375, 0.0, 0.5, 1.0, 0.0);
    Tube a = initial_tube(lb, IBox{Interval(-0.1, 0.0)}, 3);
    Tube b = initial_tube(lb, IBox{Interval(0.0, 0.2)}, 3);
    Tube h = hull_tubes({a, b});
    for (std::size_t j = 0; j < h.node_count(); ++j) {
        CHECK(h.nodes[j][0].contains(a.nodes[j][0]));
        CHECK(h.nodes[j][0].contains(b.nodes[j][0]));
    }
}
