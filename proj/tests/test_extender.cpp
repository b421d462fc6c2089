#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "funnel/extender.hpp"

using namespace funnel;

namespace {

IVPInstance expr_instance(const char* text, double x0, double y0) {
    IVPInstance inst;
    inst.dim = 1;
    inst.rhs = parse_rhs(text, 1);
    inst.domain = auto_growing_domain(1);
    inst.x0 = x0;
    inst.y0 = {y0};
    return inst;
}

} // namespace

TEST_CASE("zero rhs: endpoints march by the hand-traced steps") {
    SolveConfig cfg;
    cfg.depth = 5;
    ExtensionState st = extend(expr_instance("0", 0.0, 0.0), 3, cfg);
    REQUIRE(st.rounds_done == 3);
    // delta = 1/2, M = 1, step = 3/8 in every round near the origin (the
    // certified tubes carry a hair of inflation, so later steps may shed
    // an ulp-scale sliver).
    CHECK(st.records[0].b == 0.375);
    CHECK(st.records[1].b == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(st.records[2].b == doctest::Approx(1.125).epsilon(1e-9));
    CHECK(st.records[2].a == doctest::Approx(-1.125).epsilon(1e-9));
    double min_step = 1e9;
    for (const auto& rec : st.records)
        if (rec.right.grew && rec.round > 1)
            min_step = std::min(min_step, rec.right.edge_after - rec.right.edge_before);
    CHECK(st.b >= st.records[0].b + 2 * min_step - 1e-15);
    // enclosure stays pinned to zero; off-grid points carry M*dist slack
    double h = 0.75 / 32.0;
    for (double x : {-1.0, -0.4, 0.0, 0.6, 1.1}) {
        IBox v = evaluate_glued(st, x);
        REQUIRE(v[0].contains(0.0));
        REQUIRE(v[0].width_up() <= h + 1e-9);
    }
}

TEST_CASE("unit slope rhs: every growing round clears the Eq-15 margin") {
    SolveConfig cfg;
    cfg.depth = 6;
    ExtensionState st = extend(expr_instance("1", 0.0, 0.0), 5, cfg);
    StepBoundReport rep = step_lower_bound_check(st);
    CHECK(rep.all_ok);
    REQUIRE(!rep.rows.empty());
    for (const auto& row : rep.rows) {
        CHECK(row.ok);
        CHECK(row.advance_down > row.required_up);
    }
    for (double x : {-1.0, -0.25, 0.5, 1.2}) {
        if (x < st.a || x > st.b) continue;
        IBox v = evaluate_glued(st, x);
        REQUIRE(v[0].contains(x));
    }
}

TEST_CASE("quadratic blow-up stays left of x = 1") {
    SolveConfig cfg;
    cfg.depth = 8;
    ExtensionState st = extend(expr_instance("y1*y1", 0.0, 1.0), 8, cfg);
    REQUIRE(st.rounds_done == 8);
    for (const auto& rec : st.records) CHECK(rec.b < 1.0);
    // monotone growth while growing
    for (std::size_t r = 1; r < st.records.size(); ++r) {
        CHECK(st.records[r].b > st.records[r - 1].b);
        CHECK(st.records[r].a < st.records[r - 1].a);
    }
    // blow-up oracle 1/(1-x) threads the glued tube
    for (int k = 0; k < 40; ++k) {
        double x = st.a + (st.b - st.a) * k / 39.0;
        IBox v = evaluate_glued(st, x);
        REQUIRE(v[0].contains(1.0 / (1.0 - x)));
    }
}

TEST_CASE("junction consistency: new anchors sit inside the previous segment") {
    SolveConfig cfg;
    cfg.depth = 6;
    ExtensionState st = extend(expr_instance("y1", 0.0, 1.0), 4, cfg);
    REQUIRE(st.segments.size() >= 3);
    for (std::size_t s = 0; s + 1 < st.segments.size(); ++s) {
        const Segment& leftseg = st.segments[s];
        const Segment& rightseg = st.segments[s + 1];
        double junction = leftseg.hi;
        REQUIRE(junction == rightseg.lo);
        // one of the two segments was glued onto the other there
        const Tube& lt = leftseg.tube;
        const Tube& rt = rightseg.tube;
        IBox lv = evaluate(lt, junction);
        IBox rv = evaluate(rt, junction);
        bool l_covers_r = lv[0].contains(rt.anchor_value[0]);
        bool r_covers_l = rv[0].contains(lt.anchor_value[0]);
        REQUIRE((l_covers_r || r_covers_l));
        // and the exponential threads every junction enclosure
        REQUIRE(lv[0].contains(std::exp(junction)));
        REQUIRE(rv[0].contains(std::exp(junction)));
    }
}

TEST_CASE("funnel continuations stay inside the glued union") {
    IVPInstance inst;
    inst.dim = 1;
    inst.rhs = SingleGadgetRhs{BitStream{}};  // all-2 stream
    inst.domain = auto_growing_domain(1);
    inst.x0 = 0.0;
    inst.y0 = {0.0};
    SolveConfig cfg;
    cfg.depth = 8;
    cfg.max_bisections = 16;
    ExtensionState st = extend(inst, 12, cfg);
    REQUIRE(st.b > 1.05);
    for (double c : {0.0, 0.25, 0.5}) {
        for (int sgn : {1, -1}) {
            for (int k = 0; k < 60; ++k) {
                double x = st.a + (st.b - st.a) * k / 59.0;
                double y;
                if (x <= 1.0)
                    y = 0.0;
                else
                    y = closed_solution_s(0.0, sgn, c, std::min(x - 1.0, 1.0));
                IBox v = evaluate_glued(st, x);
                REQUIRE(v[0].lo <= y + 1e-12);
                REQUIRE(y - 1e-12 <= v[0].hi);
            }
        }
    }
}

TEST_CASE("a bounded domain is approached but never exited") {
    IVPInstance inst = expr_instance("0", 0.0, 0.0);
    inst.domain.balls = {Ball{{0.0, 0.0}, 1.0}};
    SolveConfig cfg;
    cfg.depth = 5;
    ExtensionState st = extend(inst, 25, cfg);
    CHECK(st.b < 1.0);
    CHECK(st.a > -1.0);
    CHECK(st.b > 0.9);  // creeps toward the boundary
    // the window shrinks as the boundary nears
    int k_first = -1, k_last = -1;
    for (const auto& rec : st.records)
        if (rec.right.grew) {
            if (k_first < 0) k_first = static_cast<int>(std::lround(-std::log2(rec.right.delta)));
            k_last = static_cast<int>(std::lround(-std::log2(rec.right.delta)));
        }
    CHECK(k_last > k_first);
}

TEST_CASE("a widening funnel eventually freezes the interval anchor") {
    IVPInstance inst;
    inst.dim = 1;
    inst.rhs = SingleGadgetRhs{BitStream{}};  // all-2 stream: full funnel
    inst.domain = auto_growing_domain(1);
    inst.x0 = 0.0;
    inst.y0 = {0.0};
    SolveConfig cfg;
    cfg.depth = 7;
    cfg.max_bisections = 8;
    ExtensionState st = extend(inst, 28, cfg);
    CHECK(!st.right_growing);
    CHECK(st.right_frozen_reason.find("anchor") != std::string::npos);
    CHECK(st.b > 1.0);   // the funnel only opens past x = 1
    CHECK(st.b < 2.5);   // and the anchor hull blocks progress near its crest
}

TEST_CASE("single-round state passes the bound check vacuously") {
    SolveConfig cfg;
    cfg.depth = 5;
    ExtensionState st = extend(expr_instance("0", 0.0, 0.0), 1, cfg);
    StepBoundReport rep = step_lower_bound_check(st);
    CHECK(rep.all_ok);
    CHECK(rep.rows.empty());
}
