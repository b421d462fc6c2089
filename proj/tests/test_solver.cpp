#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "funnel/io.hpp"
#include "funnel/solver.hpp"

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

// Single gadget with an all-2 stream: y' vanishes left of the amplifier and
// the full c-family funnel opens at (1, 0).
IVPInstance funnel_instance() {
    IVPInstance inst;
    inst.dim = 1;
    inst.rhs = SingleGadgetRhs{BitStream{}};
    inst.domain = auto_growing_domain(1);
    inst.x0 = 1.0;
    inst.y0 = {0.0};
    return inst;
}

bool union_contains(const SolveResult& res, std::size_t node, double value) {
    for (const auto* bt : res.all_tubes())
        if (bt->tube.nodes[node][0].contains(value)) return true;
    return false;
}

std::string fingerprint(const SolveResult& res) {
    std::ostringstream out;
    out << res.pruned_count << "|" << res.bisections_used << "\n";
    for (const auto* bt : res.all_tubes()) {
        out << bt->id << ":" << bt->split_path << ":" << static_cast<int>(bt->verdict) << "\n";
        out << io::tube_csv(bt->tube);
    }
    return out.str();
}

} // namespace

TEST_CASE("zero rhs: exactly one confirmed constant tube") {
    SolveConfig cfg;
    cfg.depth = 6;
    SolveResult res = enclose_all(expr_instance("0", 0.0, 0.0), 0.0, {0.0}, cfg);
    REQUIRE(res.confirmed.size() == 1);
    CHECK(res.undecided.empty());
    const Tube& t = res.confirmed[0].tube;
    for (std::size_t j = 0; j < t.node_count(); ++j) REQUIRE(t.nodes[j][0].contains(0.0));
    CHECK(t.max_width() <= 1e-10);
}

TEST_CASE("exponential: one confirmed tube containing e^x") {
    SolveConfig cfg;
    cfg.depth = 10;
    IVPInstance inst = expr_instance("y1", 0.0, 1.0);
    SolveResult res = enclose_all(inst, 0.0, {1.0}, cfg);
    REQUIRE(res.confirmed.size() == 1);
    CHECK(res.undecided.empty());
    const Tube& t = res.confirmed[0].tube;
    for (std::size_t j = 0; j < t.node_count(); ++j) {
        double ex = std::exp(t.xs[j]);
        REQUIRE(t.nodes[j][0].lo <= ex);
        REQUIRE(ex <= t.nodes[j][0].hi);
    }
    CHECK(t.max_width() <= 1e-2);

    Tube u = solve_unique(inst, 0.0, {1.0}, cfg);
    CHECK(u.max_width() <= 1e-2);
}

TEST_CASE("funnel: the union keeps every closed-form branch at any budget") {
    IVPInstance inst = funnel_instance();
    for (int budget : {8, 16, 64}) {
        SolveConfig cfg;
        cfg.depth = 8;
        cfg.max_bisections = budget;
        SolveResult res = enclose_all(inst, 1.0, {0.0}, cfg);
        REQUIRE(!res.all_tubes().empty());
        const Tube& any = res.all_tubes()[0]->tube;
        for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            for (int sgn : {1, -1}) {
                for (std::size_t j = 0; j < any.node_count(); ++j) {
                    double x = any.xs[j];
                    double y = x <= 1.0 ? 0.0 : closed_solution_s(0.0, sgn, c, x - 1.0);
                    REQUIRE(union_contains(res, j, y));
                }
            }
        }
    }
}

TEST_CASE("solve_unique refuses the funnel") {
    SolveConfig cfg;
    cfg.depth = 8;
    CHECK_THROWS_AS(solve_unique(funnel_instance(), 1.0, {0.0}, cfg), NotProvenUnique);
    CHECK_NOTHROW(solve_unique(expr_instance("0", 0.0, 0.0), 0.0, {0.0}, cfg));
}

TEST_CASE("results are schedule independent") {
    IVPInstance inst = funnel_instance();
    SolveConfig one;
    one.depth = 7;
    one.max_bisections = 24;
    one.threads = 1;
    SolveConfig four = one;
    four.threads = 4;
    CHECK(fingerprint(enclose_all(inst, 1.0, {0.0}, one)) ==
          fingerprint(enclose_all(inst, 1.0, {0.0}, four)));
}

TEST_CASE("raising the bisection budget never loses a sample") {
    IVPInstance inst = funnel_instance();
    SolveConfig small;
    small.depth = 7;
    small.max_bisections = 8;
    SolveConfig big = small;
    big.max_bisections = 64;
    SolveResult rs = enclose_all(inst, 1.0, {0.0}, small);
    SolveResult rb = enclose_all(inst, 1.0, {0.0}, big);
    const Tube& any = rs.all_tubes()[0]->tube;
    for (double c : {0.0, 0.5, 1.0})
        for (int sgn : {1, -1})
            for (std::size_t j = 0; j < any.node_count(); ++j) {
                double x = any.xs[j];
                double y = x <= 1.0 ? 0.0 : closed_solution_s(0.0, sgn, c, x - 1.0);
                REQUIRE(union_contains(rs, j, y));
                REQUIRE(union_contains(rb, j, y));
            }
}

TEST_CASE("two-dimensional rotation: confirmed tube contains (cos, -sin)") {
    IVPInstance inst;
    inst.dim = 2;
    inst.rhs = parse_rhs("y2; 0-y1", 2);
    inst.domain = auto_growing_domain(2);
    inst.x0 = 0.0;
    inst.y0 = {1.0, 0.0};
    SolveConfig cfg;
    cfg.depth = 9;
    SolveResult res = enclose_all(inst, 0.0, {1.0, 0.0}, cfg);
    REQUIRE(res.confirmed.size() == 1);
    CHECK(res.undecided.empty());
    const Tube& t = res.confirmed[0].tube;
    for (std::size_t j = 0; j < t.node_count(); ++j) {
        double x = t.xs[j];
        REQUIRE(t.nodes[j][0].contains(std::cos(x)));
        REQUIRE(t.nodes[j][1].contains(-std::sin(x)));
    }
}

TEST_CASE("reduced endpoint precision stays sound, just wider") {
    IVPInstance inst = expr_instance("y1", 0.0, 1.0);
    SolveConfig coarse;
    coarse.depth = 8;
    coarse.precision = 36;
    SolveResult res = enclose_all(inst, 0.0, {1.0}, coarse);
    REQUIRE(!res.all_tubes().empty());
    Tube u = res.union_tube();
    for (std::size_t j = 0; j < u.node_count(); ++j) {
        double ex = std::exp(u.xs[j]);
        REQUIRE(u.nodes[j][0].lo <= ex);
        REQUIRE(ex <= u.nodes[j][0].hi);
    }
    set_precision_bits(53);

    SolveConfig fine = coarse;
    fine.precision = 53;
    SolveResult res53 = enclose_all(inst, 0.0, {1.0}, fine);
    CHECK(res53.union_tube().max_width() <= u.max_width());
    set_precision_bits(53);
}

TEST_CASE("no local box propagates") {
    IVPInstance inst = expr_instance("0", 0.0, 0.0);
    inst.domain.balls = {Ball{{0.0, 0.0}, 0.5}};
    SolveConfig cfg;
    CHECK_THROWS_AS(enclose_all(inst, 40.0, {0.0}, cfg), NotInDomain);
}
