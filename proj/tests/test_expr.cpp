#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "funnel/expr.hpp"

using namespace funnel;

namespace {

struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double in(double lo, double hi) { return lo + (hi - lo) * unit(); }
};

const char* kAmplifier = "9*x*(1-x)*scbrt(y1)";

double amplifier_ref(double x, double y) {
    return 9.0 * x * (1.0 - x) * std::copysign(std::cbrt(std::abs(y)), y);
}

} // namespace

TEST_CASE("parse and evaluate the amplifier right-hand side") {
    RhsDef r = parse_rhs(kAmplifier, 1);
    REQUIRE(r.comps.size() == 1);

    IBox at{Interval(0.5), Interval(1.0)};
    Interval v = eval_box(r, at)[0];
    CHECK(v.lo == 2.25);  // all factors dyadic-exact
    CHECK(v.hi == 2.25);

    IBox zero{Interval(0.25, 0.75), Interval(0.0)};
    Interval z = eval_box(r, zero)[0];
    CHECK(z.lo == 0.0);
    CHECK(z.hi == 0.0);
}

TEST_CASE("box evaluation encloses the grid maximum") {
    RhsDef r = parse_rhs(kAmplifier, 1);
    // Brute-force oracle over a 100x100 grid of [0,1]^2.
    double grid_max = 0.0, grid_min = 0.0;
    for (int i = 0; i <= 100; ++i)
        for (int j = 0; j <= 100; ++j) {
            double v = amplifier_ref(i / 100.0, j / 100.0);
            grid_max = std::max(grid_max, v);
            grid_min = std::min(grid_min, v);
        }
    CHECK(grid_max == doctest::Approx(2.25).epsilon(1e-12));
    Interval v = eval_box(r, IBox{Interval(0.0, 1.0), Interval(0.0, 1.0)})[0];
    CHECK(v.lo <= grid_min);
    CHECK(v.hi >= grid_max);
}

TEST_CASE("zero right-hand side in three dimensions") {
    RhsDef r = parse_rhs("0; 0; 0", 3);
    IBox at{Interval(0.0), Interval(1.0), Interval(2.0), Interval(3.0)};
    IBox v = eval_box(r, at);
    for (int c = 0; c < 3; ++c) {
        CHECK(v[c].lo == 0.0);
        CHECK(v[c].hi == 0.0);
    }
}

TEST_CASE("diagnostics carry positions") {
    CHECK_THROWS_AS(parse_rhs("y2 + @", 2), SyntaxError);
    try {
        parse_rhs("y2 + @", 2);
    } catch (const SyntaxError& e) {
        CHECK(e.pos == 5);
    }
    CHECK_THROWS_AS(parse_rhs("y2", 1), DimensionError);
    CHECK_THROWS_AS(parse_rhs("y", 2), SyntaxError);        // bare y needs n == 1
    CHECK_THROWS_AS(parse_rhs("min(x)", 1), SyntaxError);   // arity
    CHECK_THROWS_AS(parse_rhs("x; x", 1), DimensionError);  // component count
    CHECK_THROWS_AS(parse_rhs("foo(x)", 1), SyntaxError);
}

TEST_CASE("literals: dyadics exact, decimals outward") {
    RhsDef dy = parse_rhs("0.25", 1);
    Interval v = eval_box(dy, IBox{Interval(0.0), Interval(0.0)})[0];
    CHECK(v.lo == 0.25);
    CHECK(v.hi == 0.25);

    RhsDef dec = parse_rhs("0.1", 1);
    Interval w = eval_box(dec, IBox{Interval(0.0), Interval(0.0)})[0];
    CHECK(w.lo < 0.1);
    CHECK(w.hi > 0.1);
    CHECK(w.width_up() < 1e-15);

    RhsDef big = parse_rhs("3", 1);
    CHECK(eval_box(big, IBox{Interval(0.0), Interval(0.0)})[0].lo == 3.0);
}

TEST_CASE("print/parse round trip") {
    const char* samples[] = {kAmplifier, "min(x, max(y1, 0.5)) - abs(x*x)",
                             "-(x - y2)*y1; x + 0.125", "scbrt(abs(y1)) * 2"};
    int dims[] = {1, 1, 2, 1};
    for (int k = 0; k < 4; ++k) {
        RhsDef r = parse_rhs(samples[k], dims[k]);
        RhsDef r2 = parse_rhs(print_rhs(r), dims[k]);
        REQUIRE(r.comps.size() == r2.comps.size());
        for (std::size_t c = 0; c < r.comps.size(); ++c)
            CHECK(expr_equal(r.comps[c], r2.comps[c]));
    }
}

TEST_CASE("point samples stay inside box evaluations") {
    Rng rng(0xfeed);
    RhsDef r = parse_rhs(kAmplifier, 1);
    for (int it = 0; it < 5000; ++it) {
        double xl = rng.in(-1.0, 1.0), xh = rng.in(xl, 1.0);
        double yl = rng.in(-2.0, 2.0), yh = rng.in(yl, 2.0);
        IBox box{Interval(xl, xh), Interval(yl, yh)};
        Interval v = eval_box(r, box)[0];
        double px = rng.in(xl, xh), py = rng.in(yl, yh);
        double ref = amplifier_ref(px, py);
        REQUIRE(v.lo <= ref + 1e-12);
        REQUIRE(ref - 1e-12 <= v.hi);
        // isotonicity against the full box
        IBox sub{Interval(px, px), Interval(py, py)};
        Interval vs = eval_box(r, sub)[0];
        REQUIRE(v.lo <= vs.lo);
        REQUIRE(vs.hi <= v.hi);
    }
}
