#include "funnel/rounding.hpp"

#include <atomic>
#include <cassert>
#include <cmath>
#include <limits>

namespace funnel {

namespace {

std::atomic<int>& prec_bits() {
    static std::atomic<int> p{53};
    return p;
}

// Exact residual of the rounded sum s = fl(a+b) (Knuth two_sum).
double sum_residual(double a, double b, double s) {
    double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

double round_dir(double x, bool up) {
    int p = prec_bits().load(std::memory_order_relaxed);
    if (p >= 53 || x == 0.0 || !std::isfinite(x))
        return x;
    int e;
    std::frexp(x, &e);
    // |x| = m*2^e with m in [0.5,1); scale so the p-bit grid becomes integers.
    double scaled = std::ldexp(x, p - e);
    double r = up ? std::ceil(scaled) : std::floor(scaled);
    return std::ldexp(r, e - p);
}

} // namespace

void set_precision_bits(int p) {
    if (p < 16) p = 16;
    if (p > 53) p = 53;
    prec_bits().store(p, std::memory_order_relaxed);
}

int precision_bits() { return prec_bits().load(std::memory_order_relaxed); }

double grid_down(double x) { return round_dir(x, false); }
double grid_up(double x) { return round_dir(x, true); }

double prev_double(double x) {
    return std::nextafter(x, -std::numeric_limits<double>::infinity());
}

double next_double(double x) {
    return std::nextafter(x, std::numeric_limits<double>::infinity());
}

double add_down(double a, double b) {
    double s = a + b;
    double e = sum_residual(a, b, s);
    if (e < 0.0) s = prev_double(s);
    return grid_down(s);
}

double add_up(double a, double b) {
    double s = a + b;
    double e = sum_residual(a, b, s);
    if (e > 0.0) s = next_double(s);
    return grid_up(s);
}

double sub_down(double a, double b) { return add_down(a, -b); }
double sub_up(double a, double b) { return add_up(a, -b); }

double mul_down(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    if (e < 0.0) p = prev_double(p);
    return grid_down(p);
}

double mul_up(double a, double b) {
    double p = a * b;
    double e = std::fma(a, b, -p);
    if (e > 0.0) p = next_double(p);
    return grid_up(p);
}

double div_down(double a, double b) {
    assert(b != 0.0);
    double q = a / b;
    // residual r = q*b - a is exact; true quotient q* = a/b satisfies
    // sign(q - q*) = sign(r)*sign(b).
    double r = std::fma(q, b, -a);
    if ((r > 0.0) == (b > 0.0) && r != 0.0) q = prev_double(q);
    return grid_down(q);
}

double div_up(double a, double b) {
    assert(b != 0.0);
    double q = a / b;
    double r = std::fma(q, b, -a);
    if ((r < 0.0) == (b > 0.0) && r != 0.0) q = next_double(q);
    return grid_up(q);
}

namespace {

// True if c*c*c == x exactly in double arithmetic (no intermediate rounding).
bool cubes_exactly(double c, double x) {
    double p1 = c * c;
    if (std::fma(c, c, -p1) != 0.0) return false;
    double p2 = p1 * c;
    if (std::fma(p1, c, -p2) != 0.0) return false;
    return p2 == x;
}

// Verified bounds of cand^3; the square is computed on |cand| so the
// directed roundings compose monotonically.
void cube_bounds(double cand, double& lo, double& hi) {
    double a = std::abs(cand);
    double sq_lo = mul_down(a, a), sq_hi = mul_up(a, a);
    double cu_lo = mul_down(sq_lo, a), cu_hi = mul_up(sq_hi, a);
    if (cand >= 0.0) {
        lo = cu_lo;
        hi = cu_hi;
    } else {
        lo = -cu_hi;
        hi = -cu_lo;
    }
}

} // namespace

double scbrt_down(double x) {
    // std::cbrt is only faithful-ish (observed several ulps off), so the
    // directed result is verified: walk down until cand^3 <= x provably.
    double c = std::cbrt(x);
    for (double cand : {c, prev_double(c), next_double(c)})
        if (cubes_exactly(cand, x)) return grid_down(cand);
    double cand = next_double(next_double(c));
    for (int guard = 0; guard < 256; ++guard) {
        double lo, hi;
        cube_bounds(cand, lo, hi);
        if (hi <= x) return grid_down(cand);
        cand = prev_double(cand);
    }
    assert(!"cube root walk failed to verify a lower bound");
    return grid_down(cand);
}

double scbrt_up(double x) {
    double c = std::cbrt(x);
    for (double cand : {c, prev_double(c), next_double(c)})
        if (cubes_exactly(cand, x)) return grid_up(cand);
    double cand = prev_double(prev_double(c));
    for (int guard = 0; guard < 256; ++guard) {
        double lo, hi;
        cube_bounds(cand, lo, hi);
        if (lo >= x) return grid_up(cand);
        cand = next_double(cand);
    }
    assert(!"cube root walk failed to verify an upper bound");
    return grid_up(cand);
}

double trunc_significand(double x, int bits) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    int e;
    std::frexp(x, &e);
    double scaled = std::ldexp(x, bits - e);
    return std::ldexp(std::trunc(scaled), e - bits);
}

} // namespace funnel
