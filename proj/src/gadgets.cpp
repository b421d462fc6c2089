#include "funnel/gadgets.hpp"

#include <cassert>
#include <cmath>

namespace funnel {

bool BitStream::has(int bit) const {
    for (auto e : entries)
        if (e == bit) return true;
    return false;
}

void BitStream::validate() const {
    for (auto e : entries)
        if (e > 2) throw DomainViolation("stream entries must be 0, 1 or 2");
    if (!valid_domain())
        throw DomainViolation("stream contains both 0 and 1");
}

double t_value(const BitStream& p, int bit) {
    for (std::size_t j = 0; j < p.entries.size(); ++j)
        if (p.entries[j] == bit) return std::ldexp(1.0, -static_cast<int>(j));
    return 0.0;
}

namespace {

// Sharp enclosure of the tent max(0, 1-|2x-1|) over x; single occurrence of x
// in each interval operation, so the composition is exact on dyadics.
Interval tent(const Interval& x) {
    Interval u = abs(x * Interval(2.0) - Interval(1.0));
    Interval t = Interval(1.0) - u;
    return max(Interval(0.0), t);
}

// Sharp enclosure of x(1-x) over x (concave, max 1/4 at 1/2).
Interval quad_x_1mx(const Interval& x) {
    Interval at_lo = Interval(x.lo) * (Interval(1.0) - Interval(x.lo));
    Interval at_hi = Interval(x.hi) * (Interval(1.0) - Interval(x.hi));
    double lo = std::min(at_lo.lo, at_hi.lo);
    double hi = std::max(at_lo.hi, at_hi.hi);
    if (x.contains(0.5)) hi = std::max(hi, 0.25);
    return Interval(lo, hi);
}

} // namespace

Interval eval_h(const BitStream& p, const Interval& x) {
    double peak = t_value(p, 1) - t_value(p, 0);  // exact: difference of powers of 2
    if (peak == 0.0) return Interval(0.0);
    return tent(x) * Interval(peak);
}

Interval eval_s(const Interval& x, const Interval& y) {
    return Interval(9.0) * quad_x_1mx(x) * scbrt(y);
}

Interval eval_g(const BitStream& p, const Interval& x, const Interval& y) {
    bool any = false;
    Interval acc(0.0);
    auto take = [&](const Interval& piece) {
        acc = any ? hull(acc, piece) : piece;
        any = true;
    };
    if (auto part = intersect(x, Interval(0.0, 1.0))) take(eval_h(p, *part));
    if (auto part = intersect(x, Interval(1.0, 2.0))) take(eval_s(*part - Interval(1.0), y));
    if (auto part = intersect(x, Interval(2.0, 3.0))) take(-eval_s(*part - Interval(2.0), y));
    if (auto part = intersect(x, Interval(3.0, 4.0))) take(-eval_h(p, *part - Interval(3.0)));
    if (x.lo < 0.0 || x.hi > 4.0) take(Interval(0.0));
    assert(any);
    return acc;
}

double parallel_tail_bound(int cell_budget, double sup_abs_y) {
    // |2^-(m+3) g(x^,y^)| <= max(2^-(m+3), (9/4) 2^-(m+3)/3 |y|^(1/3)) and both
    // branches decrease in m, so the bound at m = cell_budget covers all m > it.
    double h_part = std::ldexp(1.0, -(cell_budget + 3));
    double croot = mul_up(scbrt_up(sup_abs_y), scbrt_up(std::ldexp(1.0, -(cell_budget + 3))));
    double s_part = mul_up(2.25, croot);
    return std::max(h_part, s_part);
}

Interval eval_parallel_f(const std::vector<BitStream>& streams, int cell_budget,
                         const Interval& x, const Interval& y) {
    assert(cell_budget >= 1);
    Interval u = abs(x);  // f(x,y) = f(-x,y)
    bool any = false;
    Interval acc(0.0);
    auto take = [&](const Interval& piece) {
        acc = any ? hull(acc, piece) : piece;
        any = true;
    };
    if (u.hi > 1.0) take(Interval(0.0));  // outside every cell support
    for (int m = 0; m <= cell_budget; ++m) {
        Interval support(std::ldexp(1.0, -(m + 1)), std::ldexp(1.0, -m));
        auto part = intersect(u, support);
        if (!part) continue;
        std::uint64_t k = 0, i = 0;
        cell_unpair(static_cast<std::uint64_t>(m), k, i);
        if (i >= streams.size()) {
            take(Interval(0.0));  // absent stream: no gadget in this cell
            continue;
        }
        // x^ = 2^(m+3)(x + 2^-m) with x = -u, y^ = 2^(2(m+3)) y.
        Interval xhat = scale2(Interval(std::ldexp(1.0, -m)) - *part, m + 3);
        Interval yhat = scale2(y, 2 * (m + 3));
        take(scale2(eval_g(streams[i], xhat, yhat), -(m + 3)));
    }
    if (u.lo < std::ldexp(1.0, -(cell_budget + 1)) && !streams.empty()) {
        double tb = parallel_tail_bound(cell_budget, std::max(std::abs(y.lo), std::abs(y.hi)));
        take(Interval(-tb, tb));
    } else if (!any) {
        take(Interval(0.0));
    }
    return acc;
}

std::uint64_t cell_index(std::uint64_t k, std::uint64_t i) {
    std::uint64_t w = k + i;
    return w * (w + 1) / 2 + i;
}

void cell_unpair(std::uint64_t m, std::uint64_t& k, std::uint64_t& i) {
    std::uint64_t w = 0;
    while ((w + 1) * (w + 2) / 2 <= m) ++w;
    std::uint64_t t = w * (w + 1) / 2;
    i = m - t;
    k = w - i;
}

double cell_sample_x(int m) {
    // -2^-m + 2^-(m+2) = -3 * 2^-(m+2), exact.
    return std::ldexp(-3.0, -(m + 2));
}

double cell_threshold(int m) {
    // The cell transformation yhat = 2^(2(m+3)) y maps the gadget-level
    // decision thresholds +-1 at xhat = 2 to +-2^(-2(m+3)) at the sample
    // point.
    return std::ldexp(1.0, -2 * (m + 3));
}

double closed_solution_s(double y0, int sgn, double c, double x) {
    if (x < 0.0 || x > 1.0) throw ParameterError("x must lie in [0,1]");
    if (sgn != 1 && sgn != -1) throw ParameterError("sign must be +1 or -1");
    double poly = x * x * (3.0 - 2.0 * x);
    if (y0 != 0.0) {
        if (c != 0.0) throw ParameterError("c is only meaningful when y0 = 0");
        double base = poly + std::pow(std::abs(y0), 2.0 / 3.0);
        double v = std::pow(base, 1.5);
        return y0 > 0.0 ? v : -v;
    }
    if (c < 0.0 || c > 1.0) throw ParameterError("c must lie in [0,1]");
    if (x <= c) return 0.0;
    double base = poly - c * c * (3.0 - 2.0 * c);
    if (base < 0.0) base = 0.0;  // guards rounding just above x = c
    return sgn * std::pow(base, 1.5);
}

} // namespace funnel
