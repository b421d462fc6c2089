#include "funnel/interval.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace funnel {

Interval::Interval(double v) : lo(v), hi(v) {
    assert(std::isfinite(v));
}

Interval::Interval(double l, double h) : lo(l), hi(h) {
    assert(std::isfinite(l) && std::isfinite(h) && l <= h);
}

Interval Interval::of(double a, double b) {
    return a <= b ? Interval(a, b) : Interval(b, a);
}

double Interval::mid() const {
    double m = 0.5 * (lo + hi);
    if (!std::isfinite(m)) m = 0.5 * lo + 0.5 * hi;
    if (m < lo) m = lo;
    if (m > hi) m = hi;
    return m;
}

double Interval::width_up() const { return sub_up(hi, lo); }

double Interval::rad_up() const {
    double m = mid();
    return std::max(sub_up(hi, m), sub_up(m, lo));
}

Interval operator+(const Interval& a, const Interval& b) {
    return Interval(add_down(a.lo, b.lo), add_up(a.hi, b.hi));
}

Interval operator-(const Interval& a, const Interval& b) {
    return Interval(sub_down(a.lo, b.hi), sub_up(a.hi, b.lo));
}

Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

Interval operator*(const Interval& a, const Interval& b) {
    double l = std::min(std::min(mul_down(a.lo, b.lo), mul_down(a.lo, b.hi)),
                        std::min(mul_down(a.hi, b.lo), mul_down(a.hi, b.hi)));
    double h = std::max(std::max(mul_up(a.lo, b.lo), mul_up(a.lo, b.hi)),
                        std::max(mul_up(a.hi, b.lo), mul_up(a.hi, b.hi)));
    return Interval(l, h);
}

Interval abs(const Interval& a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return Interval(-a.hi, -a.lo);
    return Interval(0.0, std::max(-a.lo, a.hi));
}

Interval min(const Interval& a, const Interval& b) {
    return Interval(std::min(a.lo, b.lo), std::min(a.hi, b.hi));
}

Interval max(const Interval& a, const Interval& b) {
    return Interval(std::max(a.lo, b.lo), std::max(a.hi, b.hi));
}

Interval scbrt(const Interval& a) {
    // Odd and increasing, so endpoint evaluation is sharp.
    return Interval(scbrt_down(a.lo), scbrt_up(a.hi));
}

Interval scale2(const Interval& a, int e) {
    return Interval(std::ldexp(a.lo, e), std::ldexp(a.hi, e));
}

Interval hull(const Interval& a, const Interval& b) {
    return Interval(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    double l = std::max(a.lo, b.lo);
    double h = std::min(a.hi, b.hi);
    if (l > h) return std::nullopt;
    return Interval(l, h);
}

bool disjoint(const Interval& a, const Interval& b) {
    return a.hi < b.lo || b.hi < a.lo;
}

bool IBox::contains(const std::vector<double>& p) const {
    if (p.size() != c.size()) return false;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!c[i].contains(p[i])) return false;
    return true;
}

bool IBox::contains(const IBox& o) const {
    if (o.c.size() != c.size()) return false;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (!c[i].contains(o.c[i])) return false;
    return true;
}

Interval norm_max(const IBox& b) {
    assert(!b.c.empty());
    Interval r = abs(b.c[0]);
    for (std::size_t i = 1; i < b.c.size(); ++i)
        r = max(r, abs(b.c[i]));
    return r;
}

IBox hull(const IBox& a, const IBox& b) {
    assert(a.size() == b.size());
    IBox r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = hull(a[i], b[i]);
    return r;
}

std::optional<IBox> intersect(const IBox& a, const IBox& b) {
    assert(a.size() == b.size());
    IBox r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto s = intersect(a[i], b[i]);
        if (!s) return std::nullopt;
        r[i] = *s;
    }
    return r;
}

double width_max(const IBox& b) {
    double w = 0.0;
    for (const auto& iv : b.c) w = std::max(w, iv.width_up());
    return w;
}

std::vector<double> midpoint(const IBox& b) {
    std::vector<double> m(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) m[i] = b[i].mid();
    return m;
}

} // namespace funnel
