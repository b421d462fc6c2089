#ifndef FUNNEL_INTERVAL_HPP
#define FUNNEL_INTERVAL_HPP

#include <optional>
#include <vector>

#include "funnel/rounding.hpp"

namespace funnel {

// Closed real interval with finite, outward-rounded endpoints.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    explicit Interval(double v);
    Interval(double l, double h);

    // Hull of two scalars in either order.
    static Interval of(double a, double b);

    bool is_point() const { return lo == hi; }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
    double mid() const;
    // Upper bounds on width / radius around mid().
    double width_up() const;
    double rad_up() const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);

Interval abs(const Interval& a);
Interval min(const Interval& a, const Interval& b);
Interval max(const Interval& a, const Interval& b);
// Encloses {sign(t)|t|^(1/3) : t in a}.
Interval scbrt(const Interval& a);
// Exact scaling by 2^e.
Interval scale2(const Interval& a, int e);

Interval hull(const Interval& a, const Interval& b);
std::optional<Interval> intersect(const Interval& a, const Interval& b);
bool disjoint(const Interval& a, const Interval& b);

// Box in R^k: vector of intervals, nonempty.
struct IBox {
    std::vector<Interval> c;

    IBox() = default;
    explicit IBox(std::size_t n) : c(n) {}
    IBox(std::initializer_list<Interval> init) : c(init) {}

    std::size_t size() const { return c.size(); }
    Interval& operator[](std::size_t i) { return c[i]; }
    const Interval& operator[](std::size_t i) const { return c[i]; }

    bool contains(const std::vector<double>& p) const;
    bool contains(const IBox& o) const;
};

// Encloses {||v||_inf : v in b}.
Interval norm_max(const IBox& b);
IBox hull(const IBox& a, const IBox& b);
std::optional<IBox> intersect(const IBox& a, const IBox& b);
// Max over components of width_up.
double width_max(const IBox& b);
std::vector<double> midpoint(const IBox& b);

} // namespace funnel

#endif
