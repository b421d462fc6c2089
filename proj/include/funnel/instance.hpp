#ifndef FUNNEL_INSTANCE_HPP
#define FUNNEL_INSTANCE_HPP

#include <vector>

#include "funnel/rhs.hpp"

namespace funnel {

// Open ball of the max metric in R^(n+1); its closure is assumed to lie in U.
struct Ball {
    std::vector<double> center;  // length n+1
    double radius = 0.0;
};

// U as a countable (here: finite) union of balls.
struct OpenSet {
    std::vector<Ball> balls;
};

// "auto_growing" sugar: balls B(0, 2^m), m = 0..31.
OpenSet auto_growing_domain(int dim);
// (-1,1) x R rendered as a finite ball family (gadget instances); truncated
// to the desk-scale window |y| <= 9.
OpenSet gadget_strip_domain();

struct IVPInstance {
    Rhs rhs;
    int dim = 1;
    OpenSet domain;
    double x0 = 0.0;
    std::vector<double> y0;
};

// Verified local solve window around an interior point:
//   delta = 2^-k_sel with closure(B(point, delta)) inside ball m_sel,
//   M an upper bound of sup ||f|| over K plus 1,
//   a < x0 < b with half-width step, strictly between delta/(2M) and delta/M.
struct LocalBox {
    int m_sel = 0;
    int k_sel = 0;
    double delta = 0.0;
    IBox K;  // length n+1
    double M = 1.0;
    double a = 0.0;
    double b = 0.0;
    double x0 = 0.0;
    std::vector<double> y0;
    double step = 0.0;  // b - x0 = x0 - a
};

struct BoundConfig {
    int max_evals = 4096;
};

// Upper bound of max ||f|| over K plus 1, by best-first bisection of K until
// the norm enclosure width falls below 2^(-precision/2) or the budget is hit.
// Always an over-approximation.
double compute_bound_M(const Rhs& rhs, const IBox& K, const BoundConfig& cfg = {});

// Dovetailed <m,k> sweep: k = 0,1,2,... and for each k all ball indices
// m <= k in order; the first pair whose interiority condition
// ||c_m - point|| < r_m - 2^-k verifies wins. Throws NotInDomain when the
// sweep budget is exhausted. anchor_rad > 0 shrinks the step so a tube
// anchored on an interval of that radius still fits inside K.
LocalBox select_local_box(const IVPInstance& inst, double x, const std::vector<double>& y,
                          double anchor_rad = 0.0);

} // namespace funnel

#endif
