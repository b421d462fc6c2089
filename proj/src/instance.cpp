#include "funnel/instance.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <queue>

namespace funnel {

namespace {

constexpr int kSweepMaxK = 60;
constexpr int kStepBits = 37;  // keeps j*h exact for grid depths up to 15

struct BoundItem {
    IBox box;
    Interval nb;
    std::uint64_t seq;
};

struct BoundCmp {
    bool operator()(const BoundItem& a, const BoundItem& b) const {
        if (a.nb.hi != b.nb.hi) return a.nb.hi < b.nb.hi;
        return a.seq > b.seq;  // older first on ties
    }
};

int widest_component(const IBox& b) {
    int best = 0;
    double w = b[0].width_up();
    for (std::size_t i = 1; i < b.size(); ++i) {
        double wi = b[i].width_up();
        if (wi > w) {
            w = wi;
            best = static_cast<int>(i);
        }
    }
    return best;
}

} // namespace

OpenSet auto_growing_domain(int dim) {
    OpenSet u;
    for (int m = 0; m <= 31; ++m) {
        Ball b;
        b.center.assign(static_cast<std::size_t>(dim) + 1, 0.0);
        b.radius = std::ldexp(1.0, m);
        u.balls.push_back(std::move(b));
    }
    return u;
}

OpenSet gadget_strip_domain() {
    // Max-norm balls must have radius < 1 to keep their closures inside the
    // strip. Largest radii first so the <m,k> sweep can use them with small k.
    OpenSet u;
    for (int m = 8; m >= 1; --m) {
        double r = 1.0 - std::ldexp(1.0, -m);
        for (int yc = 0; yc <= 8; ++yc) {
            Ball b;
            b.center = {0.0, static_cast<double>(yc)};
            b.radius = r;
            u.balls.push_back(b);
            if (yc > 0) {
                b.center[1] = -static_cast<double>(yc);
                u.balls.push_back(b);
            }
        }
    }
    return u;
}

double compute_bound_M(const Rhs& rhs, const IBox& K, const BoundConfig& cfg) {
    double tol = std::ldexp(1.0, -precision_bits() / 2);
    std::priority_queue<BoundItem, std::vector<BoundItem>, BoundCmp> heap;
    std::uint64_t seq = 0;
    int evals = 0;
    auto push = [&](IBox box) {
        Interval nb = norm_max(eval_rhs(rhs, box));
        ++evals;
        heap.push(BoundItem{std::move(box), nb, seq++});
    };
    push(K);
    std::vector<BoundItem> leaves;
    while (!heap.empty()) {
        BoundItem it = heap.top();
        if (it.nb.width_up() <= tol || evals >= cfg.max_evals) break;
        heap.pop();
        int c = widest_component(it.box);
        if (it.box[c].width_up() <= tol) {
            leaves.push_back(std::move(it));
            continue;
        }
        double m = it.box[c].mid();
        IBox lo = it.box, hi = it.box;
        lo[c] = Interval(it.box[c].lo, m);
        hi[c] = Interval(m, it.box[c].hi);
        push(std::move(lo));
        push(std::move(hi));
    }
    double sup = 0.0;
    for (const auto& it : leaves) sup = std::max(sup, it.nb.hi);
    while (!heap.empty()) {
        sup = std::max(sup, heap.top().nb.hi);
        heap.pop();
    }
    return add_up(sup, 1.0);
}

LocalBox select_local_box(const IVPInstance& inst, double x, const std::vector<double>& y,
                          double anchor_rad) {
    assert(static_cast<int>(y.size()) == inst.dim);
    const auto& balls = inst.domain.balls;
    if (balls.empty()) throw NotInDomain("domain has no balls");

    int m_sel = -1, k_sel = -1;
    for (int k = 0; k <= kSweepMaxK && m_sel < 0; ++k) {
        double dk = std::ldexp(1.0, -k);
        int m_max = std::min<int>(k, static_cast<int>(balls.size()) - 1);
        for (int m = 0; m <= m_max; ++m) {
            const Ball& ball = balls[m];
            if (ball.center.size() != y.size() + 1) continue;
            IBox diff(y.size() + 1);
            diff[0] = Interval(ball.center[0]) - Interval(x);
            for (std::size_t j = 0; j < y.size(); ++j)
                diff[j + 1] = Interval(ball.center[j + 1]) - Interval(y[j]);
            double dist_hi = norm_max(diff).hi;
            double rhs_lo = sub_down(ball.radius, dk);
            if (dist_hi < rhs_lo) {
                m_sel = m;
                k_sel = k;
                break;
            }
        }
    }
    if (m_sel < 0)
        throw NotInDomain("no ball verifiably contains the point with margin");

    LocalBox lb;
    lb.m_sel = m_sel;
    lb.k_sel = k_sel;
    lb.delta = std::ldexp(1.0, -k_sel);
    lb.x0 = x;
    lb.y0 = y;
    lb.K = IBox(y.size() + 1);
    lb.K[0] = Interval(sub_down(x, lb.delta), add_up(x, lb.delta));
    for (std::size_t j = 0; j < y.size(); ++j)
        lb.K[j + 1] = Interval(sub_down(y[j], lb.delta), add_up(y[j], lb.delta));
    lb.M = compute_bound_M(inst.rhs, lb.K);
    assert(lb.M >= 1.0);

    // a,b at 3/4 of the Picard-admissible half-width delta/M, truncated to a
    // short significand so grid nodes stay exact. An interval anchor of
    // radius anchor_rad eats into the ball margin (the tube must satisfy
    // anchor_rad + M*step <= delta); wide anchors push the placement factor
    // toward 15/16 to keep the half-step lower bound strict.
    double eff = sub_down(lb.delta, anchor_rad);
    double factor = 0.75;
    if (!(eff > 0.75 * lb.delta)) {
        factor = 0.9375;
        if (!(mul_down(factor, eff) > mul_up(0.5, lb.delta)))
            throw NotInDomain("anchor enclosure too wide for this ball margin");
    }
    double step = trunc_significand(mul_down(factor, div_down(eff, lb.M)), kStepBits);
    // Strict window checks; the placement leaves rounding room, so a
    // violation here means a broken invariant upstream.
    double half_lo = mul_up(0.5, div_up(lb.delta, lb.M));
    double full_hi = div_down(lb.delta, lb.M);
    if (!(step > half_lo && step <= full_hi))
        throw NotInDomain("could not place a,b strictly between delta/(2M) and delta/M");
    lb.step = step;
    lb.a = x - step;
    lb.b = x + step;
    assert(lb.a < x && x < lb.b);
    return lb;
}

} // namespace funnel
