#include "funnel/tube.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace funnel {

namespace {

Interval widen(const Interval& v, double e) {
    return Interval(sub_down(v.lo, e), add_up(v.hi, e));
}

IBox widen(const IBox& b, double e) {
    IBox r(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = widen(b[i], e);
    return r;
}

} // namespace

double Tube::max_width() const {
    double w = 0.0;
    for (const auto& nb : nodes) w = std::max(w, width_max(nb));
    return w;
}

Tube initial_tube(const LocalBox& lb, const IBox& anchor_value, int depth) {
    assert(depth >= 1 && depth <= 20);
    Tube t;
    t.depth = depth;
    t.lip = lb.M;
    t.anchor_value = anchor_value;
    std::size_t count = (std::size_t{1} << depth) + 1;
    t.xs.resize(count);
    double left = lb.x0 - lb.a, right = lb.b - lb.x0;
    double h;
    if (left == right) {
        h = std::ldexp(left, 1 - depth);  // exact: power-of-two scaling
        t.anchor = 1 << (depth - 1);
    } else {
        // Off-center anchors (hand-built windows): x0 must land on the grid.
        h = std::ldexp(lb.b - lb.a, -depth);
        t.anchor = static_cast<int>(std::llround(left / h));
    }
    for (std::size_t j = 0; j < count; ++j)
        t.xs[j] = lb.x0 + (static_cast<double>(static_cast<int>(j) - t.anchor)) * h;
    assert(t.xs[static_cast<std::size_t>(t.anchor)] == lb.x0);

    t.clip = IBox(anchor_value.size());
    for (std::size_t c = 0; c < t.clip.size(); ++c)
        t.clip[c] = Interval(sub_down(lb.y0[c], lb.delta), add_up(lb.y0[c], lb.delta));
    assert(t.clip.contains(anchor_value));

    t.nodes.resize(count);
    for (std::size_t j = 0; j < count; ++j) {
        double dist_up = std::max(sub_up(t.xs[j], lb.x0), sub_up(lb.x0, t.xs[j]));
        double e = mul_up(t.lip, dist_up);
        IBox cone = widen(anchor_value, e);
        auto clipped = intersect(cone, t.clip);
        assert(clipped);
        t.nodes[j] = *clipped;
    }
    t.nodes[static_cast<std::size_t>(t.anchor)] = anchor_value;
    return t;
}

std::optional<Tube> cone_closure(Tube t) {
    std::size_t n = t.node_count();
    std::size_t j0 = static_cast<std::size_t>(t.anchor);
    auto meet = [&](std::size_t dst, const IBox& bound) -> bool {
        auto m = intersect(t.nodes[dst], bound);
        if (!m) return false;
        t.nodes[dst] = std::move(*m);
        return true;
    };
    auto band = [&](std::size_t cell, const IBox& from) {
        return widen(from, mul_up(t.lip, t.cell_width_up(cell)));
    };
    if (!meet(j0, t.anchor_value)) return std::nullopt;
    for (std::size_t j = 0; j + 1 < n; ++j)
        if (!meet(j + 1, band(j, t.nodes[j]))) return std::nullopt;
    for (std::size_t j = n - 1; j > 0; --j)
        if (!meet(j - 1, band(j - 1, t.nodes[j]))) return std::nullopt;
    return t;
}

std::optional<Tube> picard_step(const Rhs& rhs, const LocalBox& /*lb*/, const Tube& t) {
    // The tube carries the clip ball and anchor it was built with, so the
    // local box is not consulted again here.
    std::size_t n = t.node_count();
    std::size_t j0 = static_cast<std::size_t>(t.anchor);
    int dim = t.dim();
    const IBox& A = t.nodes[j0];

    Tube out = t;
    out.nodes.assign(n, IBox(static_cast<std::size_t>(dim)));
    out.nodes[j0] = A;

    auto cell_flux = [&](std::size_t j) {
        // Enclosure of integral of f over cell [xs[j], xs[j+1]].
        IBox arg(static_cast<std::size_t>(dim) + 1);
        arg[0] = Interval(t.xs[j], t.xs[j + 1]);
        double slack = mul_up(0.5, mul_up(t.lip, t.cell_width_up(j)));
        IBox yarg = widen(hull(t.nodes[j], t.nodes[j + 1]), slack);
        for (int c = 0; c < dim; ++c) arg[static_cast<std::size_t>(c) + 1] = yarg[static_cast<std::size_t>(c)];
        IBox f = eval_rhs(rhs, arg);
        Interval w(t.cell_width_down(j), t.cell_width_up(j));
        IBox flux(static_cast<std::size_t>(dim));
        for (int c = 0; c < dim; ++c) flux[static_cast<std::size_t>(c)] = w * f[static_cast<std::size_t>(c)];
        return flux;
    };

    IBox sum(static_cast<std::size_t>(dim));
    for (std::size_t j = j0; j + 1 < n; ++j) {
        IBox flux = cell_flux(j);
        for (int c = 0; c < dim; ++c) {
            auto ci = static_cast<std::size_t>(c);
            sum[ci] = sum[ci] + flux[ci];
            out.nodes[j + 1][ci] = A[ci] + sum[ci];
        }
    }
    sum = IBox(static_cast<std::size_t>(dim));
    for (std::size_t j = j0; j > 0; --j) {
        IBox flux = cell_flux(j - 1);
        for (int c = 0; c < dim; ++c) {
            auto ci = static_cast<std::size_t>(c);
            sum[ci] = sum[ci] - flux[ci];
            out.nodes[j - 1][ci] = A[ci] + sum[ci];
        }
    }

    // Solutions live in the delta ball and in the Lipschitz cone.
    for (std::size_t j = 0; j < n; ++j) {
        auto clipped = intersect(out.nodes[j], t.clip);
        if (!clipped) return std::nullopt;
        out.nodes[j] = std::move(*clipped);
    }
    return cone_closure(std::move(out));
}

std::optional<Tube> intersect_nodewise(const Tube& a, const Tube& b) {
    assert(a.node_count() == b.node_count());
    Tube r = a;
    for (std::size_t j = 0; j < a.node_count(); ++j) {
        auto m = intersect(a.nodes[j], b.nodes[j]);
        if (!m) return std::nullopt;
        r.nodes[j] = std::move(*m);
    }
    return r;
}

RefineOutcome refine(const Rhs& rhs, const LocalBox& lb, Tube t, int rounds) {
    RefineOutcome out;
    for (int r = 0; r < rounds; ++r) {
        auto img = picard_step(rhs, lb, t);
        if (!img) return RefineOutcome{std::move(t), Verdict::Empty, r + 1};
        auto met = intersect_nodewise(t, *img);
        if (!met) return RefineOutcome{std::move(t), Verdict::Empty, r + 1};
        auto closed = cone_closure(std::move(*met));
        if (!closed) return RefineOutcome{std::move(t), Verdict::Empty, r + 1};
        bool moved = false;
        for (std::size_t j = 0; j < t.node_count() && !moved; ++j)
            for (int c = 0; c < t.dim() && !moved; ++c) {
                auto ci = static_cast<std::size_t>(c);
                moved = closed->nodes[j][ci].lo > t.nodes[j][ci].lo ||
                        closed->nodes[j][ci].hi < t.nodes[j][ci].hi;
            }
        t = std::move(*closed);
        out.rounds_run = r + 1;
        if (!moved) break;
    }
    out.tube = std::move(t);
    return out;
}

namespace {

// Some Lipschitz-M piecewise-linear function threads the node boxes: walk
// from the anchor midpoint in both directions, clamping into each node box
// and verifying the move fits the inward-rounded Lipschitz band. Needed for
// the Schauder certificate: the tube's function class must be nonempty.
bool threadable(const Tube& t) {
    std::size_t n = t.node_count();
    std::size_t j0 = static_cast<std::size_t>(t.anchor);
    for (int c = 0; c < t.dim(); ++c) {
        auto ci = static_cast<std::size_t>(c);
        auto step_ok = [&](double& u, std::size_t cell, std::size_t dst) {
            const Interval& b = t.nodes[dst][ci];
            double move_up = std::max({0.0, sub_up(b.lo, u), sub_up(u, b.hi)});
            if (move_up > mul_down(t.lip, t.cell_width_down(cell))) return false;
            u = std::min(std::max(u, b.lo), b.hi);
            return true;
        };
        double u = t.nodes[j0][ci].mid();
        for (std::size_t j = j0; j + 1 < n; ++j)
            if (!step_ok(u, j, j + 1)) return false;
        u = t.nodes[j0][ci].mid();
        for (std::size_t j = j0; j > 0; --j)
            if (!step_ok(u, j - 1, j - 1)) return false;
    }
    return true;
}

} // namespace

Verdict check_inclusion(const Rhs& rhs, const LocalBox& lb, const Tube& t) {
    auto img = picard_step(rhs, lb, t);
    if (!img) return Verdict::Empty;
    bool inside = true;
    std::size_t j0 = static_cast<std::size_t>(t.anchor);
    for (std::size_t j = 0; j < t.node_count(); ++j) {
        for (int c = 0; c < t.dim(); ++c) {
            auto ci = static_cast<std::size_t>(c);
            const Interval& y = t.nodes[j][ci];
            const Interval& ty = img->nodes[j][ci];
            if (disjoint(y, ty)) return Verdict::Empty;
            if (j == j0) {
                if (!(y.contains(ty))) inside = false;
            } else {
                // Strict containment with at least one-ulp margins, so outward
                // rounding cannot manufacture a certificate.
                if (!(y.lo < ty.lo && ty.hi < y.hi)) inside = false;
            }
        }
    }
    if (inside && !threadable(t)) inside = false;
    return inside ? Verdict::Inside : Verdict::Unknown;
}

IBox evaluate(const Tube& t, double x) {
    if (x < t.x_lo() || x > t.x_hi())
        throw OutOfRange("evaluation point outside the tube interval");
    // Nearest node; ties resolve to the lower index.
    std::size_t best = 0;
    double bd = std::abs(x - t.xs[0]);
    double h = t.node_count() > 1 ? t.xs[1] - t.xs[0] : 1.0;
    std::size_t guess = h > 0.0 ? static_cast<std::size_t>(std::min<double>(
                                      static_cast<double>(t.node_count() - 1),
                                      std::max(0.0, std::round((x - t.xs[0]) / h))))
                                : 0;
    for (std::size_t j = guess > 2 ? guess - 2 : 0; j < std::min(guess + 3, t.node_count()); ++j) {
        double d = std::abs(x - t.xs[j]);
        if (d < bd) {
            bd = d;
            best = j;
        }
    }
    double dist_up = std::max(sub_up(x, t.xs[best]), sub_up(t.xs[best], x));
    return widen(t.nodes[best], mul_up(t.lip, dist_up));
}

std::array<std::optional<Tube>, 2> bisect(const Tube& t, int node, int comp) {
    auto j = static_cast<std::size_t>(node);
    auto c = static_cast<std::size_t>(comp);
    const Interval& v = t.nodes[j][c];
    double m = v.mid();
    if (!(v.lo < m && m < v.hi))
        throw DegenerateSplit("node interval too thin to bisect");
    Tube lo = t, hi = t;
    lo.nodes[j][c] = Interval(v.lo, m);
    hi.nodes[j][c] = Interval(m, v.hi);
    if (node == t.anchor) {
        lo.anchor_value[c] = lo.nodes[j][c];
        hi.anchor_value[c] = hi.nodes[j][c];
    }
    return {cone_closure(std::move(lo)), cone_closure(std::move(hi))};
}

Tube inflate(const Tube& t, double rel, double abs_pad) {
    Tube r = t;
    for (std::size_t j = 0; j < t.node_count(); ++j) {
        if (j == static_cast<std::size_t>(t.anchor)) continue;
        for (int c = 0; c < t.dim(); ++c) {
            auto ci = static_cast<std::size_t>(c);
            const Interval& v = t.nodes[j][ci];
            double scale = std::max(std::abs(v.lo), std::abs(v.hi));
            double pad = std::max({abs_pad, mul_up(rel, v.width_up()),
                                   4.0 * (next_double(scale) - scale)});
            auto w = intersect(widen(v, pad), t.clip[ci]);
            r.nodes[j][ci] = w ? *w : v;
        }
    }
    return r;
}

Tube hull_tubes(const std::vector<Tube>& ts) {
    assert(!ts.empty());
    Tube r = ts[0];
    for (std::size_t k = 1; k < ts.size(); ++k) {
        assert(ts[k].node_count() == r.node_count());
        for (std::size_t j = 0; j < r.node_count(); ++j)
            r.nodes[j] = hull(r.nodes[j], ts[k].nodes[j]);
        r.anchor_value = hull(r.anchor_value, ts[k].anchor_value);
    }
    return r;
}

} // namespace funnel
