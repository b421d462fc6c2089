#include "funnel/extender.hpp"

#include <cassert>
#include <cmath>

namespace funnel {

const Segment* ExtensionState::segment_at(double x) const {
    for (const auto& s : segments)
        if (s.lo <= x && x <= s.hi) return &s;
    return nullptr;
}

namespace {

double anchor_radius_up(const IBox& v) {
    double r = 0.0;
    for (const auto& iv : v.c) r = std::max(r, iv.rad_up());
    return r;
}

} // namespace

ExtensionState extend(const IVPInstance& inst, int rounds, const SolveConfig& cfg,
                      const RoundSink& on_round) {
    assert(rounds >= 1);
    set_precision_bits(cfg.precision);
    ExtensionState st;

    // Round 1: plain solve at (x0, y0).
    SolveResult r0 = enclose_all(inst, inst.x0, inst.y0, cfg);
    Tube hull0 = r0.union_tube();
    st.a = hull0.x_lo();
    st.b = hull0.x_hi();
    st.left_value = hull0.nodes.front();
    st.right_value = hull0.nodes.back();
    RoundRecord rec0;
    rec0.round = 1;
    rec0.left = SideRecord{true, true, "", inst.x0, st.a, r0.box.delta, r0.box.M, 0.0};
    rec0.right = SideRecord{true, true, "", inst.x0, st.b, r0.box.delta, r0.box.M, 0.0};
    rec0.a = st.a;
    rec0.b = st.b;
    if (on_round) on_round(rec0);
    st.records.push_back(rec0);
    st.segments.push_back(Segment{st.a, st.b, hull0, std::move(r0)});
    st.rounds_done = 1;

    for (int round = 2; round <= rounds; ++round) {
        RoundRecord rec;
        rec.round = round;

        auto grow_side = [&](bool left) {
            SideRecord sr;
            sr.attempted = st.rounds_done >= 1 && (left ? st.left_growing : st.right_growing);
            double edge = left ? st.a : st.b;
            sr.edge_before = edge;
            sr.edge_after = edge;
            if (!sr.attempted) {
                sr.frozen_reason = left ? st.left_frozen_reason : st.right_frozen_reason;
                return sr;
            }
            const IBox& value = left ? st.left_value : st.right_value;
            std::vector<double> nominal = midpoint(value);
            sr.anchor_rad = anchor_radius_up(value);
            LocalBox lb;
            try {
                lb = select_local_box(inst, edge, nominal, sr.anchor_rad);
            } catch (const NotInDomain& e) {
                sr.frozen_reason = e.what();
                return sr;
            }
            sr.delta = lb.delta;
            sr.M = lb.M;
            SolveResult res = enclose_all_anchored(inst, lb, value, cfg);
            if (res.confirmed.empty() && res.undecided.empty()) {
                // Cannot happen for a sound contractor (Peano guarantees a
                // solution through the anchor); guard anyway.
                sr.frozen_reason = "local solve retained no branches";
                return sr;
            }
            Tube hull = res.union_tube();
            Segment seg;
            seg.tube = hull;
            seg.solve = std::move(res);
            if (left) {
                seg.lo = hull.x_lo();
                seg.hi = edge;
                st.a = seg.lo;
                st.left_value = hull.nodes.front();
                st.segments.insert(st.segments.begin(), std::move(seg));
            } else {
                seg.lo = edge;
                seg.hi = hull.x_hi();
                st.b = seg.hi;
                st.right_value = hull.nodes.back();
                st.segments.push_back(std::move(seg));
            }
            sr.grew = true;
            sr.edge_after = left ? st.a : st.b;
            return sr;
        };

        rec.left = grow_side(true);
        if (!rec.left.grew && rec.left.attempted) {
            st.left_growing = false;
            st.left_frozen_reason = rec.left.frozen_reason;
        }
        rec.right = grow_side(false);
        if (!rec.right.grew && rec.right.attempted) {
            st.right_growing = false;
            st.right_frozen_reason = rec.right.frozen_reason;
        }
        rec.a = st.a;
        rec.b = st.b;
        if (on_round) on_round(rec);
        st.records.push_back(rec);
        st.rounds_done = round;
        if (!st.left_growing && !st.right_growing) break;
    }
    return st;
}

IBox evaluate_glued(const ExtensionState& st, double x) {
    const Segment* s = st.segment_at(x);
    if (!s) throw OutOfRange("point outside the glued interval");
    return evaluate(s->tube, x);
}

StepBoundReport step_lower_bound_check(const ExtensionState& st) {
    StepBoundReport rep;
    for (const auto& rec : st.records) {
        if (rec.round == 1) continue;  // the initial solve has no predecessor edge
        auto add = [&](const SideRecord& sr, char side) {
            if (!sr.attempted || !sr.grew) return;
            double advance = side == 'L' ? sub_down(sr.edge_before, sr.edge_after)
                                         : sub_down(sr.edge_after, sr.edge_before);
            double required = mul_up(0.5, div_up(sr.delta, sr.M));
            bool ok = advance > required;
            rep.rows.push_back(StepBoundReport::Row{rec.round, side, advance, required, ok});
            if (!ok) rep.all_ok = false;
        };
        add(rec.left, 'L');
        add(rec.right, 'R');
    }
    return rep;
}

} // namespace funnel
