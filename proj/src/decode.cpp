#include "funnel/decode.hpp"

#include <cassert>
#include <map>

namespace funnel {

bool DecodeReport::all_certified() const {
    if (!unavailable.empty()) return false;
    for (const auto& b : bits)
        if (!b.certified) return false;
    return true;
}

DecodeInput decode_input_from_solve(const SolveResult& res, int cell_budget) {
    DecodeInput in;
    WitnessGroup g;
    g.id = "solve";
    for (const auto* bt : res.all_tubes()) {
        g.tubes.push_back(bt->tube);
        g.inside.push_back(bt->verdict == Verdict::Inside);
    }
    assert(!g.tubes.empty());
    g.lo = res.box.a;
    g.hi = res.box.b;
    in.cover_lo = g.lo;
    in.cover_hi = g.hi;
    in.cell_budget = cell_budget;
    in.groups.push_back(std::move(g));
    return in;
}

DecodeInput decode_input_from_extension(const ExtensionState& st, int cell_budget) {
    DecodeInput in;
    in.cover_lo = st.a;
    in.cover_hi = st.b;
    in.cell_budget = cell_budget;
    int k = 0;
    for (const auto& seg : st.segments) {
        WitnessGroup g;
        g.id = "segment" + std::to_string(k++);
        g.lo = seg.lo;
        g.hi = seg.hi;
        for (const auto* bt : seg.solve.all_tubes()) {
            g.tubes.push_back(bt->tube);
            g.inside.push_back(bt->verdict == Verdict::Inside);
        }
        in.groups.push_back(std::move(g));
    }
    return in;
}

namespace {

// -1: undecided; 0 or 1: the decoded bit. Order matters only for streams
// with both answers valid; either emission is sound.
int bit_from(const Interval& v, double threshold) {
    if (v.lo > -threshold) return 0;
    if (v.hi < threshold) return 1;
    return -1;
}

struct GroupScan {
    int existential_bit = -1;
    std::string existential_witness;
    int unanimous_bit = -1;
    int mid_negative = 0;
    int mid_total = 0;
};

GroupScan scan_group(const WitnessGroup& g, double x, double threshold) {
    GroupScan s;
    bool unanimous0 = true, unanimous1 = true, anyone = false;
    for (std::size_t t = 0; t < g.tubes.size(); ++t) {
        if (x < g.tubes[t].x_lo() || x > g.tubes[t].x_hi()) continue;
        anyone = true;
        Interval v = evaluate(g.tubes[t], x)[0];
        int b = bit_from(v, threshold);
        if (g.inside[t] && b >= 0 && s.existential_bit < 0) {
            s.existential_bit = b;
            s.existential_witness = g.id + "/tube" + std::to_string(t);
        }
        if (!(v.lo > -threshold)) unanimous0 = false;
        if (!(v.hi < threshold)) unanimous1 = false;
        ++s.mid_total;
        if (v.mid() < 0.0) ++s.mid_negative;
    }
    if (anyone && unanimous0) s.unanimous_bit = 0;
    else if (anyone && unanimous1) s.unanimous_bit = 1;
    return s;
}

bool scan_groups(const std::vector<WitnessGroup>& groups, double x, double threshold,
                 DecodedBit& out) {
    for (const auto& g : groups) {
        if (!g.covers(x)) continue;
        GroupScan s = scan_group(g, x, threshold);
        if (s.existential_bit >= 0) {
            out.bit = s.existential_bit;
            out.certified = true;
            out.witness = s.existential_witness;
            return true;
        }
        if (s.unanimous_bit >= 0) {
            out.bit = s.unanimous_bit;
            out.certified = true;
            out.witness = g.id + "/unanimous";
            return true;
        }
    }
    return false;
}

struct CellChoice {
    int m = -1;
    double sample = 0.0;
};

CellChoice pick_cell(int i, std::size_t stream_count, const DecodeInput& in) {
    for (int m = 0; m <= in.cell_budget; ++m) {
        std::uint64_t k = 0, ii = 0;
        cell_unpair(static_cast<std::uint64_t>(m), k, ii);
        if (ii != static_cast<std::uint64_t>(i)) continue;
        if (ii >= stream_count) continue;
        double x = cell_sample_x(m);
        if (x >= in.cover_lo && x <= in.cover_hi) return CellChoice{m, x};
    }
    return {};
}

// All solutions are 0 at cell edges, so the restriction of any solution to
// cell m rescales to a gadget solution yhat with yhat(0) = 0; the bit can be
// certified from a unit-scale solve of y' = g_p, reading y(2) against +-1.
IVPInstance gadget_unit_instance(const BitStream& p) {
    IVPInstance inst;
    inst.dim = 1;
    inst.rhs = SingleGadgetRhs{p};
    inst.domain = auto_growing_domain(1);
    inst.x0 = 0.0;
    inst.y0 = {0.0};
    return inst;
}

} // namespace

DecodeReport decode_llpo(const DecodeInput& input, const std::vector<BitStream>& streams,
                         const std::vector<int>& indices, const DecodeConfig& cfg) {
    DecodeReport rep;
    std::map<std::vector<std::uint8_t>, DecodeInput> gadget_cache;

    for (int i : indices) {
        if (i < 0 || i >= static_cast<int>(streams.size())) {
            rep.unavailable.push_back(i);
            continue;
        }
        CellChoice cell = pick_cell(i, streams.size(), input);
        if (cell.m < 0) {
            rep.unavailable.push_back(i);
            continue;
        }
        double thr = cell_threshold(cell.m);
        DecodedBit out;
        out.i = i;
        out.cell_m = cell.m;
        out.sample_x = cell.sample;

        bool done = scan_groups(input.groups, cell.sample, thr, out);
        if (!done && cfg.allow_gadget_resolve) {
            auto it = gadget_cache.find(streams[static_cast<std::size_t>(i)].entries);
            if (it == gadget_cache.end()) {
                ExtensionState st = extend(gadget_unit_instance(streams[static_cast<std::size_t>(i)]),
                                           cfg.gadget_rounds, cfg.gadget_solve);
                it = gadget_cache
                         .emplace(streams[static_cast<std::size_t>(i)].entries,
                                  decode_input_from_extension(st, input.cell_budget))
                         .first;
            }
            const DecodeInput& unit = it->second;
            if (unit.cover_hi >= 2.0) {
                DecodedBit unit_bit = out;
                if (scan_groups(unit.groups, 2.0, 1.0, unit_bit)) {
                    out = unit_bit;
                    out.witness = "gadget/" + out.witness;
                    done = true;
                }
            }
        }
        if (!done) {
            // Sign-majority fallback, explicitly uncertified.
            int neg = 0, total = 0;
            for (const auto& g : input.groups) {
                if (!g.covers(cell.sample)) continue;
                GroupScan s = scan_group(g, cell.sample, thr);
                neg += s.mid_negative;
                total += s.mid_total;
            }
            out.bit = (total > 0 && 2 * neg > total) ? 1 : 0;
            out.certified = false;
            out.witness = "heuristic";
        }
        rep.bits.push_back(out);
    }
    return rep;
}

} // namespace funnel
