#include "funnel/solver.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <future>

namespace funnel {

std::vector<const BranchTube*> SolveResult::all_tubes() const {
    std::vector<const BranchTube*> out;
    out.reserve(confirmed.size() + undecided.size());
    for (const auto& t : confirmed) out.push_back(&t);
    for (const auto& t : undecided) out.push_back(&t);
    return out;
}

Tube SolveResult::union_tube() const {
    std::vector<Tube> ts;
    for (const auto* bt : all_tubes()) ts.push_back(bt->tube);
    assert(!ts.empty());
    return hull_tubes(ts);
}

namespace {

struct WorkItem {
    std::uint64_t id;
    std::string split_path;
    Tube tube;
};

// Pure per-branch step: refine, certify, or propose a split site.
struct StepOutcome {
    Verdict verdict = Verdict::Unknown;
    Tube tube;            // refined (or inflated certified) tube
    bool wants_split = false;
    int split_node = 0;
    int split_comp = 0;
};

StepOutcome process_branch(const Rhs& rhs, const LocalBox& lb, Tube tube,
                           const SolveConfig& cfg) {
    StepOutcome out;
    RefineOutcome ref = refine(rhs, lb, std::move(tube), cfg.refine_rounds);
    if (ref.verdict == Verdict::Empty) {
        out.verdict = Verdict::Empty;
        out.tube = std::move(ref.tube);
        return out;
    }
    Verdict v = check_inclusion(rhs, lb, ref.tube);
    if (v == Verdict::Inside || v == Verdict::Empty) {
        out.verdict = v;
        out.tube = std::move(ref.tube);
        return out;
    }
    // Refinement usually converges to a near-fixpoint where strict margins
    // vanish; retry on an epsilon-inflated copy (the certificate then covers
    // the inflated tube, which is what gets reported).
    Tube puffed = inflate(ref.tube, 0.0625, 1e-13);
    if (check_inclusion(rhs, lb, puffed) == Verdict::Inside) {
        out.verdict = Verdict::Inside;
        out.tube = std::move(puffed);
        return out;
    }
    out.tube = std::move(ref.tube);
    // Split site: widest node x component, ties to the smaller node index,
    // then the smaller component.
    double wmax = 0.0;
    for (std::size_t j = 0; j < out.tube.node_count(); ++j)
        for (int c = 0; c < out.tube.dim(); ++c) {
            double w = out.tube.nodes[j][static_cast<std::size_t>(c)].width_up();
            if (w > wmax) {
                wmax = w;
                out.split_node = static_cast<int>(j);
                out.split_comp = c;
            }
        }
    double floor = std::max(cfg.target_width,
                            4.0 * (next_double(wmax) - wmax));
    out.wants_split = wmax > floor;
    return out;
}

SolveResult run_worklist(const IVPInstance& inst, const LocalBox& lb, const IBox& anchor,
                         const SolveConfig& cfg) {
    SolveResult res;
    res.box = lb;
    std::deque<WorkItem> queue;
    std::uint64_t next_id = 0;
    queue.push_back(WorkItem{next_id++, "", initial_tube(lb, anchor, cfg.depth)});

    const int wave_cap = std::max(1, cfg.threads);
    while (!queue.empty()) {
        std::size_t wave = std::min<std::size_t>(queue.size(), static_cast<std::size_t>(wave_cap));
        std::vector<WorkItem> items;
        for (std::size_t k = 0; k < wave; ++k) {
            items.push_back(std::move(queue.front()));
            queue.pop_front();
        }
        std::vector<StepOutcome> outs(items.size());
        if (items.size() == 1 || cfg.threads <= 1) {
            for (std::size_t k = 0; k < items.size(); ++k)
                outs[k] = process_branch(inst.rhs, lb, std::move(items[k].tube), cfg);
        } else {
            std::vector<std::future<StepOutcome>> futs;
            futs.reserve(items.size());
            for (std::size_t k = 0; k < items.size(); ++k)
                futs.push_back(std::async(std::launch::async, [&, k] {
                    return process_branch(inst.rhs, lb, items[k].tube, cfg);
                }));
            for (std::size_t k = 0; k < items.size(); ++k) outs[k] = futs[k].get();
        }
        // Merge strictly in branch-creation order so results are independent
        // of the parallel schedule.
        for (std::size_t k = 0; k < items.size(); ++k) {
            StepOutcome& o = outs[k];
            if (o.verdict == Verdict::Empty) {
                ++res.pruned_count;
                continue;
            }
            if (o.verdict == Verdict::Inside) {
                res.confirmed.push_back(
                    BranchTube{items[k].id, items[k].split_path, Verdict::Inside, std::move(o.tube)});
                continue;
            }
            if (o.wants_split && res.bisections_used < cfg.max_bisections) {
                ++res.bisections_used;
                auto kids = bisect(o.tube, o.split_node, o.split_comp);
                for (int side = 0; side < 2; ++side) {
                    if (!kids[static_cast<std::size_t>(side)]) {
                        ++res.pruned_count;  // closure emptied: no solution in that half
                        continue;
                    }
                    queue.push_back(WorkItem{next_id++,
                                             items[k].split_path + (side == 0 ? "L" : "R"),
                                             std::move(*kids[static_cast<std::size_t>(side)])});
                }
                continue;
            }
            res.undecided.push_back(
                BranchTube{items[k].id, items[k].split_path, Verdict::Unknown, std::move(o.tube)});
        }
    }
    auto by_id = [](const BranchTube& a, const BranchTube& b) { return a.id < b.id; };
    std::sort(res.confirmed.begin(), res.confirmed.end(), by_id);
    std::sort(res.undecided.begin(), res.undecided.end(), by_id);
    return res;
}

} // namespace

SolveResult enclose_all(const IVPInstance& inst, double x, const std::vector<double>& y,
                        const SolveConfig& cfg) {
    set_precision_bits(cfg.precision);
    LocalBox lb = select_local_box(inst, x, y);
    IBox anchor(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) anchor[i] = Interval(y[i]);
    return run_worklist(inst, lb, anchor, cfg);
}

SolveResult enclose_all_anchored(const IVPInstance& inst, const LocalBox& lb,
                                 const IBox& anchor_value, const SolveConfig& cfg) {
    set_precision_bits(cfg.precision);
    return run_worklist(inst, lb, anchor_value, cfg);
}

Tube solve_unique(const IVPInstance& inst, double x, const std::vector<double>& y,
                  const SolveConfig& cfg) {
    SolveResult res = enclose_all(inst, x, y, cfg);
    if (res.confirmed.size() != 1 || !res.undecided.empty())
        throw NotProvenUnique("branch count: " + std::to_string(res.confirmed.size()) +
                              " confirmed, " + std::to_string(res.undecided.size()) + " undecided");
    const Tube& t = res.confirmed[0].tube;
    if (t.max_width() > cfg.target_width)
        throw NotProvenUnique("certified tube wider than the uniqueness target");
    return t;
}

} // namespace funnel
