#include "funnel/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "funnel/decode.hpp"
#include "funnel/io.hpp"

namespace funnel::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double in(double lo, double hi) { return lo + (hi - lo) * unit(); }
    int pick(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(6);
    o << v;
    return o.str();
}

IVPInstance expr_instance(const char* text, double x0, double y0) {
    IVPInstance inst;
    inst.dim = 1;
    inst.rhs = parse_rhs(text, 1);
    inst.domain = auto_growing_domain(1);
    inst.x0 = x0;
    inst.y0 = {y0};
    return inst;
}

IVPInstance single_gadget_instance(const BitStream& p, double x0, double y0) {
    IVPInstance inst;
    inst.dim = 1;
    inst.rhs = SingleGadgetRhs{p};
    inst.domain = auto_growing_domain(1);
    inst.x0 = x0;
    inst.y0 = {y0};
    return inst;
}

IVPInstance parallel_instance(const std::vector<BitStream>& streams, int budget) {
    IVPInstance inst;
    inst.dim = 1;
    inst.rhs = ParallelGadgetRhs{streams, budget};
    inst.domain = gadget_strip_domain();
    inst.x0 = 0.0;
    inst.y0 = {0.0};
    return inst;
}

BitStream forced_stream(Rng& rng, int max_len = 8) {
    BitStream p;
    int len = 1 + rng.pick(max_len);
    p.entries.assign(static_cast<std::size_t>(len), 2);
    p.entries[static_cast<std::size_t>(rng.pick(len))] = static_cast<std::uint8_t>(rng.pick(2));
    return p;
}

int forced_symbol(const BitStream& p) {
    // -1 when unforced, else the symbol that occurs.
    if (p.has(0)) return 0;
    if (p.has(1)) return 1;
    return -1;
}

bool bit_valid(const BitStream& p, int bit) { return !p.has(bit); }

// ------------------------------------------------------------- criterion 1

std::vector<CheckResult> criterion_exponential() {
    auto t0 = Clock::now();
    SolveConfig cfg;
    cfg.depth = 10;
    IVPInstance inst = expr_instance("y1", 0.0, 1.0);
    SolveResult res = enclose_all(inst, 0.0, {1.0}, cfg);
    bool one_confirmed = res.confirmed.size() == 1 && res.undecided.empty();
    bool contains = one_confirmed;
    double max_width = 0.0;
    if (one_confirmed) {
        const Tube& t = res.confirmed[0].tube;
        for (std::size_t j = 0; j < t.node_count(); ++j) {
            double ex = std::exp(t.xs[j]);
            if (!(t.nodes[j][0].lo <= ex && ex <= t.nodes[j][0].hi)) contains = false;
        }
        max_width = t.max_width();
    }
    double secs = seconds_since(t0);
    std::vector<CheckResult> out;
    out.push_back({"exp tube confirmed", one_confirmed,
                   fmt(static_cast<double>(res.confirmed.size())) + " confirmed"});
    out.push_back({"exp contained at every grid node", contains, "oracle std::exp"});
    out.push_back({"max node width <= 1e-2", max_width <= 1e-2, "width " + fmt(max_width)});
    out.push_back({"runtime <= 10 s", secs <= 10.0, fmt(secs) + " s"});
    return out;
}

// ------------------------------------------------------------- criterion 2

std::vector<CheckResult> criterion_funnel() {
    auto t0 = Clock::now();
    IVPInstance inst = single_gadget_instance(BitStream{}, 1.0, 0.0);
    std::vector<CheckResult> out;
    for (int budget : {8, 16, 64}) {
        SolveConfig cfg;
        cfg.depth = 8;
        cfg.max_bisections = budget;
        SolveResult res = enclose_all(inst, 1.0, {0.0}, cfg);
        bool complete = !res.all_tubes().empty();
        const Tube& any = res.all_tubes()[0]->tube;
        for (double c : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            for (int sgn : {1, -1}) {
                for (std::size_t j = 0; j < any.node_count() && complete; ++j) {
                    double x = any.xs[j];
                    double y = x <= 1.0 ? 0.0 : closed_solution_s(0.0, sgn, c, x - 1.0);
                    bool found = false;
                    for (const auto* bt : res.all_tubes())
                        if (bt->tube.nodes[j][0].contains(y)) {
                            found = true;
                            break;
                        }
                    complete = complete && found;
                }
            }
        }
        out.push_back({"funnel union complete at budget " + std::to_string(budget), complete,
                       std::to_string(res.confirmed.size()) + " confirmed, " +
                           std::to_string(res.undecided.size()) + " undecided"});
    }
    double secs = seconds_since(t0);
    out.push_back({"runtime <= 60 s", secs <= 60.0, fmt(secs) + " s"});
    return out;
}

// ------------------------------------------------------------- criterion 3

std::vector<CheckResult> criterion_sign_forcing() {
    auto t0 = Clock::now();
    Rng rng(0x51f0);
    std::vector<CheckResult> out;
    int passed = 0;
    const int trials = 10;
    for (int trial = 0; trial < trials; ++trial) {
        BitStream p = forced_stream(rng);
        int sym = forced_symbol(p);
        IVPInstance inst = single_gadget_instance(p, 0.0, 0.0);
        SolveConfig cfg;
        cfg.depth = 9;
        ExtensionState st = extend(inst, 44, cfg);
        bool covered = st.b >= 2.0;
        bool forced_ok = covered;
        for (const auto& seg : st.segments) {
            if (!(seg.lo <= 2.0 && 2.0 <= seg.hi)) continue;
            for (const auto* bt : seg.solve.all_tubes()) {
                Interval v = evaluate(bt->tube, 2.0)[0];
                // 1 occurred: solutions pushed above +1, tube must certify
                // bit 0 via lo > -1; 0 occurred: mirrored.
                bool ok = sym == 1 ? v.lo > -1.0 : v.hi < 1.0;
                forced_ok = forced_ok && ok;
            }
        }
        if (forced_ok) ++passed;
    }
    double secs = seconds_since(t0);
    out.push_back({"sign forcing holds on all randomized forced instances", passed == trials,
                   std::to_string(passed) + "/" + std::to_string(trials) + " in " + fmt(secs) + " s"});
    return out;
}

// ------------------------------------------------------------- criterion 4

std::vector<CheckResult> criterion_decoder() {
    auto t0 = Clock::now();
    Rng rng(0xdec0de11);
    const int trials = 20;
    int valid_trials = 0, forced_certified_ok = 0;
    int total_forced = 0, total_bits = 0;
    bool coverage_ok = true;
    for (int trial = 0; trial < trials; ++trial) {
        int count = 1 + rng.pick(4);
        std::vector<BitStream> streams;
        for (int i = 0; i < count; ++i) {
            if (rng.pick(4) == 0) {
                BitStream p;
                p.entries.assign(static_cast<std::size_t>(rng.pick(9)), 2);
                streams.push_back(std::move(p));
            } else {
                streams.push_back(forced_stream(rng));
            }
        }
        int budget = 12;
        IVPInstance inst = parallel_instance(streams, budget);
        SolveConfig cfg;
        cfg.depth = 11;
        cfg.max_bisections = 24;
        ExtensionState st = extend(inst, 40, cfg);
        if (st.a > cell_sample_x(5)) coverage_ok = false;  // cells m <= 5 means t_5 at least
        DecodeInput input = decode_input_from_extension(st, budget);
        DecodeConfig dcfg;
        dcfg.gadget_solve.depth = 8;
        dcfg.gadget_solve.refine_rounds = 16;
        dcfg.gadget_solve.max_bisections = 12;
        dcfg.gadget_rounds = 40;
        std::vector<int> indices;
        for (int i = 0; i < count; ++i) indices.push_back(i);
        DecodeReport rep = decode_llpo(input, streams, indices, dcfg);
        bool all_valid = rep.unavailable.empty();
        for (const auto& b : rep.bits) {
            ++total_bits;
            if (b.certified && !bit_valid(streams[static_cast<std::size_t>(b.i)], b.bit))
                all_valid = false;
            if (forced_symbol(streams[static_cast<std::size_t>(b.i)]) >= 0) {
                ++total_forced;
                if (b.certified && bit_valid(streams[static_cast<std::size_t>(b.i)], b.bit))
                    ++forced_certified_ok;
            }
        }
        if (all_valid) ++valid_trials;
    }
    double secs = seconds_since(t0);
    std::vector<CheckResult> out;
    out.push_back({"every certified bit lies in LLPO(p_i)", valid_trials == trials,
                   std::to_string(valid_trials) + "/" + std::to_string(trials) + " lists, " +
                       std::to_string(total_bits) + " bits"});
    out.push_back({"all forced bits certified", forced_certified_ok == total_forced,
                   std::to_string(forced_certified_ok) + "/" + std::to_string(total_forced)});
    out.push_back({"solved interval covers cells m <= 5", coverage_ok, ""});
    out.push_back({"runtime <= 300 s", secs <= 300.0, fmt(secs) + " s"});
    return out;
}

// ------------------------------------------------------------- criterion 5

std::vector<CheckResult> criterion_scaling() {
    auto t0 = Clock::now();
    std::vector<BitStream> streams;
    streams.push_back(BitStream{{1}});
    streams.push_back(BitStream{{0}});
    int budget = 12;
    IVPInstance par = parallel_instance(streams, budget);
    SolveConfig cfg;
    cfg.depth = 12;
    cfg.max_bisections = 24;
    ExtensionState pst = extend(par, 40, cfg);

    std::vector<CheckResult> out;
    for (int m : {0, 1, 2}) {
        std::uint64_t k = 0, i = 0;
        cell_unpair(static_cast<std::uint64_t>(m), k, i);
        double tm = cell_sample_x(m);
        bool covered = pst.a <= tm && tm <= pst.b;
        if (!covered) {
            out.push_back({"scaling identity at cell m=" + std::to_string(m), false,
                           "sample point not covered"});
            continue;
        }
        Interval pv = evaluate_glued(pst, tm)[0];
        IVPInstance unit = single_gadget_instance(streams[i], 0.0, 0.0);
        SolveConfig ucfg;
        ucfg.depth = 9;
        ExtensionState ust = extend(unit, 44, ucfg);
        if (ust.b < 2.0) {
            out.push_back({"scaling identity at cell m=" + std::to_string(m), false,
                           "unit gadget not extended to 2"});
            continue;
        }
        Interval uv = evaluate_glued(ust, 2.0)[0];
        Interval scaled = scale2(uv, -2 * (m + 3));
        double gap = std::abs(pv.mid() - scaled.mid());
        double allowance = pv.width_up() + scaled.width_up();
        out.push_back({"scaling identity at cell m=" + std::to_string(m), gap <= allowance,
                       "gap " + fmt(gap) + " <= widths " + fmt(allowance)});
    }
    double secs = seconds_since(t0);
    out.push_back({"scaling runtime", true, fmt(secs) + " s"});
    return out;
}

// ------------------------------------------------------------- criterion 6

std::vector<CheckResult> criterion_extension() {
    std::vector<CheckResult> out;
    {
        SolveConfig cfg;
        cfg.depth = 8;
        ExtensionState st = extend(expr_instance("y1*y1", 0.0, 1.0), 8, cfg);
        bool below = true;
        for (const auto& rec : st.records) below = below && rec.b < 1.0;
        out.push_back({"quadratic blow-up: all b_i < 1 over 8 rounds", below,
                       "b_8 = " + fmt(st.b)});
        bool contains = true;
        for (int k = 0; k < 50; ++k) {
            double x = st.a + (st.b - st.a) * k / 49.0;
            if (!evaluate_glued(st, x)[0].contains(1.0 / (1.0 - x))) contains = false;
        }
        out.push_back({"glued tube contains 1/(1-x) at sampled nodes", contains, ""});
    }
    {
        SolveConfig cfg;
        cfg.depth = 6;
        ExtensionState st = extend(expr_instance("1", 0.0, 0.0), 8, cfg);
        StepBoundReport rep = step_lower_bound_check(st);
        bool ok = rep.all_ok && !rep.rows.empty();
        double worst = 1e300;
        for (const auto& row : rep.rows) worst = std::min(worst, row.advance_down - row.required_up);
        out.push_back({"unit slope: step lower bound strict every round", ok,
                       "min margin " + fmt(worst)});
    }
    return out;
}

// ------------------------------------------------------------- criterion 7

std::vector<CheckResult> criterion_interval() {
    Rng rng(0x1e7a);
    bool contain_ok = true, iso_ok = true, cube_ok = true;
    auto rand_interval = [&](double lo, double hi) {
        double a = rng.in(lo, hi), b = rng.in(lo, hi);
        return Interval::of(a, b);
    };
    RhsDef amp = parse_rhs("9*x*(1-x)*scbrt(y1)", 1);
    for (int it = 0; it < 100000; ++it) {
        Interval a = rand_interval(-10.0, 10.0);
        Interval b = rand_interval(-10.0, 10.0);
        double t = rng.in(a.lo, a.hi), s = rng.in(b.lo, b.hi);
        if (!((a + b).contains(Interval(add_down(t, s), add_up(t, s))))) contain_ok = false;
        if (!((a * b).contains(Interval(mul_down(t, s), mul_up(t, s))))) contain_ok = false;
        if (!(scbrt(a).contains(Interval(scbrt_down(t), scbrt_up(t))))) contain_ok = false;
        if (!abs(a).contains(std::abs(t))) contain_ok = false;
        // nested versions
        double lo2 = rng.in(a.lo, a.hi), hi2 = rng.in(lo2, a.hi);
        Interval a1(lo2, hi2);
        if (!(a + b).contains(a1 + b)) iso_ok = false;
        if (!(a * b).contains(a1 * b)) iso_ok = false;
        if (!scbrt(a).contains(scbrt(a1))) iso_ok = false;
        if (it % 10 == 0) {
            Interval c = scbrt(a);
            Interval cube = c * c * c;
            if (!(cube.lo <= next_double(a.lo) && prev_double(a.hi) <= cube.hi)) cube_ok = false;
        }
        if (it % 100 == 0) {
            // expression-level containment for the amplifier
            IBox box{a, b};
            Interval v = eval_box(amp, box)[0];
            double ref = 9.0 * t * (1.0 - t) * std::copysign(std::cbrt(std::abs(s)), s);
            if (!(v.lo <= ref + 1e-9 && ref - 1e-9 <= v.hi)) contain_ok = false;
        }
    }
    std::vector<CheckResult> out;
    out.push_back({"10^5 randomized containment checks", contain_ok, ""});
    out.push_back({"randomized inclusion isotonicity", iso_ok, ""});
    out.push_back({"scbrt cube composition within 1 ulp", cube_ok, ""});
    return out;
}

// ------------------------------------------------------------- criterion 8

namespace fs = std::filesystem;

bool dirs_identical(const fs::path& a, const fs::path& b, std::string& why) {
    std::vector<fs::path> fa, fb;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a));
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) fb.push_back(fs::relative(e.path(), b));
    std::sort(fa.begin(), fa.end());
    std::sort(fb.begin(), fb.end());
    if (fa != fb) {
        why = "file sets differ";
        return false;
    }
    for (const auto& rel : fa) {
        std::ifstream ia(a / rel, std::ios::binary), ib(b / rel, std::ios::binary);
        std::ostringstream sa, sb;
        sa << ia.rdbuf();
        sb << ib.rdbuf();
        if (sa.str() != sb.str()) {
            why = "content differs: " + rel.string();
            return false;
        }
    }
    return true;
}

std::vector<CheckResult> criterion_determinism() {
    std::vector<CheckResult> out;
    fs::path base = fs::temp_directory_path() / "funnel-determinism";
    fs::remove_all(base);

    auto emit = [&](const std::string& tag, int threads) {
        fs::path dir = base / (tag + "-t" + std::to_string(threads));
        SolveConfig cfg;
        cfg.threads = threads;
        if (tag == "c1-exp") {
            cfg.depth = 10;
            SolveResult res = enclose_all(expr_instance("y1", 0.0, 1.0), 0.0, {1.0}, cfg);
            io::write_solve_artifacts(dir.string(), res, cfg, "csv");
        } else if (tag == "c2-funnel") {
            cfg.depth = 8;
            cfg.max_bisections = 16;
            SolveResult res =
                enclose_all(single_gadget_instance(BitStream{}, 1.0, 0.0), 1.0, {0.0}, cfg);
            io::write_solve_artifacts(dir.string(), res, cfg, "csv");
        } else if (tag == "c3-forced") {
            cfg.depth = 9;
            ExtensionState st = extend(single_gadget_instance(BitStream{{0, 2, 2}}, 0.0, 0.0), 24, cfg);
            io::write_extend_artifacts(dir.string(), st, cfg, "csv");
        } else if (tag == "c4-decode") {
            cfg.depth = 10;
            cfg.max_bisections = 12;
            std::vector<BitStream> streams = {BitStream{{1}}, BitStream{{2, 0}}};
            IVPInstance inst = parallel_instance(streams, 10);
            ExtensionState st = extend(inst, 12, cfg);
            io::write_extend_artifacts(dir.string(), st, cfg, "csv");
            DecodeConfig dcfg;
            dcfg.gadget_solve.depth = 8;
            dcfg.gadget_solve.threads = threads;
            dcfg.gadget_rounds = 40;
            DecodeReport rep =
                decode_llpo(decode_input_from_extension(st, 10), streams, {0, 1}, dcfg);
            std::ofstream f(dir / "decode.json", std::ios::binary);
            f << io::decode_report_json(rep).dump(2) << "\n";
        } else if (tag == "c5-unit") {
            cfg.depth = 9;
            ExtensionState st = extend(single_gadget_instance(BitStream{{1}}, 0.0, 0.0), 30, cfg);
            io::write_extend_artifacts(dir.string(), st, cfg, "csv");
        } else if (tag == "c6-blowup") {
            cfg.depth = 8;
            ExtensionState st = extend(expr_instance("y1*y1", 0.0, 1.0), 8, cfg);
            io::write_extend_artifacts(dir.string(), st, cfg, "csv");
        }
        return dir;
    };

    for (const std::string tag : {"c1-exp", "c2-funnel", "c3-forced", "c4-decode", "c5-unit", "c6-blowup"}) {
        fs::path d1 = emit(tag, 1);
        fs::path d4 = emit(tag, 4);
        std::string why;
        bool same = dirs_identical(d1, d4, why);
        out.push_back({"byte-identical artifacts (" + tag + ")", same, why});
    }
    fs::remove_all(base);
    return out;
}

} // namespace

std::vector<CheckResult> acceptance_criterion(int k) {
    switch (k) {
    case 1: return criterion_exponential();
    case 2: return criterion_funnel();
    case 3: return criterion_sign_forcing();
    case 4: return criterion_decoder();
    case 5: return criterion_scaling();
    case 6: return criterion_extension();
    case 7: return criterion_interval();
    case 8: return criterion_determinism();
    default: throw SchemaError("no such acceptance criterion: " + std::to_string(k));
    }
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"closed-forms", "funnel", "decode",
                                                   "extension", "interval"};
    return names;
}

std::vector<CheckResult> run_suite(const std::string& name) {
    auto merge = [](std::initializer_list<int> ks) {
        std::vector<CheckResult> out;
        for (int k : ks) {
            auto part = acceptance_criterion(k);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    };
    if (name == "closed-forms") return merge({1});
    if (name == "funnel") return merge({2, 3});
    if (name == "decode") return merge({4, 5});
    if (name == "extension") return merge({6});
    if (name == "interval") return merge({7});
    throw SchemaError("unknown suite: " + name +
                      " (expected closed-forms, funnel, decode, extension or interval)");
}

} // namespace funnel::verify
