#include "funnel/io.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace funnel::io {

using nlohmann::json;

// ---------------------------------------------------------------- decimal

namespace {

// Decimal digit-string doubling / quintupling, little helpers for the exact
// expansion of mantissa * 2^exp.
void digits_mul_small(std::string& digits, int factor) {
    int carry = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        int v = (*it - '0') * factor + carry;
        *it = static_cast<char>('0' + v % 10);
        carry = v / 10;
    }
    while (carry) {
        digits.insert(digits.begin(), static_cast<char>('0' + carry % 10));
        carry /= 10;
    }
}

} // namespace

std::string exact_decimal(double v) {
    if (v == 0.0) return "0";
    std::string sign = std::signbit(v) ? "-" : "";
    double av = std::abs(v);
    int e2;
    double m = std::frexp(av, &e2);
    auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
    int exp = e2 - 53;  // av = mant * 2^exp
    while (mant && (mant & 1) == 0) {
        mant >>= 1;
        ++exp;
    }
    std::string digits = std::to_string(mant);
    if (exp >= 0) {
        for (int i = 0; i < exp; ++i) digits_mul_small(digits, 2);
        return sign + digits;
    }
    // mant * 2^exp = mant * 5^(-exp) / 10^(-exp)
    int shift = -exp;
    for (int i = 0; i < shift; ++i) digits_mul_small(digits, 5);
    if (static_cast<int>(digits.size()) <= shift)
        digits.insert(digits.begin(), static_cast<std::size_t>(shift) - digits.size() + 1, '0');
    std::string whole = digits.substr(0, digits.size() - static_cast<std::size_t>(shift));
    std::string frac = digits.substr(digits.size() - static_cast<std::size_t>(shift));
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    if (frac.empty()) return sign + whole;
    return sign + whole + "." + frac;
}

// --------------------------------------------------------------- schemas

void require_schema(const json& j, const char* expected) {
    if (!j.contains("schema") || !j["schema"].is_string())
        throw SchemaError("missing schema field");
    std::string got = j["schema"].get<std::string>();
    std::string want(expected);
    auto split = [](const std::string& s) {
        auto slash = s.find('/');
        std::string name = slash == std::string::npos ? s : s.substr(0, slash);
        long major = -1;
        if (slash != std::string::npos) {
            const std::string rest = s.substr(slash + 1);
            major = std::strtol(rest.c_str(), nullptr, 10);
        }
        return std::pair<std::string, long>(name, major);
    };
    if (split(got) != split(want))
        throw SchemaError("unsupported schema '" + got + "', expected '" + want + "'");
}

// -------------------------------------------------------------- instance

namespace {

BitStream stream_from_json(const json& j) {
    BitStream p;
    for (const auto& e : j) {
        if (!e.is_number_integer()) throw SchemaError("stream entries must be integers");
        int v = e.get<int>();
        if (v < 0 || v > 2) throw DomainViolation("stream entries must be 0, 1 or 2");
        p.entries.push_back(static_cast<std::uint8_t>(v));
    }
    p.validate();
    return p;
}

} // namespace

IVPInstance instance_from_json(const json& j) {
    require_schema(j, kInstanceSchema);
    IVPInstance inst;
    if (!j.contains("dimension")) throw SchemaError("missing dimension");
    inst.dim = j["dimension"].get<int>();
    if (inst.dim < 1) throw SchemaError("dimension must be >= 1");

    const auto& rhs = j.at("rhs");
    if (rhs.contains("expr")) {
        inst.rhs = parse_rhs(rhs["expr"].get<std::string>(), inst.dim);
    } else if (rhs.contains("gadget")) {
        const auto& g = rhs["gadget"];
        if (inst.dim != 1) throw SchemaError("gadget right-hand sides are one-dimensional");
        if (g.contains("single")) {
            SingleGadgetRhs sg;
            sg.p = stream_from_json(g["single"]);
            inst.rhs = std::move(sg);
        } else {
            ParallelGadgetRhs pg;
            for (const auto& s : g.at("streams")) pg.streams.push_back(stream_from_json(s));
            pg.cell_budget = g.value("cell_budget", 12);
            if (pg.cell_budget < 1) throw SchemaError("cell_budget must be >= 1");
            inst.rhs = std::move(pg);
        }
    } else {
        throw SchemaError("rhs must contain 'expr' or 'gadget'");
    }

    const auto& dom = j.at("domain");
    if (dom.contains("auto_growing") && dom["auto_growing"].get<bool>()) {
        inst.domain = auto_growing_domain(inst.dim);
    } else if (dom.contains("gadget_strip") && dom["gadget_strip"].get<bool>()) {
        if (inst.dim != 1) throw SchemaError("gadget_strip domain is one-dimensional");
        inst.domain = gadget_strip_domain();
    } else if (dom.contains("balls")) {
        for (const auto& bj : dom["balls"]) {
            Ball b;
            for (const auto& c : bj.at("center")) b.center.push_back(c.get<double>());
            b.radius = bj.at("radius").get<double>();
            if (b.center.size() != static_cast<std::size_t>(inst.dim) + 1)
                throw SchemaError("ball center must have dimension n+1");
            if (!(b.radius > 0.0)) throw SchemaError("ball radius must be positive");
            inst.domain.balls.push_back(std::move(b));
        }
        if (inst.domain.balls.empty()) throw SchemaError("domain has no balls");
    } else {
        throw SchemaError("domain must contain 'balls', 'auto_growing' or 'gadget_strip'");
    }

    inst.x0 = j.at("x0").get<double>();
    for (const auto& v : j.at("y0")) inst.y0.push_back(v.get<double>());
    if (inst.y0.size() != static_cast<std::size_t>(inst.dim))
        throw SchemaError("y0 must have dimension n");
    return inst;
}

IVPInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open instance file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("instance file is not valid JSON: ") + e.what());
    }
    return instance_from_json(j);
}

nlohmann::json instance_to_json(const IVPInstance& inst, const json& rhs_field) {
    json j;
    j["schema"] = kInstanceSchema;
    j["dimension"] = inst.dim;
    j["rhs"] = rhs_field;
    json balls = json::array();
    for (const auto& b : inst.domain.balls)
        balls.push_back(json{{"center", b.center}, {"radius", b.radius}});
    j["domain"] = json{{"balls", balls}};
    j["x0"] = inst.x0;
    j["y0"] = inst.y0;
    return j;
}

int instance_cell_budget(const IVPInstance& inst) {
    if (const auto* pg = std::get_if<ParallelGadgetRhs>(&inst.rhs)) return pg->cell_budget;
    return 0;
}

// -------------------------------------------------------------- tube I/O

std::string tube_csv(const Tube& t) {
    std::ostringstream out;
    out << "x";
    for (int c = 1; c <= t.dim(); ++c) out << ",lo_" << c << ",hi_" << c;
    out << "\n";
    for (std::size_t j = 0; j < t.node_count(); ++j) {
        out << exact_decimal(t.xs[j]);
        for (int c = 0; c < t.dim(); ++c) {
            const Interval& v = t.nodes[j][static_cast<std::size_t>(c)];
            out << "," << exact_decimal(v.lo) << "," << exact_decimal(v.hi);
        }
        out << "\n";
    }
    return out.str();
}

namespace {

json interval_json(const Interval& v) { return json::array({v.lo, v.hi}); }

Interval interval_from_json(const json& j) {
    return Interval(j.at(0).get<double>(), j.at(1).get<double>());
}

json ibox_json(const IBox& b) {
    json a = json::array();
    for (const auto& v : b.c) a.push_back(interval_json(v));
    return a;
}

IBox ibox_from_json(const json& j) {
    IBox b;
    for (const auto& e : j) b.c.push_back(interval_from_json(e));
    return b;
}

} // namespace

json tube_meta_json(const Tube& t) {
    json j;
    j["depth"] = t.depth;
    j["anchor_index"] = t.anchor;
    j["x0"] = t.xs[static_cast<std::size_t>(t.anchor)];
    j["h"] = t.node_count() > 1 ? t.xs[1] - t.xs[0] : 0.0;
    j["lip"] = t.lip;
    j["anchor_value"] = ibox_json(t.anchor_value);
    j["clip"] = ibox_json(t.clip);
    return j;
}

Tube tube_from_json(const json& meta, const std::string& csv) {
    Tube t;
    t.depth = meta.at("depth").get<int>();
    t.anchor = meta.at("anchor_index").get<int>();
    t.lip = meta.at("lip").get<double>();
    t.anchor_value = ibox_from_json(meta.at("anchor_value"));
    t.clip = ibox_from_json(meta.at("clip"));
    double x0 = meta.at("x0").get<double>();
    double h = meta.at("h").get<double>();
    std::size_t count = (std::size_t{1} << t.depth) + 1;
    t.xs.resize(count);
    for (std::size_t j = 0; j < count; ++j)
        t.xs[j] = x0 + (static_cast<double>(static_cast<int>(j) - t.anchor)) * h;
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cellv;
        std::vector<double> vals;
        while (std::getline(row, cellv, ',')) vals.push_back(std::strtod(cellv.c_str(), nullptr));
        if (vals.size() != 1 + 2 * t.anchor_value.size())
            throw SchemaError("tube CSV row has wrong arity");
        IBox nb(t.anchor_value.size());
        for (std::size_t c = 0; c < nb.size(); ++c)
            nb[c] = Interval(vals[1 + 2 * c], vals[2 + 2 * c]);
        t.nodes.push_back(std::move(nb));
    }
    if (t.nodes.size() != count) throw SchemaError("tube CSV node count mismatch");
    return t;
}

// ------------------------------------------------------------- artifacts

namespace {

void write_file(const std::filesystem::path& p, const std::string& content) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw SchemaError("cannot write " + p.string());
    out << content;
}

json localbox_json(const LocalBox& lb) {
    json j;
    j["m"] = lb.m_sel;
    j["k"] = lb.k_sel;
    j["delta"] = lb.delta;
    j["M"] = lb.M;
    j["a"] = lb.a;
    j["b"] = lb.b;
    j["x0"] = lb.x0;
    j["y0"] = lb.y0;
    j["step"] = lb.step;
    return j;
}

json config_json(const SolveConfig& cfg) {
    return json{{"depth", cfg.depth},
                {"refine_rounds", cfg.refine_rounds},
                {"max_bisections", cfg.max_bisections},
                {"precision", cfg.precision},
                {"target_width", cfg.target_width}};
}

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::Inside: return "inside";
    case Verdict::Empty: return "empty";
    default: return "unknown";
    }
}

json branch_json(const BranchTube& bt, const std::string& csv_name, bool inline_nodes) {
    json tj;
    tj["id"] = bt.id;
    tj["split_path"] = bt.split_path;
    tj["verdict"] = verdict_name(bt.verdict);
    tj["max_width"] = bt.tube.max_width();
    tj["meta"] = tube_meta_json(bt.tube);
    if (inline_nodes) {
        json nodes = json::array();
        for (const auto& nb : bt.tube.nodes) nodes.push_back(ibox_json(nb));
        tj["nodes"] = nodes;
    } else {
        tj["csv"] = csv_name;
    }
    return tj;
}

Tube tube_from_branch_json(const json& tj, const std::filesystem::path& base) {
    if (tj.contains("nodes")) {
        Tube t;
        const json& meta = tj.at("meta");
        t.depth = meta.at("depth").get<int>();
        t.anchor = meta.at("anchor_index").get<int>();
        t.lip = meta.at("lip").get<double>();
        t.anchor_value = ibox_from_json(meta.at("anchor_value"));
        t.clip = ibox_from_json(meta.at("clip"));
        double x0 = meta.at("x0").get<double>();
        double h = meta.at("h").get<double>();
        std::size_t count = (std::size_t{1} << t.depth) + 1;
        t.xs.resize(count);
        for (std::size_t j = 0; j < count; ++j)
            t.xs[j] = x0 + (static_cast<double>(static_cast<int>(j) - t.anchor)) * h;
        for (const auto& nj : tj.at("nodes")) t.nodes.push_back(ibox_from_json(nj));
        if (t.nodes.size() != count) throw SchemaError("inline node count mismatch");
        return t;
    }
    std::ifstream in(base / tj.at("csv").get<std::string>());
    if (!in) throw SchemaError("cannot open tube CSV");
    std::ostringstream buf;
    buf << in.rdbuf();
    return tube_from_json(tj.at("meta"), buf.str());
}

} // namespace

std::string write_solve_artifacts(const std::string& dir, const SolveResult& res,
                                  const SolveConfig& cfg, const std::string& format) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    bool inline_nodes = format == "structured";
    json j;
    j["schema"] = kSolveSchema;
    j["local_box"] = localbox_json(res.box);
    j["config"] = config_json(cfg);
    j["pruned_count"] = res.pruned_count;
    j["bisections_used"] = res.bisections_used;
    json tubes = json::array();
    int file_no = 0;
    auto emit = [&](const BranchTube& bt) {
        char name[32];
        std::snprintf(name, sizeof name, "tube_%03d.csv", file_no++);
        tubes.push_back(branch_json(bt, name, inline_nodes));
        if (!inline_nodes) write_file(fs::path(dir) / name, tube_csv(bt.tube));
    };
    for (const auto& bt : res.confirmed) emit(bt);
    for (const auto& bt : res.undecided) emit(bt);
    j["tubes"] = tubes;
    std::string path = (fs::path(dir) / "result.json").string();
    write_file(path, j.dump(2) + "\n");
    return path;
}

json round_record_json(const RoundRecord& rec) {
    auto side = [](const SideRecord& sr) {
        json j;
        j["attempted"] = sr.attempted;
        j["grew"] = sr.grew;
        if (!sr.frozen_reason.empty()) j["frozen_reason"] = sr.frozen_reason;
        j["edge_before"] = sr.edge_before;
        j["edge_after"] = sr.edge_after;
        j["delta"] = sr.delta;
        j["M"] = sr.M;
        j["anchor_rad"] = sr.anchor_rad;
        return j;
    };
    json j;
    j["round"] = rec.round;
    j["a"] = rec.a;
    j["b"] = rec.b;
    j["left"] = side(rec.left);
    j["right"] = side(rec.right);
    return j;
}

std::string write_extend_artifacts(const std::string& dir, const ExtensionState& st,
                                   const SolveConfig& cfg, const std::string& format) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    bool inline_nodes = format == "structured";
    json j;
    j["schema"] = kExtendSchema;
    j["config"] = config_json(cfg);
    j["rounds_done"] = st.rounds_done;
    j["a"] = st.a;
    j["b"] = st.b;
    j["left_growing"] = st.left_growing;
    j["right_growing"] = st.right_growing;
    if (!st.left_frozen_reason.empty()) j["left_frozen_reason"] = st.left_frozen_reason;
    if (!st.right_frozen_reason.empty()) j["right_frozen_reason"] = st.right_frozen_reason;

    json segs = json::array();
    int file_no = 0;
    std::ostringstream glued;
    glued << "x";
    int dim = st.segments.empty() ? 1 : st.segments[0].tube.dim();
    for (int c = 1; c <= dim; ++c) glued << ",lo_" << c << ",hi_" << c;
    glued << "\n";
    for (const auto& seg : st.segments) {
        json sj;
        sj["lo"] = seg.lo;
        sj["hi"] = seg.hi;
        sj["local_box"] = localbox_json(seg.solve.box);
        json tubes = json::array();
        for (const auto* bt : seg.solve.all_tubes()) {
            char name[32];
            std::snprintf(name, sizeof name, "tube_%03d.csv", file_no++);
            tubes.push_back(branch_json(*bt, name, inline_nodes));
            if (!inline_nodes) write_file(fs::path(dir) / name, tube_csv(bt->tube));
        }
        sj["tubes"] = tubes;
        segs.push_back(sj);
        for (std::size_t n = 0; n < seg.tube.node_count(); ++n) {
            double x = seg.tube.xs[n];
            if (x < seg.lo || x > seg.hi) continue;
            glued << exact_decimal(x);
            for (int c = 0; c < dim; ++c) {
                const Interval& v = seg.tube.nodes[n][static_cast<std::size_t>(c)];
                glued << "," << exact_decimal(v.lo) << "," << exact_decimal(v.hi);
            }
            glued << "\n";
        }
    }
    j["segments"] = segs;

    json rounds = json::array();
    for (const auto& rec : st.records) rounds.push_back(round_record_json(rec));
    j["rounds"] = rounds;

    std::ostringstream lines;
    for (const auto& rec : st.records) lines << round_record_json(rec).dump() << "\n";
    write_file(fs::path(dir) / "rounds.jsonl", lines.str());
    write_file(fs::path(dir) / "glued.csv", glued.str());
    std::string path = (fs::path(dir) / "extend.json").string();
    write_file(path, j.dump(2) + "\n");
    return path;
}

DecodeInput load_decode_input(const std::string& artifact_path, int cell_budget) {
    namespace fs = std::filesystem;
    std::ifstream in(artifact_path);
    if (!in) throw SchemaError("cannot open artifact: " + artifact_path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("artifact is not valid JSON: ") + e.what());
    }
    fs::path base = fs::path(artifact_path).parent_path();
    DecodeInput input;
    input.cell_budget = cell_budget;
    if (!j.contains("schema") || !j["schema"].is_string())
        throw SchemaError("missing schema field");
    std::string schema = j["schema"].get<std::string>();
    auto group_from_tubes = [&](const json& tubes, const std::string& id, double lo, double hi) {
        WitnessGroup g;
        g.id = id;
        g.lo = lo;
        g.hi = hi;
        for (const auto& tj : tubes) {
            g.tubes.push_back(tube_from_branch_json(tj, base));
            g.inside.push_back(tj.at("verdict").get<std::string>() == "inside");
        }
        return g;
    };
    if (schema.rfind("funnel-solve/", 0) == 0) {
        require_schema(j, kSolveSchema);
        double lo = j.at("local_box").at("a").get<double>();
        double hi = j.at("local_box").at("b").get<double>();
        input.groups.push_back(group_from_tubes(j.at("tubes"), "solve", lo, hi));
        input.cover_lo = lo;
        input.cover_hi = hi;
        return input;
    }
    if (schema.rfind("funnel-extend/", 0) == 0) {
        require_schema(j, kExtendSchema);
        input.cover_lo = j.at("a").get<double>();
        input.cover_hi = j.at("b").get<double>();
        int k = 0;
        for (const auto& sj : j.at("segments")) {
            double lo = sj.at("lo").get<double>();
            double hi = sj.at("hi").get<double>();
            input.groups.push_back(
                group_from_tubes(sj.at("tubes"), "segment" + std::to_string(k++), lo, hi));
        }
        return input;
    }
    throw SchemaError("unsupported artifact schema: " + schema);
}

json decode_report_json(const DecodeReport& rep) {
    json j;
    j["schema"] = kDecodeSchema;
    json bits = json::array();
    for (const auto& b : rep.bits) {
        bits.push_back(json{{"i", b.i},
                            {"bit", b.bit},
                            {"certified", b.certified},
                            {"cell_m", b.cell_m},
                            {"sample_x", b.sample_x},
                            {"witness", b.witness}});
    }
    j["bits"] = bits;
    j["unavailable"] = rep.unavailable;
    j["all_certified"] = rep.all_certified();
    return j;
}

} // namespace funnel::io
