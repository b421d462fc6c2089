#include "funnel/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "funnel/io.hpp"
#include "funnel/verify.hpp"

namespace funnel::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNoLocalBox = 2;
constexpr int kExitSchema = 3;
constexpr int kExitUncertified = 4;

struct CommonOpts {
    SolveConfig cfg;
    std::string out;
    std::string format = "csv";
};

void add_engine_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--grid-depth", o.cfg.depth, "grid depth L (2^L cells)")
        ->check(CLI::Range(1, 20));
    cmd->add_option("--refine-rounds", o.cfg.refine_rounds, "Picard rounds per branch")
        ->check(CLI::Range(1, 1000));
    cmd->add_option("--max-bisections", o.cfg.max_bisections, "branch-and-prune split budget")
        ->check(CLI::Range(0, 100000));
    cmd->add_option("--precision", o.cfg.precision, "endpoint significand bits")
        ->check(CLI::Range(16, 53));
    cmd->add_option("--target-width", o.cfg.target_width, "node width goal");
    cmd->add_option("--threads", o.cfg.threads, "parallel branches")->check(CLI::Range(1, 64));
}

void add_output_flags(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("--out", o.out, "output directory (default $FUNNEL_OUT or funnel-out)");
    cmd->add_option("--format", o.format, "artifact format")
        ->check(CLI::IsMember({"csv", "structured"}));
}

std::string out_dir(const CommonOpts& o) {
    if (!o.out.empty()) return o.out;
    if (const char* env = std::getenv("FUNNEL_OUT")) return env;
    return "funnel-out";
}

std::vector<BitStream> parse_streams_spec(const std::string& spec) {
    std::vector<BitStream> streams;
    if (spec.empty()) return streams;
    BitStream cur;
    for (char c : spec) {
        if (c == ';') {
            streams.push_back(std::move(cur));
            cur = BitStream{};
        } else if (c == '0' || c == '1' || c == '2') {
            cur.entries.push_back(static_cast<std::uint8_t>(c - '0'));
        } else {
            throw SchemaError(std::string("stream spec may only contain 0,1,2 and ';': got '") +
                              c + "'");
        }
    }
    streams.push_back(std::move(cur));
    for (const auto& p : streams) p.validate();
    return streams;
}

int cmd_solve(const std::string& path, const CommonOpts& o) {
    IVPInstance inst = io::load_instance(path);
    SolveResult res = enclose_all(inst, inst.x0, inst.y0, o.cfg);
    std::string doc = io::write_solve_artifacts(out_dir(o), res, o.cfg, o.format);
    std::cout << doc << "\n";
    return kExitOk;
}

int cmd_extend(const std::string& path, int rounds, const CommonOpts& o) {
    IVPInstance inst = io::load_instance(path);
    ExtensionState st = extend(inst, rounds, o.cfg, [](const RoundRecord& rec) {
        std::cout << io::round_record_json(rec).dump() << "\n" << std::flush;
    });
    std::string doc = io::write_extend_artifacts(out_dir(o), st, o.cfg, o.format);
    std::cout << doc << "\n";
    return kExitOk;
}

int cmd_gadget(const std::string& streams_spec, int cell_budget, const std::string& out) {
    std::vector<BitStream> streams = parse_streams_spec(streams_spec);
    IVPInstance inst;
    inst.dim = 1;
    inst.rhs = ParallelGadgetRhs{streams, cell_budget};
    inst.x0 = 0.0;
    inst.y0 = {0.0};
    nlohmann::json sj = nlohmann::json::array();
    for (const auto& p : streams) {
        nlohmann::json row = nlohmann::json::array();
        for (auto e : p.entries) row.push_back(static_cast<int>(e));
        sj.push_back(row);
    }
    nlohmann::json j;
    j["schema"] = io::kInstanceSchema;
    j["dimension"] = 1;
    j["rhs"] = nlohmann::json{{"gadget", {{"streams", sj}, {"cell_budget", cell_budget}}}};
    j["domain"] = nlohmann::json{{"gadget_strip", true}};
    j["x0"] = 0.0;
    j["y0"] = nlohmann::json::array({0.0});
    std::ofstream f(out, std::ios::binary);
    if (!f) throw SchemaError("cannot write " + out);
    f << j.dump(2) << "\n";
    std::cout << out << "\n";
    return kExitOk;
}

int cmd_decode(const std::string& result_path, const std::string& instance_path, int bits,
               const std::string& report_out, const CommonOpts& o) {
    if (!std::ifstream(result_path).good())
        throw SchemaError("cannot open artifact: " + result_path);
    IVPInstance inst = io::load_instance(instance_path);
    const auto* pg = std::get_if<ParallelGadgetRhs>(&inst.rhs);
    if (!pg) throw SchemaError("decode needs a parallel-gadget instance");
    int budget = pg->cell_budget;
    DecodeInput input = io::load_decode_input(result_path, budget);
    int count = bits > 0 ? bits : static_cast<int>(pg->streams.size());
    std::vector<int> indices;
    for (int i = 0; i < count; ++i) indices.push_back(i);
    DecodeConfig dcfg;
    dcfg.gadget_solve = o.cfg;
    dcfg.gadget_solve.depth = std::min(o.cfg.depth, 10);
    DecodeReport rep = decode_llpo(input, pg->streams, indices, dcfg);
    nlohmann::json j = io::decode_report_json(rep);
    if (!report_out.empty()) {
        std::ofstream f(report_out, std::ios::binary);
        if (!f) throw SchemaError("cannot write " + report_out);
        f << j.dump(2) << "\n";
    }
    std::cout << j.dump(2) << "\n";
    return rep.all_certified() ? kExitOk : kExitUncertified;
}

int cmd_verify(const std::string& suite) {
    auto results = verify::run_suite(suite);
    bool all = true;
    for (const auto& r : results) {
        nlohmann::json j{{"check", r.name}, {"pass", r.pass}, {"detail", r.detail}};
        std::cout << j.dump() << "\n";
        all = all && r.pass;
    }
    return all ? kExitOk : 1;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"rigorous enclosures for continuous initial value problems"};
    app.require_subcommand(1);

    CommonOpts solve_o, extend_o, decode_o;
    std::string solve_path, extend_path;
    int rounds = 0;
    auto* solve = app.add_subcommand("solve", "enclose the local solution set at (x0,y0)");
    solve->add_option("instance", solve_path, "instance file")->required();
    add_engine_flags(solve, solve_o);
    add_output_flags(solve, solve_o);

    auto* extendc = app.add_subcommand("extend", "grow the enclosure toward a maximal domain");
    extendc->add_option("instance", extend_path, "instance file")->required();
    extendc->add_option("--rounds", rounds, "extension rounds")->required();
    add_engine_flags(extendc, extend_o);
    add_output_flags(extendc, extend_o);

    std::string streams_spec, gadget_out = "gadget-instance.json";
    int cell_budget = 12;
    auto* gadget = app.add_subcommand("gadget", "emit a parallel-gadget instance file");
    gadget->add_option("--streams", streams_spec,
                       "streams over {0,1,2}, ';'-separated, e.g. \"02;1\"");
    gadget->add_option("--cell-budget", cell_budget, "largest represented cell index")
        ->check(CLI::Range(1, 40));
    gadget->add_option("--out", gadget_out, "output instance path");

    std::string dec_result, dec_instance, dec_out;
    int dec_bits = 0;
    auto* decode = app.add_subcommand("decode", "read LLPO bits off a solve/extend artifact");
    decode->add_option("result", dec_result, "result.json or extend.json")->required();
    decode->add_option("instance", dec_instance, "gadget instance file")->required();
    decode->add_option("--bits", dec_bits, "how many bits to decode (default: all streams)");
    decode->add_option("--out", dec_out, "write the report here as well");
    add_engine_flags(decode, decode_o);

    std::string suite;
    auto* verifyc = app.add_subcommand("verify", "run an oracle comparison suite");
    verifyc->add_option("--suite", suite, "one of: closed-forms, funnel, decode, extension, interval")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitSchema;
    }

    try {
        if (solve->parsed()) {
            set_precision_bits(solve_o.cfg.precision);
            return cmd_solve(solve_path, solve_o);
        }
        if (extendc->parsed()) {
            if (rounds < 1) {
                std::cerr << "error: --rounds must be at least 1\n";
                return kExitSchema;
            }
            set_precision_bits(extend_o.cfg.precision);
            return cmd_extend(extend_path, rounds, extend_o);
        }
        if (gadget->parsed()) return cmd_gadget(streams_spec, cell_budget, gadget_out);
        if (decode->parsed()) {
            set_precision_bits(decode_o.cfg.precision);
            return cmd_decode(dec_result, dec_instance, dec_bits, dec_out, decode_o);
        }
        if (verifyc->parsed()) return cmd_verify(suite);
    } catch (const NotInDomain& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoLocalBox;
    } catch (const DomainViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSchema;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitSchema;
}

} // namespace funnel::cli
