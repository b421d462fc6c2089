#ifndef FUNNEL_IO_HPP
#define FUNNEL_IO_HPP

#include <string>

#include <json.hpp>

#include "funnel/decode.hpp"

namespace funnel::io {

// Exact decimal expansion of a double (doubles are dyadic rationals, so the
// expansion is finite). Used for bit-exact CSV output.
std::string exact_decimal(double v);

// Instance files ---------------------------------------------------------

inline constexpr const char* kInstanceSchema = "funnel-instance/1";
inline constexpr const char* kSolveSchema = "funnel-solve/1";
inline constexpr const char* kExtendSchema = "funnel-extend/1";
inline constexpr const char* kDecodeSchema = "funnel-decode/1";

// Throws SchemaError / SyntaxError / DimensionError.
IVPInstance instance_from_json(const nlohmann::json& j);
IVPInstance load_instance(const std::string& path);
nlohmann::json instance_to_json(const IVPInstance& inst, const nlohmann::json& rhs_field);

// Returns the cell budget for gadget instances, 0 for expression instances.
int instance_cell_budget(const IVPInstance& inst);

// Artifacts ---------------------------------------------------------------

std::string tube_csv(const Tube& t);
nlohmann::json tube_meta_json(const Tube& t);
Tube tube_from_json(const nlohmann::json& meta, const std::string& csv);

// Writes result.json plus per-tube CSVs ("structured" inlines node arrays
// into the JSON instead). Returns the result.json path.
std::string write_solve_artifacts(const std::string& dir, const SolveResult& res,
                                  const SolveConfig& cfg, const std::string& format);

// Writes extend.json, rounds.jsonl and glued.csv; returns the extend.json
// path. Round records are also meant for streaming (one JSON object each).
std::string write_extend_artifacts(const std::string& dir, const ExtensionState& st,
                                   const SolveConfig& cfg, const std::string& format);
nlohmann::json round_record_json(const RoundRecord& rec);

// Rebuild decoder input from an artifact document (solve or extend).
DecodeInput load_decode_input(const std::string& artifact_path, int cell_budget);

nlohmann::json decode_report_json(const DecodeReport& rep);

// Shared schema check: "name/major".
void require_schema(const nlohmann::json& j, const char* expected);

} // namespace funnel::io

#endif
