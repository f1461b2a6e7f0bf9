#pragma once

// JSON (and CSV) forms of the artifacts exchanged between pipeline stages.
// Channel labels are 1-based on disk. Complex entries are [re, im] pairs.

#include <string>

#include <json.hpp>

#include "qew/localdeco.hpp"
#include "qew/postproc.hpp"
#include "qew/qstate.hpp"
#include "qew/railsim.hpp"

namespace qew::io {

using nlohmann::json;

json to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(const json& j);

json to_json(const RailState& s);
RailState rail_state_from_json(const json& j);

json to_json(const MeasurementSchedule& s);
MeasurementSchedule schedule_from_json(const json& j);

/// { "d", "p": [...], "x": {"1,2": v}, "y": {...}, "shots_per_turn"? }
json to_json(const CorrelationTable& t);
CorrelationTable table_from_json(const json& j);
/// kind,i,j,value rows (kind in P/X/Y; j empty for P).
std::string table_to_csv(const CorrelationTable& t);

json to_json(const BoundReport& r);

/// Either a density-matrix file ("matrix") or a rail-state file ("phi"),
/// converted to the ensemble the simulator consumes.
RailEnsemble ensemble_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Pretty-printed with a trailing newline.
std::string dump(const json& j);

}  // namespace qew::io
