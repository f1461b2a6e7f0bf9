#pragma once

// Command-line front end: state -> schedule -> simulate -> bound, each stage
// reading and writing JSON artifacts with a provenance block.
//
// Exit codes: 0 success, 2 user/input error, 3 internal invariant violation.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "qew/postproc.hpp"

namespace qew::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 2;
inline constexpr int kExitInternalError = 3;

enum class StateKind { Werner, Isotropic, Bell, Random, File };

struct StateSpec {
  StateKind kind = StateKind::Bell;
  int d = 2;
  double f = 0.0;
  double g = 0.0;
  int rank = 1;
  std::uint64_t seed = 0;
  std::string path;  // for StateKind::File
};

struct PipelineConfig {
  StateSpec state;
  std::int64_t shots_per_turn = 0;
  std::uint64_t seed = 0;
  OptimizerMode mode = OptimizerMode::Auto;
  std::string out_dir;  // artifacts are written here; created if absent
  bool csv = false;
};

struct PipelineResult {
  BoundReport report;
  std::string state_json;
  std::string schedule_json;
  std::string table_json;
  std::string report_json;
};

/// 64-bit FNV-1a digest, rendered as "fnv1a64:<16 hex digits>".
std::string digest(const std::string& bytes);

/// Serialized state artifact (density matrix or rail state) for a StateSpec.
std::string make_state_artifact(const StateSpec& spec);
std::string make_schedule_artifact(int d);
std::string make_table_artifact(const std::string& state_json, const std::string& schedule_json,
                                std::int64_t shots_per_turn, std::uint64_t seed);
BoundReport make_report(const std::string& table_json, OptimizerMode mode, std::uint64_t seed,
                        std::string* report_json);

PipelineResult run_pipeline(const PipelineConfig& config);

/// Console summary printed by the `bound` and `pipeline` commands.
void print_report(std::ostream& out, const BoundReport& r);

/// Full CLI entry point; never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qew::cli
