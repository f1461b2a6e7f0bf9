#include "qew/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qew/error.hpp"
#include "qew/io.hpp"
#include "qew/localdeco.hpp"
#include "qew/railsim.hpp"

#ifndef QEW_VERSION
#define QEW_VERSION "0.0.0"
#endif

namespace qew::cli {

using io::json;

std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buf;
}

namespace {

json provenance(const std::string& command) {
  return {{"tool", "qew"}, {"version", QEW_VERSION}, {"command", command}};
}

std::string describe(const StateSpec& s) {
  std::ostringstream os;
  os << std::setprecision(17);
  switch (s.kind) {
    case StateKind::Werner: os << "werner f=" << s.f; break;
    case StateKind::Isotropic: os << "isotropic g=" << s.g; break;
    case StateKind::Bell: os << "bell"; break;
    case StateKind::Random: os << "random rank=" << s.rank << " seed=" << s.seed; break;
    case StateKind::File: os << "file"; break;
  }
  return os.str();
}

}  // namespace

std::string make_state_artifact(const StateSpec& spec) {
  json j;
  switch (spec.kind) {
    case StateKind::Werner: j = io::to_json(werner_state(spec.d, spec.f)); break;
    case StateKind::Isotropic: j = io::to_json(isotropic_state(spec.d, spec.g)); break;
    case StateKind::Bell: j = io::to_json(bell_rail_state(spec.d)); break;
    case StateKind::Random:
      j = io::to_json(random_density_matrix(spec.d, spec.rank, spec.seed));
      break;
    case StateKind::File: {
      const json in = io::read_json_file(spec.path);
      // Re-validate through the typed readers before passing the file on.
      j = in.contains("phi") ? io::to_json(io::rail_state_from_json(in))
                             : io::to_json(io::density_from_json(in));
      break;
    }
  }
  j["provenance"] = provenance("state");
  j["provenance"]["spec"] = describe(spec);
  if (spec.kind == StateKind::Random) j["provenance"]["seed"] = spec.seed;
  return io::dump(j);
}

std::string make_schedule_artifact(int d) {
  json j = io::to_json(schedule(d));
  j["provenance"] = provenance("schedule");
  return io::dump(j);
}

std::string make_table_artifact(const std::string& state_json, const std::string& schedule_json,
                                std::int64_t shots_per_turn, std::uint64_t seed) {
  const RailEnsemble ensemble = io::ensemble_from_json(json::parse(state_json));
  const MeasurementSchedule sched = io::schedule_from_json(json::parse(schedule_json));
  if (sched.d != ensemble.dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "state has d=" + std::to_string(ensemble.dim()) + " but schedule has d=" +
                    std::to_string(sched.d));
  }
  if (const auto violations = validate_schedule(sched); !violations.empty()) {
    throw Error(ErrorKind::InvalidSchedule, "schedule is invalid: " + violations.front().message);
  }
  const CorrelationTable table = run_experiment(ensemble, sched, shots_per_turn, seed);
  json j = io::to_json(table);
  j["provenance"] = provenance("simulate");
  j["provenance"]["seed"] = seed;
  j["provenance"]["shots_per_turn"] = shots_per_turn;
  j["provenance"]["inputs"] = {{"state", digest(state_json)}, {"schedule", digest(schedule_json)}};
  return io::dump(j);
}

BoundReport make_report(const std::string& table_json, OptimizerMode mode, std::uint64_t seed,
                        std::string* report_json) {
  const CorrelationTable table = io::table_from_json(json::parse(table_json));
  BoundReport report = entanglement_report(table, mode, seed);
  if (report_json) {
    json j = io::to_json(report);
    j["provenance"] = provenance("bound");
    j["provenance"]["mode"] = to_string(mode);
    j["provenance"]["seed"] = seed;
    j["provenance"]["inputs"] = {{"table", digest(table_json)}};
    *report_json = io::dump(j);
  }
  return report;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  PipelineResult r;
  r.state_json = make_state_artifact(config.state);
  const int d = json::parse(r.state_json).at("d").get<int>();
  r.schedule_json = make_schedule_artifact(d);
  r.table_json = make_table_artifact(r.state_json, r.schedule_json, config.shots_per_turn,
                                     config.seed);
  r.report = make_report(r.table_json, config.mode, config.seed, &r.report_json);

  if (!config.out_dir.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) {
      throw Error(ErrorKind::Parse, "cannot create output directory '" + config.out_dir + "'");
    }
    const fs::path dir(config.out_dir);
    io::write_text_file((dir / "state.json").string(), r.state_json);
    io::write_text_file((dir / "schedule.json").string(), r.schedule_json);
    io::write_text_file((dir / "table.json").string(), r.table_json);
    io::write_text_file((dir / "report.json").string(), r.report_json);
    if (config.csv) {
      io::write_text_file((dir / "table.csv").string(),
                          io::table_to_csv(io::table_from_json(json::parse(r.table_json))));
    }
  }
  return r;
}

void print_report(std::ostream& out, const BoundReport& r) {
  auto signs = [](const SignVector& xi) {
    std::string s;
    for (int e : xi.entries()) s += e > 0 ? '+' : '-';
    return s;
  };
  const auto flags = out.flags();
  out << std::fixed << std::setprecision(6);
  out << "d = " << r.d << '\n';
  out << "f = " << r.f << "   g = " << r.g << '\n';
  out << "f* = " << r.f_star << " (xi = " << signs(r.xi_f) << ")   g* = " << r.g_star
      << " (xi = " << signs(r.xi_g) << ")\n";
  out << "bound_wer = " << r.bound_wer << " ebit   bound_iso = " << r.bound_iso << " ebit\n";
  out << "optimizer: " << to_string(r.optimizer);
  if (r.optimizer == OptimizerMode::Heuristic) out << " (lower bound may be loose)";
  out << '\n';
  for (const auto& w : r.warnings) {
    if (w.rfind("heuristic", 0) == 0) continue;
    out << "warning: " << w << '\n';
  }
  out << "bound_final = " << r.bound_final << " ebit\n";
  out.flags(flags);
}

namespace {

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text_file(path, text);
  }
}

struct StateFlags {
  bool werner = false;
  bool isotropic = false;
  bool bell = false;
  bool random = false;
  std::string file;
  StateSpec spec;

  void attach(CLI::App& app, bool allow_file) {
    app.add_flag("--werner", werner, "Werner state rho_W(f)");
    app.add_flag("--isotropic", isotropic, "isotropic state rho_I(g)");
    app.add_flag("--bell", bell, "maximally entangled rail state");
    app.add_flag("--random", random, "random density matrix (see --rank, --seed)");
    if (allow_file) app.add_option("--file", file, "state JSON file");
    app.add_option("-d", spec.d, "local dimension")->capture_default_str();
    app.add_option("-f", spec.f, "Werner parameter Tr[F rho] in [-1, 1]");
    app.add_option("-g", spec.g, "isotropic parameter Tr[G rho] in [0, d]");
    app.add_option("--rank", spec.rank, "rank of the random state")->capture_default_str();
  }

  StateSpec resolve(std::uint64_t seed) {
    const int chosen = int(werner) + int(isotropic) + int(bell) + int(random) + int(!file.empty());
    if (chosen != 1) {
      throw Error(ErrorKind::Parse,
                  "choose exactly one of --werner, --isotropic, --bell, --random" +
                      std::string(file.empty() ? "" : ", --file"));
    }
    spec.seed = seed;
    if (werner) spec.kind = StateKind::Werner;
    if (isotropic) spec.kind = StateKind::Isotropic;
    if (bell) spec.kind = StateKind::Bell;
    if (random) spec.kind = StateKind::Random;
    if (!file.empty()) {
      spec.kind = StateKind::File;
      spec.path = file;
    }
    return spec;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement lower bounds from Werner/isotropic witness measurements", "qew"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QEW_VERSION);

  std::uint64_t seed = 0;
  std::string out_path;
  std::string csv_path;
  std::int64_t shots = 0;
  std::string mode_text = "auto";

  auto* state_cmd = app.add_subcommand("state", "write a state file");
  StateFlags state_flags;
  state_flags.attach(*state_cmd, false);
  state_cmd->add_option("--seed", seed, "seed for --random");
  state_cmd->add_option("--out", out_path, "output path (default: stdout)");

  auto* sched_cmd = app.add_subcommand("schedule", "write the measurement schedule for d");
  int sched_d = 0;
  sched_cmd->add_option("-d", sched_d, "local dimension")->required();
  sched_cmd->add_option("--out", out_path, "output path (default: listing only)");

  auto* sim_cmd = app.add_subcommand("simulate", "simulate the rail experiment");
  std::string state_path;
  std::string schedule_path;
  sim_cmd->add_option("--state", state_path, "state JSON (rail state or density matrix)")
      ->required();
  sim_cmd->add_option("--schedule", schedule_path, "schedule JSON")->required();
  sim_cmd->add_option("--shots", shots, "shots per turn (0 = exact)")->capture_default_str();
  sim_cmd->add_option("--seed", seed, "sampling seed")->capture_default_str();
  sim_cmd->add_option("--out", out_path, "output path (default: stdout)");
  sim_cmd->add_option("--csv", csv_path, "also write the table as CSV");

  auto* bound_cmd = app.add_subcommand("bound", "compute the entanglement lower bound");
  std::string table_path;
  bound_cmd->add_option("--table", table_path, "correlation table JSON")->required();
  bound_cmd->add_option("--mode", mode_text, "exact|heuristic|auto")->capture_default_str();
  bound_cmd->add_option("--seed", seed, "seed for the heuristic optimizer");
  bound_cmd->add_option("--out", out_path, "report path");

  auto* pipe_cmd = app.add_subcommand("pipeline", "state -> schedule -> simulate -> bound");
  StateFlags pipe_flags;
  pipe_flags.attach(*pipe_cmd, true);
  pipe_cmd->add_option("--shots", shots, "shots per turn (0 = exact)")->capture_default_str();
  pipe_cmd->add_option("--seed", seed, "seed for sampling and random states")
      ->capture_default_str();
  pipe_cmd->add_option("--mode", mode_text, "exact|heuristic|auto")->capture_default_str();
  std::string out_dir = "qew_out";
  pipe_cmd->add_option("--out", out_dir, "artifact directory")->capture_default_str();
  bool pipe_csv = false;
  pipe_cmd->add_flag("--csv", pipe_csv, "also write table.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUserError;
  }

  try {
    if (state_cmd->parsed()) {
      emit(make_state_artifact(state_flags.resolve(seed)), out_path, out);
      if (!out_path.empty()) out << "wrote " << out_path << '\n';
    } else if (sched_cmd->parsed()) {
      const MeasurementSchedule s = schedule(sched_d);
      for (std::size_t t = 0; t < s.turns.size(); ++t) {
        out << "turn " << t + 1 << " [" << to_string(s.turns[t].color) << "]:";
        for (const auto& o : s.turns[t].observables) out << ' ' << o.label();
        out << '\n';
      }
      out << s.turns.size() << " turns\n";
      if (!out_path.empty()) io::write_text_file(out_path, make_schedule_artifact(sched_d));
    } else if (sim_cmd->parsed()) {
      const std::string table_json =
          make_table_artifact(io::read_text_file(state_path), io::read_text_file(schedule_path),
                              shots, seed);
      emit(table_json, out_path, out);
      if (!csv_path.empty()) {
        io::write_text_file(csv_path,
                            io::table_to_csv(io::table_from_json(json::parse(table_json))));
      }
    } else if (bound_cmd->parsed()) {
      std::string report_json;
      const BoundReport r =
          make_report(io::read_text_file(table_path), parse_optimizer_mode(mode_text), seed,
                      &report_json);
      if (!out_path.empty()) io::write_text_file(out_path, report_json);
      print_report(out, r);
    } else if (pipe_cmd->parsed()) {
      PipelineConfig config;
      config.state = pipe_flags.resolve(seed);
      config.shots_per_turn = shots;
      config.seed = seed;
      config.mode = parse_optimizer_mode(mode_text);
      config.out_dir = out_dir;
      config.csv = pipe_csv;
      const PipelineResult r = run_pipeline(config);
      out << std::fixed << std::setprecision(6) << "bound_final = " << r.report.bound_final
          << " ebit (" << to_string(r.report.optimizer) << ", artifacts in " << out_dir
          << ")\n";
    }
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return kExitUserError;
  } catch (const json::exception& e) {
    err << "error [parse]: " << e.what() << '\n';
    return kExitUserError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternalError;
  }
  return kExitOk;
}

}  // namespace qew::cli
