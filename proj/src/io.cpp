#include "qew/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qew/error.hpp"

namespace qew::io {

namespace {

template <typename F>
auto parsing(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string(what) + ": " + e.what());
  }
}

json complex_matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix complex_matrix_from_json(const json& rows, const char* what) {
  if (!rows.is_array() || rows.empty()) {
    throw Error(ErrorKind::Parse, std::string(what) + ": expected a non-empty array of rows");
  }
  const auto n_rows = static_cast<Eigen::Index>(rows.size());
  const auto n_cols = static_cast<Eigen::Index>(rows.front().size());
  ComplexMatrix m(n_rows, n_cols);
  for (Eigen::Index i = 0; i < n_rows; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols) {
      throw Error(ErrorKind::Parse, std::string(what) + ": row " + std::to_string(i + 1) +
                                        " has the wrong length");
    }
    for (Eigen::Index k = 0; k < n_cols; ++k) {
      const json& e = row[static_cast<std::size_t>(k)];
      if (!e.is_array() || e.size() != 2) {
        throw Error(ErrorKind::Parse, std::string(what) + ": entry (" + std::to_string(i + 1) +
                                          "," + std::to_string(k + 1) +
                                          ") is not a [re, im] pair");
      }
      m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

std::string pair_key(int i, int j) { return std::to_string(i + 1) + "," + std::to_string(j + 1); }

std::pair<int, int> parse_pair_key(const std::string& key) {
  const auto comma = key.find(',');
  if (comma == std::string::npos) {
    throw Error(ErrorKind::Parse, "pair key '" + key + "' is not of the form \"i,j\"");
  }
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a_text = key.substr(0, comma);
    const std::string b_text = key.substr(comma + 1);
    const int a = std::stoi(a_text, &used_a);
    const int b = std::stoi(b_text, &used_b);
    if (used_a != a_text.size() || used_b != b_text.size()) throw std::invalid_argument(key);
    return {a - 1, b - 1};
  } catch (const std::logic_error&) {
    throw Error(ErrorKind::Parse, "pair key '" + key + "' is not of the form \"i,j\"");
  }
}

int read_dim(const json& j, const char* what) {
  if (!j.is_object() || !j.contains("d") || !j["d"].is_number_integer()) {
    throw Error(ErrorKind::Parse, std::string(what) + ": missing integer field \"d\"");
  }
  return j["d"].get<int>();
}

json sign_vector_json(const SignVector& xi) { return xi.entries(); }

}  // namespace

json to_json(const DensityMatrix& rho) {
  return {{"d", rho.dim()}, {"matrix", complex_matrix_to_json(rho.matrix())}};
}

DensityMatrix density_from_json(const json& j) {
  return parsing("density matrix", [&] {
    const int d = read_dim(j, "density matrix");
    if (!j.contains("matrix")) throw Error(ErrorKind::Parse, "density matrix: missing \"matrix\"");
    return DensityMatrix(d, complex_matrix_from_json(j["matrix"], "density matrix"));
  });
}

json to_json(const RailState& s) {
  return {{"d", s.dim()}, {"phi", complex_matrix_to_json(s.phi())}};
}

RailState rail_state_from_json(const json& j) {
  return parsing("rail state", [&] {
    const int d = read_dim(j, "rail state");
    if (!j.contains("phi")) throw Error(ErrorKind::Parse, "rail state: missing \"phi\"");
    return RailState(d, complex_matrix_from_json(j["phi"], "rail state"));
  });
}

RailEnsemble ensemble_from_json(const json& j) {
  if (j.is_object() && j.contains("phi")) return RailEnsemble(rail_state_from_json(j));
  if (j.is_object() && j.contains("matrix")) return ensemble_from_density(density_from_json(j));
  throw Error(ErrorKind::Parse, "state file has neither \"phi\" nor \"matrix\"");
}

json to_json(const MeasurementSchedule& s) {
  json turns = json::array();
  for (const auto& t : s.turns) {
    json obs = json::array();
    for (const auto& o : t.observables) {
      json e = {{"tag", to_string(o.tag())}, {"i", o.i() + 1}};
      if (o.is_edge()) e["j"] = o.j() + 1;
      obs.push_back(std::move(e));
    }
    turns.push_back({{"color", to_string(t.color)}, {"observables", std::move(obs)}});
  }
  return {{"d", s.d}, {"turns", std::move(turns)}};
}

MeasurementSchedule schedule_from_json(const json& j) {
  return parsing("schedule", [&] {
    MeasurementSchedule s;
    s.d = read_dim(j, "schedule");
    for (const auto& t : j.at("turns")) {
      Turn turn;
      for (const auto& o : t.at("observables")) {
        const auto tag = o.at("tag").get<std::string>();
        const int i = o.at("i").get<int>() - 1;
        if (tag == "P") {
          turn.observables.push_back(LocalObservable::projector(i));
        } else if (tag == "X" || tag == "Y") {
          const int k = o.at("j").get<int>() - 1;
          turn.observables.push_back(tag == "X" ? LocalObservable::x(i, k)
                                                : LocalObservable::y(i, k));
        } else {
          throw Error(ErrorKind::Parse, "schedule: unknown observable tag '" + tag + "'");
        }
      }
      const auto color = t.at("color").get<std::string>();
      if (color == "red") {
        turn.color = TurnColor::Red;
      } else if (color == "blue") {
        turn.color = TurnColor::Blue;
      } else if (color == "mixed") {
        turn.color = TurnColor::Mixed;
      } else {
        throw Error(ErrorKind::Parse, "schedule: unknown turn color '" + color + "'");
      }
      s.turns.push_back(std::move(turn));
    }
    return s;
  });
}

json to_json(const CorrelationTable& t) {
  const int d = t.dim();
  json p = json::array();
  json x = json::object();
  json y = json::object();
  for (int a = 0; a < d; ++a) {
    const auto v = t.get(LocalObservable::projector(a));
    p.push_back(v ? json(*v) : json(nullptr));
  }
  for (const auto& [obs, v] : t.entries()) {
    if (obs.tag() == ObsTag::X) x[pair_key(obs.i(), obs.j())] = v;
    if (obs.tag() == ObsTag::Y) y[pair_key(obs.i(), obs.j())] = v;
  }
  json out = {{"d", d}, {"p", std::move(p)}, {"x", std::move(x)}, {"y", std::move(y)}};
  if (t.shots_per_turn) out["shots_per_turn"] = *t.shots_per_turn;
  return out;
}

CorrelationTable table_from_json(const json& j) {
  return parsing("correlation table", [&] {
    const int d = read_dim(j, "correlation table");
    CorrelationTable t(d);
    auto check = [](double v, double lo, double hi, const std::string& label) {
      if (!std::isfinite(v) || v < lo || v > hi) {
        std::ostringstream os;
        os << "correlation table: " << label << " = " << v << " outside [" << lo << ", " << hi
           << "]";
        throw Error(ErrorKind::OutOfRange, os.str());
      }
    };
    if (j.contains("p")) {
      const auto& p = j["p"];
      if (!p.is_array() || static_cast<int>(p.size()) != d) {
        throw Error(ErrorKind::Parse, "correlation table: \"p\" must have d entries");
      }
      for (int a = 0; a < d; ++a) {
        if (p[static_cast<std::size_t>(a)].is_null()) continue;
        const double v = p[static_cast<std::size_t>(a)].get<double>();
        const auto obs = LocalObservable::projector(a);
        check(v, -kStructuralTol, 1.0 + kStructuralTol, obs.label());
        t.set(obs, v);
      }
    }
    for (const char* tag : {"x", "y"}) {
      if (!j.contains(tag)) continue;
      for (const auto& [key, value] : j[tag].items()) {
        const auto [a, b] = parse_pair_key(key);
        if (a < 0 || b < 0 || a >= d || b >= d) {
          throw Error(ErrorKind::OutOfRange, std::string("correlation table: pair ") + key +
                                                 " out of range for d=" + std::to_string(d));
        }
        const auto obs = tag[0] == 'x' ? LocalObservable::x(a, b) : LocalObservable::y(a, b);
        const double v = value.get<double>();
        check(v, -2.0, 2.0, obs.label());
        t.set(obs, v);
      }
    }
    if (j.contains("shots_per_turn") && !j["shots_per_turn"].is_null()) {
      t.shots_per_turn = j["shots_per_turn"].get<std::int64_t>();
    }
    return t;
  });
}

std::string table_to_csv(const CorrelationTable& t) {
  std::ostringstream os;
  os << "kind,i,j,value\n";
  for (const auto& [obs, v] : t.entries()) {
    char num[32];
    const auto end = std::to_chars(num, num + sizeof num, v).ptr;
    os << to_string(obs.tag()) << ',' << obs.i() + 1 << ',';
    if (obs.is_edge()) os << obs.j() + 1;
    os << ',' << std::string_view(num, static_cast<std::size_t>(end - num)) << '\n';
  }
  return os.str();
}

json to_json(const BoundReport& r) {
  return {
      {"d", r.d},
      {"f", r.f},
      {"g", r.g},
      {"f_star", r.f_star},
      {"xi_f", sign_vector_json(r.xi_f)},
      {"g_star", r.g_star},
      {"xi_g", sign_vector_json(r.xi_g)},
      {"bound_wer", r.bound_wer},
      {"bound_iso", r.bound_iso},
      {"bound_wer_plain", r.bound_wer_plain},
      {"bound_iso_plain", r.bound_iso_plain},
      {"bound_final", r.bound_final},
      {"diagnostics",
       {{"f_lower", r.diag_f_lower},
        {"f_upper", r.diag_f_upper},
        {"g_lower", r.diag_g_lower},
        {"g_upper", r.diag_g_upper}}},
      {"optimizer", to_string(r.optimizer)},
      {"warnings", r.warnings},
  };
}

json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, path + ": " + e.what());
  }
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Parse, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::Parse, "failed writing '" + path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace qew::io
