#include "qew/localdeco.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "qew/error.hpp"

namespace qew {

const char* to_string(ObsTag tag) noexcept {
  switch (tag) {
    case ObsTag::P: return "P";
    case ObsTag::X: return "X";
    case ObsTag::Y: return "Y";
  }
  return "?";
}

const char* to_string(TurnColor color) noexcept {
  switch (color) {
    case TurnColor::Red: return "red";
    case TurnColor::Blue: return "blue";
    case TurnColor::Mixed: return "mixed";
  }
  return "?";
}

namespace {

void require_pair(int i, int j) {
  if (i < 0 || j < 0) {
    throw Error(ErrorKind::OutOfRange, "observable indices must be non-negative");
  }
  if (i == j) {
    throw Error(ErrorKind::OutOfRange,
                "X/Y observables need two distinct channels, got " + std::to_string(i + 1) +
                    " twice");
  }
}

}  // namespace

LocalObservable LocalObservable::projector(int i) {
  if (i < 0) throw Error(ErrorKind::OutOfRange, "observable indices must be non-negative");
  return {ObsTag::P, i, i};
}

LocalObservable LocalObservable::x(int i, int j) {
  require_pair(i, j);
  return {ObsTag::X, std::min(i, j), std::max(i, j)};
}

LocalObservable LocalObservable::y(int i, int j) {
  require_pair(i, j);
  return {ObsTag::Y, std::min(i, j), std::max(i, j)};
}

std::string LocalObservable::label() const {
  std::string out = to_string(tag_);
  out += "(" + std::to_string(i_ + 1);
  if (is_edge()) out += "," + std::to_string(j_ + 1);
  return out + ")";
}

ComplexMatrix observable_matrix(const LocalObservable& obs, int d) {
  if (obs.j() >= d) {
    throw Error(ErrorKind::OutOfRange,
                obs.label() + " is out of range for d=" + std::to_string(d));
  }
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  const int a = obs.i();
  const int b = obs.j();
  switch (obs.tag()) {
    case ObsTag::P:
      m(a, a) = 1.0;
      break;
    case ObsTag::X:
      m(a, b) = 1.0;
      m(b, a) = 1.0;
      break;
    case ObsTag::Y:
      m(a, b) = Complex(0.0, 1.0);
      m(b, a) = Complex(0.0, -1.0);
      break;
  }
  return m;
}

std::vector<DecompositionTerm> decomposition_terms(WitnessKind kind, int d) {
  if (d < 2) {
    throw Error(ErrorKind::InvalidDimension, "invalid dimension d=" + std::to_string(d));
  }
  const double y_weight = kind == WitnessKind::Werner ? 0.5 : -0.5;
  std::vector<DecompositionTerm> terms;
  terms.reserve(static_cast<std::size_t>(d) * d);
  for (int a = 0; a < d; ++a) terms.push_back({1.0, LocalObservable::projector(a)});
  for (int a = 0; a < d; ++a) {
    for (int b = a + 1; b < d; ++b) {
      terms.push_back({0.5, LocalObservable::x(a, b)});
      terms.push_back({y_weight, LocalObservable::y(a, b)});
    }
  }
  return terms;
}

ComplexMatrix reconstruct_witness(WitnessKind kind, int d) {
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& term : decomposition_terms(kind, d)) {
    const ComplexMatrix o = observable_matrix(term.obs, d);
    out += term.coefficient * kron(o, o);
  }
  return out;
}

bool commutes(const LocalObservable& a, const LocalObservable& b) noexcept {
  if (a == b) return true;
  return a.i() != b.i() && a.i() != b.j() && a.j() != b.i() && a.j() != b.j();
}

TurnColor classify_turn(const std::vector<LocalObservable>& observables) noexcept {
  bool has_x = false;
  bool has_y = false;
  for (const auto& o : observables) {
    has_x = has_x || o.tag() == ObsTag::X;
    has_y = has_y || o.tag() == ObsTag::Y;
  }
  if (has_x && !has_y) return TurnColor::Red;
  if (has_y && !has_x) return TurnColor::Blue;
  return TurnColor::Mixed;
}

namespace {

Turn make_turn(std::vector<LocalObservable> obs) {
  Turn t;
  t.color = classify_turn(obs);
  t.observables = std::move(obs);
  return t;
}

// Pairs {a, b}, a != b, drawn from 0..m-1 with a + b = 2t (mod m).
std::vector<std::pair<int, int>> circle_matching(int m, int t) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < m; ++a) {
    const int b = ((2 * t - a) % m + m) % m;
    if (a < b) pairs.emplace_back(a, b);
  }
  return pairs;
}

}  // namespace

MeasurementSchedule schedule(int d) {
  if (d < 2) {
    throw Error(ErrorKind::InvalidDimension,
                "schedule: invalid dimension d=" + std::to_string(d) + " (need d >= 2)");
  }
  MeasurementSchedule s;
  s.d = d;

  if (d % 2 == 1) {
    for (ObsTag tag : {ObsTag::X, ObsTag::Y}) {
      for (int t = 0; t < d; ++t) {
        std::vector<LocalObservable> obs;
        for (auto [a, b] : circle_matching(d, t)) {
          obs.push_back(tag == ObsTag::X ? LocalObservable::x(a, b) : LocalObservable::y(a, b));
        }
        // the vertex left out of the matching is t itself
        if (tag == ObsTag::X) obs.push_back(LocalObservable::projector(t));
        s.turns.push_back(make_turn(std::move(obs)));
      }
    }
    return s;
  }

  const int circle = d - 1;
  const int center = d - 1;
  for (ObsTag tag : {ObsTag::X, ObsTag::Y}) {
    for (int t = 0; t < circle; ++t) {
      auto pairs = circle_matching(circle, t);
      pairs.emplace_back(t, center);
      std::vector<LocalObservable> obs;
      for (auto [a, b] : pairs) {
        obs.push_back(tag == ObsTag::X ? LocalObservable::x(a, b) : LocalObservable::y(a, b));
      }
      s.turns.push_back(make_turn(std::move(obs)));
    }
  }
  std::vector<LocalObservable> green;
  for (int a = 0; a < d; ++a) green.push_back(LocalObservable::projector(a));
  s.turns.push_back(make_turn(std::move(green)));
  return s;
}

std::vector<Violation> validate_schedule(const MeasurementSchedule& s) {
  std::vector<Violation> out;
  if (s.d < 2) {
    out.push_back({-1, "schedule dimension d=" + std::to_string(s.d) + " is below 2"});
    return out;
  }
  std::map<LocalObservable, int> seen;  // observable -> first turn

  for (std::size_t t = 0; t < s.turns.size(); ++t) {
    const int turn = static_cast<int>(t);
    const auto& obs = s.turns[t].observables;
    for (const auto& o : obs) {
      if (o.j() >= s.d) {
        out.push_back({turn, o.label() + " is out of range for d=" + std::to_string(s.d)});
      }
    }
    for (std::size_t a = 0; a < obs.size(); ++a) {
      for (std::size_t b = a + 1; b < obs.size(); ++b) {
        const auto& u = obs[a];
        const auto& v = obs[b];
        if (u == v) {
          out.push_back({turn, u.label() + " listed twice"});
          continue;
        }
        if (commutes(u, v)) continue;
        std::string rule;
        if (u.is_edge() != v.is_edge()) {
          rule = "an edge and a vertex at one of its ends";
        } else if (u.is_edge()) {
          rule = (u.i() == v.i() && u.j() == v.j()) ? "the same edge painted red and blue"
                                                    : "two consecutive edges";
        } else {
          rule = "the same vertex twice";
        }
        out.push_back({turn, rule + ": " + u.label() + " and " + v.label()});
      }
    }
    if (s.turns[t].color != classify_turn(obs)) {
      out.push_back({turn, std::string("turn colour '") + to_string(s.turns[t].color) +
                               "' does not match its observables"});
    }
    for (const auto& o : obs) {
      auto [it, inserted] = seen.emplace(o, turn);
      if (!inserted && it->second != turn) {
        out.push_back({turn, o.label() + " already measured in turn " +
                                 std::to_string(it->second + 1)});
      }
    }
  }

  for (int a = 0; a < s.d; ++a) {
    const auto p = LocalObservable::projector(a);
    if (!seen.contains(p)) out.push_back({-1, "missing coverage: " + p.label()});
    for (int b = a + 1; b < s.d; ++b) {
      for (const auto& o : {LocalObservable::x(a, b), LocalObservable::y(a, b)}) {
        if (!seen.contains(o)) out.push_back({-1, "missing coverage: " + o.label()});
      }
    }
  }
  return out;
}

}  // namespace qew
