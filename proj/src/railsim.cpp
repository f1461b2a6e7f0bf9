#include "qew/railsim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "qew/error.hpp"
#include "qew/parallel.hpp"
#include "qew/rng.hpp"

namespace qew {

RailState::RailState(int d, ComplexMatrix phi) : d_(d), phi_(std::move(phi)) {
  if (d < 2) {
    throw Error(ErrorKind::InvalidDimension, "rail state: invalid dimension d=" + std::to_string(d));
  }
  if (phi_.rows() != d || phi_.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch,
                "rail state: phi is " + std::to_string(phi_.rows()) + "x" +
                    std::to_string(phi_.cols()) + ", expected " + std::to_string(d) + "x" +
                    std::to_string(d));
  }
  if (!phi_.allFinite()) throw Error(ErrorKind::InvalidState, "rail state: non-finite amplitude");
  const double norm_dev = std::abs(phi_.norm() - 1.0);
  if (norm_dev > kStructuralTol) {
    throw Error(ErrorKind::InvalidState,
                "rail state: Frobenius norm deviates from 1 by " + std::to_string(norm_dev));
  }
}

DensityMatrix RailState::density() const {
  const Eigen::Index n = static_cast<Eigen::Index>(d_) * d_;
  Eigen::VectorXcd psi(n);
  for (int a = 0; a < d_; ++a)
    for (int b = 0; b < d_; ++b) psi(a * d_ + b) = phi_(a, b);
  return {d_, psi * psi.adjoint()};
}

RailState bell_rail_state(int d) {
  if (d < 2) {
    throw Error(ErrorKind::InvalidDimension, "rail state: invalid dimension d=" + std::to_string(d));
  }
  return {d, ComplexMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d))};
}

RailState product_rail_state(int d, int a, int b) {
  if (d < 2) {
    throw Error(ErrorKind::InvalidDimension, "rail state: invalid dimension d=" + std::to_string(d));
  }
  if (a < 0 || a >= d || b < 0 || b >= d) {
    throw Error(ErrorKind::OutOfRange, "product rail state: channel out of range");
  }
  ComplexMatrix phi = ComplexMatrix::Zero(d, d);
  phi(a, b) = 1.0;
  return {d, std::move(phi)};
}

RailEnsemble::RailEnsemble(std::vector<WeightedRailState> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw Error(ErrorKind::InvalidState, "rail ensemble is empty");
  double total = 0.0;
  for (const auto& c : components_) {
    if (!(c.weight > 0.0)) {
      throw Error(ErrorKind::InvalidState, "rail ensemble weights must be positive");
    }
    if (c.state.dim() != components_.front().state.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "rail ensemble mixes dimensions " +
                                                    std::to_string(c.state.dim()) + " and " +
                                                    std::to_string(dim()));
    }
    total += c.weight;
  }
  if (std::abs(total - 1.0) > kStructuralTol) {
    throw Error(ErrorKind::InvalidState,
                "rail ensemble weights sum to " + std::to_string(total) + ", not 1");
  }
}

RailEnsemble::RailEnsemble(const RailState& pure) : RailEnsemble({{1.0, pure}}) {}

DensityMatrix RailEnsemble::density() const {
  const int d = dim();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  for (const auto& c : components_) acc += c.weight * c.state.density().matrix();
  return {d, std::move(acc)};
}

RailEnsemble ensemble_from_density(const DensityMatrix& rho) {
  const int d = rho.dim();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(rho.matrix());
  std::vector<std::pair<double, Eigen::VectorXcd>> kept;
  double total = 0.0;
  for (Eigen::Index k = es.eigenvalues().size() - 1; k >= 0; --k) {
    const double w = es.eigenvalues()(k);
    if (w <= 1e-14) continue;
    kept.emplace_back(w, es.eigenvectors().col(k));
    total += w;
  }
  std::vector<WeightedRailState> components;
  components.reserve(kept.size());
  for (auto& [w, v] : kept) {
    ComplexMatrix phi(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) phi(a, b) = v(a * d + b);
    phi /= phi.norm();
    components.push_back({w / total, RailState(d, std::move(phi))});
  }
  return RailEnsemble(std::move(components));
}

namespace {

void require_port_dims(int d, const PortUnitary& pu) {
  if (pu.u.rows() != d || pu.u.cols() != d || pu.v.rows() != d || pu.v.cols() != d) {
    throw Error(ErrorKind::DimensionMismatch,
                "port unitaries do not match state dimension d=" + std::to_string(d));
  }
}

void require_valid_turn(const Turn& turn, int d) {
  for (std::size_t a = 0; a < turn.observables.size(); ++a) {
    if (turn.observables[a].j() >= d) {
      throw Error(ErrorKind::InvalidSchedule,
                  turn.observables[a].label() + " is out of range for d=" + std::to_string(d));
    }
    for (std::size_t b = a + 1; b < turn.observables.size(); ++b) {
      if (!commutes(turn.observables[a], turn.observables[b]) ||
          turn.observables[a] == turn.observables[b]) {
        throw Error(ErrorKind::InvalidSchedule,
                    "invalid turn: " + turn.observables[a].label() + " and " +
                        turn.observables[b].label() + " share a channel");
      }
    }
  }
}

}  // namespace

RealMatrix coincidence_probs(const RailState& s, const PortUnitary& pu) {
  require_port_dims(s.dim(), pu);
  const ComplexMatrix out = pu.u * s.phi() * pu.v.transpose();
  return out.cwiseAbs2();
}

RealMatrix coincidence_probs(const RailEnsemble& e, const PortUnitary& pu) {
  const int d = e.dim();
  RealMatrix acc = RealMatrix::Zero(d, d);
  for (const auto& c : e.components()) acc += c.weight * coincidence_probs(c.state, pu);
  return acc;
}

PortUnitary turn_unitary(const Turn& turn, int d) {
  require_valid_turn(turn, d);
  const double h = 1.0 / std::numbers::sqrt2;
  ComplexMatrix u = ComplexMatrix::Identity(d, d);
  for (const auto& o : turn.observables) {
    if (!o.is_edge()) continue;
    const int a = o.i();
    const int b = o.j();
    // Y: phase i on channel b before the beam splitter
    const Complex phase = o.tag() == ObsTag::Y ? Complex(0.0, 1.0) : Complex(1.0, 0.0);
    u(a, a) = h;
    u(a, b) = h * phase;
    u(b, a) = h;
    u(b, b) = -h * phase;
  }
  return {u, u};
}

CorrelationTable estimates_from_probs(const Turn& turn, const RealMatrix& probs) {
  const int d = static_cast<int>(probs.rows());
  CorrelationTable t(d);
  for (const auto& o : turn.observables) {
    const int a = o.i();
    const int b = o.j();
    if (o.is_edge()) {
      t.set(o, probs(a, a) + probs(b, b) - probs(a, b) - probs(b, a));
    } else {
      t.set(o, probs(a, a));
    }
  }
  return t;
}

CorrelationTable estimate_exact(const Turn& turn, const RailState& s) {
  return estimates_from_probs(turn, coincidence_probs(s, turn_unitary(turn, s.dim())));
}

CorrelationTable estimate_exact(const Turn& turn, const RailEnsemble& e) {
  return estimates_from_probs(turn, coincidence_probs(e, turn_unitary(turn, e.dim())));
}

CountMatrix sample_counts(const RealMatrix& probs, std::int64_t shots, std::uint64_t seed) {
  if (shots < 1) throw Error(ErrorKind::OutOfRange, "sample_counts: shots must be >= 1");
  std::vector<double> p(static_cast<std::size_t>(probs.size()));
  double total = 0.0;
  for (Eigen::Index k = 0; k < probs.size(); ++k) {
    const double v = probs(k);
    if (!std::isfinite(v) || v < -1e-12) {
      throw Error(ErrorKind::OutOfRange,
                  "sample_counts: invalid probability " + std::to_string(v));
    }
    p[static_cast<std::size_t>(k)] = std::max(v, 0.0);
    total += p[static_cast<std::size_t>(k)];
  }
  if (std::abs(total - 1.0) > kStructuralTol) {
    throw Error(ErrorKind::OutOfRange,
                "sample_counts: probabilities sum to " + std::to_string(total) + ", not 1");
  }

  // Sequential conditional binomials (column-major outcome order).
  Rng rng = make_rng(seed);
  CountMatrix counts = CountMatrix::Zero(probs.rows(), probs.cols());
  std::int64_t remaining = shots;
  double mass_left = total;
  for (std::size_t k = 0; k < p.size() && remaining > 0; ++k) {
    if (k + 1 == p.size()) {
      counts(static_cast<Eigen::Index>(k)) = remaining;
      break;
    }
    const double q = mass_left > 0.0 ? std::clamp(p[k] / mass_left, 0.0, 1.0) : 0.0;
    std::binomial_distribution<std::int64_t> draw(remaining, q);
    const std::int64_t n = q > 0.0 ? draw(rng) : 0;
    counts(static_cast<Eigen::Index>(k)) = n;
    remaining -= n;
    mass_left -= p[k];
  }
  return counts;
}

CorrelationTable run_experiment(const RailEnsemble& e, const MeasurementSchedule& schedule,
                                std::int64_t shots_per_turn, std::uint64_t seed) {
  const int d = e.dim();
  if (schedule.d != d) {
    throw Error(ErrorKind::DimensionMismatch, "schedule dimension d=" + std::to_string(schedule.d) +
                                                  " does not match state dimension d=" +
                                                  std::to_string(d));
  }
  if (shots_per_turn < 0) {
    throw Error(ErrorKind::OutOfRange, "shots_per_turn must be >= 0");
  }
  std::vector<CorrelationTable> per_turn(schedule.turns.size(), CorrelationTable(d));
  parallel_for(schedule.turns.size(), [&](std::size_t t) {
    const Turn& turn = schedule.turns[t];
    const RealMatrix probs = coincidence_probs(e, turn_unitary(turn, d));
    if (shots_per_turn == 0) {
      per_turn[t] = estimates_from_probs(turn, probs);
      return;
    }
    const CountMatrix counts = sample_counts(probs, shots_per_turn, derive_seed(seed, t));
    per_turn[t] =
        estimates_from_probs(turn, counts.cast<double>() / static_cast<double>(shots_per_turn));
  });

  CorrelationTable table(d);
  for (const auto& t : per_turn) table.merge(t);
  if (const auto absent = table.missing(); !absent.empty()) {
    std::string list;
    for (const auto& label : absent) list += (list.empty() ? "" : ", ") + label;
    throw Error(ErrorKind::InvalidSchedule, "incomplete schedule, never measures: " + list);
  }
  if (shots_per_turn > 0) table.shots_per_turn = shots_per_turn;
  return table;
}

CorrelationTable run_experiment(const RailState& s, const MeasurementSchedule& schedule,
                                std::int64_t shots_per_turn, std::uint64_t seed) {
  return run_experiment(RailEnsemble(s), schedule, shots_per_turn, seed);
}

RailEnsemble depolarize(const RailState& s, double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "depolarize: p=" + std::to_string(p) + " outside [0, 1]");
  }
  const int d = s.dim();
  std::vector<WeightedRailState> components;
  if (p < 1.0) components.push_back({1.0 - p, s});
  if (p > 0.0) {
    const double w = p / (static_cast<double>(d) * d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) components.push_back({w, product_rail_state(d, a, b)});
  }
  return RailEnsemble(std::move(components));
}

}  // namespace qew
