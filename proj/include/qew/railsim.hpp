#pragma once

// Two-photon multi-rail simulator. One photon enters each port (A, B) and is
// spread over d channels; Phi(a, b) is the amplitude of finding the A photon
// in channel a and the B photon in channel b. Each measurement turn applies a
// passive interferometer to both ports and records channel coincidences.

#include <cstdint>
#include <vector>

#include "qew/localdeco.hpp"
#include "qew/postproc.hpp"
#include "qew/qstate.hpp"

namespace qew {

class RailState {
 public:
  /// Validates shape d x d and unit Frobenius norm (within kStructuralTol).
  RailState(int d, ComplexMatrix phi);

  int dim() const noexcept { return d_; }
  const ComplexMatrix& phi() const noexcept { return phi_; }

  /// vec(Phi) vec(Phi)^dagger in the a*d + b basis.
  DensityMatrix density() const;

 private:
  int d_;
  ComplexMatrix phi_;
};

/// Phi = identity / sqrt(d).
RailState bell_rail_state(int d);
/// Phi = |a><b| (single product coincidence), 0-based.
RailState product_rail_state(int d, int a, int b);

struct WeightedRailState {
  double weight;
  RailState state;
};

class RailEnsemble {
 public:
  /// Weights must be positive and sum to 1 (within kStructuralTol); all
  /// components share one dimension.
  explicit RailEnsemble(std::vector<WeightedRailState> components);
  /// A pure state as a one-element ensemble.
  explicit RailEnsemble(const RailState& pure);

  int dim() const noexcept { return components_.front().state.dim(); }
  const std::vector<WeightedRailState>& components() const noexcept { return components_; }

  DensityMatrix density() const;

 private:
  std::vector<WeightedRailState> components_;
};

/// Spectral decomposition of rho into an ensemble of its eigenvectors
/// (eigenvalues below 1e-14 are dropped and the weights renormalized).
RailEnsemble ensemble_from_density(const DensityMatrix& rho);

struct PortUnitary {
  ComplexMatrix u;  // port A
  ComplexMatrix v;  // port B
};

/// p(a, b) = |(U Phi V^T)(a, b)|^2.
RealMatrix coincidence_probs(const RailState& s, const PortUnitary& pu);
/// Weight-averaged coincidence probabilities over the ensemble.
RealMatrix coincidence_probs(const RailEnsemble& e, const PortUnitary& pu);

/// U = V: Hadamard blocks on every X pair, Hadamard * diag(1, i) on every Y
/// pair (phase on the higher channel), identity elsewhere.
PortUnitary turn_unitary(const Turn& turn, int d);

/// Turn estimators from a coincidence matrix: p(a,a) for P(a), and
/// p(a,a) + p(b,b) - p(a,b) - p(b,a) for X/Y pairs.
CorrelationTable estimates_from_probs(const Turn& turn, const RealMatrix& probs);

CorrelationTable estimate_exact(const Turn& turn, const RailState& s);
CorrelationTable estimate_exact(const Turn& turn, const RailEnsemble& e);

using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Multinomial draw of `shots` coincidences over the d x d outcomes.
CountMatrix sample_counts(const RealMatrix& probs, std::int64_t shots, std::uint64_t seed);

/// Runs every turn of the schedule. shots_per_turn = 0 gives the exact
/// (infinite-statistics) table; otherwise turn t samples with the seed
/// derive_seed(seed, t).
CorrelationTable run_experiment(const RailEnsemble& e, const MeasurementSchedule& schedule,
                                std::int64_t shots_per_turn, std::uint64_t seed);
CorrelationTable run_experiment(const RailState& s, const MeasurementSchedule& schedule,
                                std::int64_t shots_per_turn, std::uint64_t seed);

/// (1 - p) |Psi><Psi| + p * identity / d^2 as a finite ensemble: the pure
/// state plus all d^2 product coincidence states with weight p / d^2 each.
RailEnsemble depolarize(const RailState& s, double p);

}  // namespace qew
