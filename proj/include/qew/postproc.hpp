#pragma once

// Post-processing of measured correlations: the M(+)/M(-) matrices, the
// sign-flip family of witnesses F(xi), G(xi) as quadratic forms, their
// optimization over sign vectors, and the final bound report.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qew/localdeco.hpp"
#include "qew/qstate.hpp"

namespace qew {

/// Measured <obs (x) obs> values keyed by local observable. A table may be
/// partial (one turn's worth) until merged into a complete one.
class CorrelationTable {
 public:
  explicit CorrelationTable(int d);

  int dim() const noexcept { return d_; }

  void set(const LocalObservable& obs, double value);
  std::optional<double> get(const LocalObservable& obs) const;
  /// Throws MissingEntry if absent.
  double at(const LocalObservable& obs) const;

  /// Copies every entry of `other` (same d) into this table.
  void merge(const CorrelationTable& other);

  /// Labels of all observables required for completeness but absent.
  std::vector<std::string> missing() const;
  bool complete() const { return missing().empty(); }
  void require_complete() const;

  const std::map<LocalObservable, double>& entries() const noexcept { return values_; }

  std::optional<std::int64_t> shots_per_turn;

 private:
  int d_;
  std::map<LocalObservable, double> values_;
};

/// Exact table Tr[(obs (x) obs) rho] for every decomposition observable.
CorrelationTable exact_table(const DensityMatrix& rho);

enum class MSign { Plus, Minus };

struct MMatrix {
  int d = 0;
  MSign sign = MSign::Plus;
  RealMatrix entries;
};

MMatrix assemble_m(const CorrelationTable& t, MSign sign);

/// A +-1 vector of length d in canonical form (first entry +1).
class SignVector {
 public:
  /// All-ones vector.
  explicit SignVector(int d);
  /// Canonicalizes: the whole vector is negated if entries[0] is -1.
  explicit SignVector(std::vector<int> entries);

  int dim() const noexcept { return static_cast<int>(entries_.size()); }
  const std::vector<int>& entries() const noexcept { return entries_; }
  int operator[](int k) const { return entries_[static_cast<std::size_t>(k)]; }

  /// Lexicographic order with +1 preceding -1, so all-ones is the smallest.
  std::strong_ordering operator<=>(const SignVector& other) const;
  bool operator==(const SignVector&) const = default;

  /// Bit k-1 set iff entry k is -1 (k = 1..d-1); entry 0 is always +1.
  static SignVector from_flip_mask(int d, std::uint64_t mask);

 private:
  std::vector<int> entries_;
};

double quad_form(const MMatrix& m, const SignVector& xi);
/// Raw quadratic form for any +-1 vector (not necessarily canonical).
double quad_form(const RealMatrix& m, const std::vector<int>& xi);

enum class Sense { Min, Max };

struct StarResult {
  double value;
  SignVector xi;
};

inline constexpr int kExactBudget = 24;

/// Exhaustive Gray-code search over the 2^(d-1) canonical sign vectors.
/// Ties go to the lexicographically smallest vector.
StarResult star_exact(const MMatrix& m, Sense sense);
StarResult f_star_exact(const MMatrix& mplus);
StarResult g_star_exact(const MMatrix& mminus);

struct AnnealingOptions {
  int sweeps = 200;
  int restarts = 32;
};

/// Single-spin-flip simulated annealing with a geometric temperature ladder.
/// The returned value is attained by the returned vector.
StarResult star_heuristic(const MMatrix& m, Sense sense, std::uint64_t seed,
                          AnnealingOptions options = {});

/// Range diagnostics: trace -/+ sum over ordered pairs a != b of |M_ab|.
double diagnostic_bounds(const MMatrix& m, Sense sense);

/// Dense (1 (x) W(xi)) Q (1 (x) W(xi))^dagger, with W(xi) = diag(xi).
ComplexMatrix phase_flipped_witness(WitnessKind kind, const SignVector& xi);

enum class OptimizerMode { Exact, Heuristic, Auto };

const char* to_string(OptimizerMode mode) noexcept;
OptimizerMode parse_optimizer_mode(const std::string& text);

struct BoundReport {
  int d = 0;
  double f = 0.0;
  double g = 0.0;
  double f_star = 0.0;
  SignVector xi_f{2};
  double g_star = 0.0;
  SignVector xi_g{2};
  double bound_wer_plain = 0.0;  // b_werner(f), before sign optimization
  double bound_iso_plain = 0.0;  // b_iso(g)
  double bound_wer = 0.0;        // b_werner(clamped f_star)
  double bound_iso = 0.0;        // b_iso(clamped g_star)
  double bound_final = 0.0;
  double diag_f_lower = 0.0;
  double diag_f_upper = 0.0;
  double diag_g_lower = 0.0;
  double diag_g_upper = 0.0;
  OptimizerMode optimizer = OptimizerMode::Exact;  // the search actually used
  std::vector<std::string> warnings;
};

BoundReport entanglement_report(const CorrelationTable& t,
                                OptimizerMode mode = OptimizerMode::Auto,
                                std::uint64_t seed = 0);

}  // namespace qew
