#pragma once

// Single-site observables P_a, X_ab, Y_ab, the d^2-term local decompositions
// of F and G, and commuting-set measurement schedules.
//
// Channel indices are 0-based here; JSON and console I/O use 1-based labels.

#include <compare>
#include <string>
#include <vector>

#include "qew/qstate.hpp"

namespace qew {

enum class ObsTag { P, X, Y };

const char* to_string(ObsTag tag) noexcept;

/// A single-site basis observable. For X and Y the pair is kept canonical
/// (i < j); for P only `i` is meaningful and `j` equals `i`.
class LocalObservable {
 public:
  static LocalObservable projector(int i);
  static LocalObservable x(int i, int j);
  static LocalObservable y(int i, int j);

  ObsTag tag() const noexcept { return tag_; }
  int i() const noexcept { return i_; }
  int j() const noexcept { return j_; }
  bool is_edge() const noexcept { return tag_ != ObsTag::P; }

  /// e.g. "X(1,2)" or "P(3)" with 1-based labels.
  std::string label() const;

  auto operator<=>(const LocalObservable&) const = default;

 private:
  LocalObservable(ObsTag tag, int i, int j) : tag_(tag), i_(i), j_(j) {}

  ObsTag tag_;
  int i_;
  int j_;
};

ComplexMatrix observable_matrix(const LocalObservable& obs, int d);

struct DecompositionTerm {
  double coefficient;
  LocalObservable obs;  // the bipartite term is obs (x) obs
};

/// Terms of F (Werner) or G (isotropic) folded onto canonical pairs:
/// weight 1 per P, 1/2 per X pair, +1/2 (Werner) or -1/2 (isotropic) per Y pair.
std::vector<DecompositionTerm> decomposition_terms(WitnessKind kind, int d);

/// Sum of coefficient * (obs (x) obs) over the decomposition.
ComplexMatrix reconstruct_witness(WitnessKind kind, int d);

bool commutes(const LocalObservable& a, const LocalObservable& b) noexcept;

enum class TurnColor { Red, Blue, Mixed };

const char* to_string(TurnColor color) noexcept;

struct Turn {
  TurnColor color = TurnColor::Mixed;
  std::vector<LocalObservable> observables;
};

/// red: all edges are X; blue: all edges are Y; mixed otherwise.
TurnColor classify_turn(const std::vector<LocalObservable>& observables) noexcept;

struct MeasurementSchedule {
  int d = 0;
  std::vector<Turn> turns;
};

/// Round-robin 1-factorization schedule: 2d turns for odd d, 2d - 1 for even d.
MeasurementSchedule schedule(int d);

struct Violation {
  int turn;  // 0-based; -1 for schedule-wide problems
  std::string message;
};

/// Every rule violation found; empty iff the schedule is valid and complete.
std::vector<Violation> validate_schedule(const MeasurementSchedule& s);

}  // namespace qew
