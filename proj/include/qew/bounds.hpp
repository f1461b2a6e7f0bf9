#pragma once

// Closed-form optimal bounding functions for the entanglement of formation
// (in ebits, base-2 logarithms) given the expectation of the swap operator F
// (Werner class) or of the projector G (isotropic class).

#include <span>
#include <vector>

namespace qew {

struct Knot {
  double x;
  double y;
};

/// Convex piecewise-linear function through strictly increasing knots.
/// Evaluation interpolates linearly and clamps outside the knot range.
class PiecewiseLinearFunction {
 public:
  explicit PiecewiseLinearFunction(std::vector<Knot> knots);

  double operator()(double x) const;

  const std::vector<Knot>& knots() const noexcept { return knots_; }

 private:
  std::vector<Knot> knots_;
};

inline constexpr int kDefaultHullGrid = 2049;

double binary_entropy(double y);

double b_werner(double x);

/// gamma(x) = (sqrt(x) + sqrt((d-1)(d-x)))^2 / d^2, valued in [1/d, 1].
double gamma_iso(double x, int d);

/// The isotropic bounding expression before the convex hull is taken.
double b_iso_raw(double x, int d);

/// Lower convex envelope (monotone-chain lower hull) of the samples.
PiecewiseLinearFunction convex_envelope(std::span<const Knot> samples);

/// Precomputed hull of b_iso_raw on [1, d]; reusable across evaluations.
class IsotropicBound {
 public:
  explicit IsotropicBound(int d, int grid_points = kDefaultHullGrid);

  double operator()(double x) const;

  int dim() const noexcept { return d_; }
  const PiecewiseLinearFunction& hull() const noexcept { return hull_; }

 private:
  int d_;
  PiecewiseLinearFunction hull_;
};

double b_iso(double x, int d, int grid_points = kDefaultHullGrid);

}  // namespace qew
