#include "qew/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qew/error.hpp"

namespace qew {

namespace {

void require_iso_dim(int d) {
  if (d < 2) {
    throw Error(ErrorKind::InvalidDimension,
                "invalid dimension d=" + std::to_string(d) + " (need d >= 2)");
  }
}

void require_in(double x, double lo, double hi, const char* what) {
  if (!(x >= lo && x <= hi)) {
    throw Error(ErrorKind::OutOfRange, std::string(what) + ": argument " + std::to_string(x) +
                                           " outside [" + std::to_string(lo) + ", " +
                                           std::to_string(hi) + "]");
  }
}

// z-component of (b - a) x (c - a); <= 0 means b is on or above chord a-c.
double cross(const Knot& a, const Knot& b, const Knot& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

}  // namespace

PiecewiseLinearFunction::PiecewiseLinearFunction(std::vector<Knot> knots)
    : knots_(std::move(knots)) {
  if (knots_.empty()) {
    throw Error(ErrorKind::OutOfRange, "piecewise-linear function needs at least one knot");
  }
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i].x > knots_[i - 1].x)) {
      throw Error(ErrorKind::OutOfRange, "piecewise-linear knots must be strictly increasing");
    }
  }
}

double PiecewiseLinearFunction::operator()(double x) const {
  if (x <= knots_.front().x) return knots_.front().y;
  if (x >= knots_.back().x) return knots_.back().y;
  auto hi = std::upper_bound(knots_.begin(), knots_.end(), x,
                             [](double v, const Knot& k) { return v < k.x; });
  auto lo = std::prev(hi);
  if (x == lo->x) return lo->y;
  const double t = (x - lo->x) / (hi->x - lo->x);
  return lo->y + t * (hi->y - lo->y);
}

double binary_entropy(double y) {
  require_in(y, 0.0, 1.0, "binary_entropy");
  if (y == 0.0 || y == 1.0) return 0.0;
  return -y * std::log2(y) - (1.0 - y) * std::log2(1.0 - y);
}

double b_werner(double x) {
  require_in(x, -1.0, 1.0, "b_werner");
  if (x > 0.0) return 0.0;
  return binary_entropy(0.5 * (1.0 + std::sqrt(1.0 - x * x)));
}

double gamma_iso(double x, int d) {
  require_iso_dim(d);
  require_in(x, 1.0, d, "gamma_iso");
  const double s = std::sqrt(x) + std::sqrt((d - 1.0) * (d - x));
  const double dd = static_cast<double>(d) * d;
  return std::clamp(s * s / dd, 0.0, 1.0);
}

double b_iso_raw(double x, int d) {
  require_iso_dim(d);
  require_in(x, 0.0, d, "b_iso_raw");
  if (x <= 1.0) return 0.0;
  const double g = gamma_iso(x, d);
  return binary_entropy(g) + (1.0 - g) * std::log2(d - 1.0);
}

PiecewiseLinearFunction convex_envelope(std::span<const Knot> samples) {
  if (samples.size() < 2) {
    throw Error(ErrorKind::OutOfRange, "convex_envelope: need at least 2 samples");
  }
  std::vector<Knot> hull;
  hull.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (i > 0 && !(samples[i].x > samples[i - 1].x)) {
      throw Error(ErrorKind::OutOfRange, "convex_envelope: x values must be strictly increasing");
    }
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), samples[i]) <= 0.0) {
      hull.pop_back();
    }
    hull.push_back(samples[i]);
  }
  return PiecewiseLinearFunction(std::move(hull));
}

namespace {

PiecewiseLinearFunction build_iso_hull(int d, int grid_points) {
  require_iso_dim(d);
  if (grid_points < 2) {
    throw Error(ErrorKind::OutOfRange, "b_iso: grid_points must be >= 2");
  }
  std::vector<Knot> samples(static_cast<std::size_t>(grid_points));
  const double step = (d - 1.0) / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double x = (i == grid_points - 1) ? static_cast<double>(d) : 1.0 + i * step;
    samples[static_cast<std::size_t>(i)] = {x, b_iso_raw(x, d)};
  }
  return convex_envelope(samples);
}

}  // namespace

IsotropicBound::IsotropicBound(int d, int grid_points)
    : d_(d), hull_(build_iso_hull(d, grid_points)) {}

double IsotropicBound::operator()(double x) const {
  require_in(x, 0.0, d_, "b_iso");
  if (x <= 1.0) return 0.0;
  return hull_(x);
}

double b_iso(double x, int d, int grid_points) {
  require_iso_dim(d);
  require_in(x, 0.0, d, "b_iso");
  if (x <= 1.0) return 0.0;
  return IsotropicBound(d, grid_points)(x);
}

}  // namespace qew
