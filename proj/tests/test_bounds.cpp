#include <cmath>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "qew/bounds.hpp"
#include "qew/error.hpp"

using namespace qew;

TEST_CASE("binary entropy") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  // frozen from an independent evaluation of the formula
  CHECK(binary_entropy(0.9330127) == doctest::Approx(0.35457890985558443).epsilon(1e-12));
  for (double y = 0.01; y < 1.0; y += 0.0137) {
    CHECK(binary_entropy(y) == doctest::Approx(oracle::h2_natural(y)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(binary_entropy(-0.01), Error);
  CHECK_THROWS_AS(binary_entropy(1.01), Error);
}

TEST_CASE("b_werner") {
  CHECK(b_werner(-1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(b_werner(0.3) == 0.0);
  CHECK(b_werner(0.0) == 0.0);
  CHECK(b_werner(-0.5) == doctest::Approx(0.35457890266527003).epsilon(1e-12));
  CHECK_THROWS_AS(b_werner(1.5), Error);
  CHECK_THROWS_AS(b_werner(-1.01), Error);
}

TEST_CASE("gamma for the isotropic bound") {
  for (int d = 2; d <= 8; ++d) {
    CHECK(gamma_iso(d, d) == doctest::Approx(1.0 / d).epsilon(1e-14));
    CHECK(gamma_iso(1.0, d) == doctest::Approx(1.0).epsilon(1e-14));
    for (double x = 1.0; x <= d; x += 0.05) {
      const double g = gamma_iso(x, d);
      CHECK(g >= 1.0 / d - 1e-14);
      CHECK(g <= 1.0 + 1e-14);
    }
  }
  CHECK(gamma_iso(2.0, 2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(gamma_iso(0.5, 3), Error);
  CHECK_THROWS_AS(gamma_iso(3.5, 3), Error);
  CHECK_THROWS_AS(gamma_iso(1.5, 1), Error);
}

TEST_CASE("b_iso_raw") {
  CHECK(b_iso_raw(1.0, 5) == 0.0);
  CHECK(b_iso_raw(0.3, 5) == 0.0);
  for (int d : {2, 3, 4, 8}) CHECK(b_iso_raw(d, d) == doctest::Approx(std::log2(d)).epsilon(1e-13));
  CHECK(b_iso_raw(2.0, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(b_iso_raw(-0.1, 3), Error);
}

TEST_CASE("convex envelope") {
  SUBCASE("convex input is kept") {
    std::vector<Knot> pts;
    for (int i = 0; i <= 10; ++i) pts.push_back({double(i), double(i * i)});
    const auto hull = convex_envelope(pts);
    REQUIRE(hull.knots().size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(hull.knots()[i].y == pts[i].y);
  }
  SUBCASE("middle point above the chord is dropped") {
    const std::vector<Knot> pts{{0.0, 0.0}, {1.0, 2.0}, {2.0, 0.0}};
    const auto hull = convex_envelope(pts);
    REQUIRE(hull.knots().size() == 2);
    CHECK(hull(1.0) == 0.0);
  }
  SUBCASE("b_iso_raw on [1, 2] at d=2 is already convex") {
    std::vector<Knot> pts;
    for (int i = 0; i <= 200; ++i) {
      const double x = 1.0 + i / 200.0;
      pts.push_back({x, b_iso_raw(x, 2)});
    }
    const auto hull = convex_envelope(pts);
    CHECK(hull.knots().size() == pts.size());
  }
  SUBCASE("lower envelope properties") {
    std::vector<Knot> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({double(i), std::sin(i * 0.7) + 0.01 * i * i});
    const auto hull = convex_envelope(pts);
    CHECK(hull.knots().front().y == pts.front().y);
    CHECK(hull.knots().back().y == pts.back().y);
    for (const auto& p : pts) CHECK(hull(p.x) <= p.y + 1e-12);
    const auto& k = hull.knots();
    for (std::size_t i = 1; i + 1 < k.size(); ++i) {
      const double s1 = (k[i].y - k[i - 1].y) / (k[i].x - k[i - 1].x);
      const double s2 = (k[i + 1].y - k[i].y) / (k[i + 1].x - k[i].x);
      CHECK(s2 >= s1 - 1e-12);
    }
  }
  SUBCASE("errors") {
    const std::vector<Knot> one{{0.0, 0.0}};
    CHECK_THROWS_AS(convex_envelope(one), Error);
    const std::vector<Knot> unsorted{{1.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(convex_envelope(unsorted), Error);
  }
  SUBCASE("clamped evaluation outside the knots") {
    const PiecewiseLinearFunction f({{0.0, 1.0}, {1.0, 3.0}});
    CHECK(f(-5.0) == 1.0);
    CHECK(f(5.0) == 3.0);
    CHECK(f(0.25) == doctest::Approx(1.5));
  }
}

TEST_CASE("b_iso") {
  for (int d = 2; d <= 8; ++d) {
    CHECK(b_iso(0.5, d) == 0.0);
    CHECK(b_iso(1.0, d) == 0.0);
    CHECK(std::abs(b_iso(d, d) - std::log2(d)) < 1e-9);
  }
  CHECK(b_iso(1.5, 2) == doctest::Approx(b_iso_raw(1.5, 2)).epsilon(1e-12));
  CHECK(b_iso(1.5, 2) == doctest::Approx(0.3545789026652704).epsilon(1e-12));
  CHECK_THROWS_AS(b_iso(3.5, 3), Error);

  SUBCASE("hull is a proper lower envelope for d >= 3") {
    // For d >= 3 the raw expression is not convex near x = d, so some grid
    // samples must be strictly above the hull.
    for (int d : {3, 4, 6}) {
      const IsotropicBound iso(d);
      bool strictly_below_somewhere = false;
      for (int i = 0; i < kDefaultHullGrid; ++i) {
        const double x = 1.0 + (d - 1.0) * i / (kDefaultHullGrid - 1);
        const double raw = b_iso_raw(std::min(x, double(d)), d);
        CHECK(iso(std::min(x, double(d))) <= raw + 1e-12);
        strictly_below_somewhere = strictly_below_somewhere || iso(x) < raw - 1e-6;
      }
      CHECK(strictly_below_somewhere);
    }
  }
}

TEST_CASE("monotonicity and convexity on dense grids") {
  const int n = 10000;
  double prev = b_werner(-1.0);
  std::vector<double> wer(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double x = -1.0 + 2.0 * i / n;
    wer[i] = b_werner(x);
    CHECK(wer[i] <= prev + 1e-15);
    prev = wer[i];
  }
  for (int i = 1; i < n; ++i) CHECK(wer[i - 1] - 2.0 * wer[i] + wer[i + 1] >= -1e-9);

  for (int d : {2, 3, 5, 8}) {
    const IsotropicBound iso(d);
    std::vector<double> v(n + 1);
    for (int i = 0; i <= n; ++i) v[i] = iso(double(d) * i / n);
    for (int i = 1; i <= n; ++i) CHECK(v[i] >= v[i - 1] - 1e-15);
    for (int i = 1; i < n; ++i) CHECK(v[i - 1] - 2.0 * v[i] + v[i + 1] >= -1e-9);
  }
}

TEST_CASE("d=2 isotropic bound matches the concurrence formula") {
  // C = max(0, g - 1) for two-qubit isotropic states.
  auto exact = [](double g) {
    const double c = std::max(0.0, g - 1.0);
    return oracle::h2_natural(0.5 * (1.0 + std::sqrt(1.0 - c * c)));
  };
  for (int i = 0; i < kDefaultHullGrid; ++i) {
    const double g = 1.0 + double(i) / (kDefaultHullGrid - 1);
    CHECK(std::abs(b_iso(g, 2) - exact(g)) < 1e-12);
  }
  // Between knots the chord of a convex curve sits slightly above it.
  for (int i = 0; i <= 400; ++i) {
    const double g = 2.0 * i / 400 + 1e-4;
    if (g > 2.0) continue;
    CHECK(b_iso(g, 2) >= exact(g) - 1e-12);
    CHECK(b_iso(g, 2) <= exact(g) + 5e-7);
  }
}
