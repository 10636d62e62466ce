#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "eigenshell/billiard/billiard.hpp"
#include "eigenshell/core/errors.hpp"

using namespace eigenshell;
using namespace eigenshell::billiard;

namespace {

// Phase-space fraction with blank radius r |sin a| < R_b for position
// uniform in the unit disk and momentum direction a uniform, as a 2-D
// integral over (r, a).
double g_oracle(double R_b) {
  using boost::math::quadrature::gauss_kronrod;
  const double half_pi = 0.5 * std::numbers::pi;
  auto inner = [&](double r) {
    const double top = r <= R_b ? half_pi : std::asin(R_b / r);
    return gauss_kronrod<double, 31>::integrate([](double) { return 1.0; }, 0.0, top, 5, 1e-14) / half_pi;
  };
  auto outer = [&](double r) { return 2.0 * r * inner(r); };
  return gauss_kronrod<double, 61>::integrate(outer, 0.0, R_b, 10, 1e-14) +
         gauss_kronrod<double, 61>::integrate(outer, R_b, 1.0, 10, 1e-14);
}

}  // namespace

TEST_CASE("g matches the 2-D integral oracle") {
  CHECK(g_classical(0.5) == doctest::Approx(0.60900).epsilon(1e-4 / 0.609));
  CHECK(g_classical(0.5) == doctest::Approx(0.6089977810).epsilon(1e-9));
  for (const double R_b : {0.05, 0.2, 0.5, 0.8, 0.99}) {
    CHECK(g_classical(R_b) == doctest::Approx(g_oracle(R_b)).epsilon(1e-9));
  }
  CHECK(g_classical(0.0) == 0.0);
  CHECK(g_classical(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(g_classical(1.5), std::domain_error);
}

TEST_CASE("mode enumeration against Boost zeros") {
  const auto modes = enumerate_modes(30.0, 34.0);
  REQUIRE_FALSE(modes.empty());
  std::size_t brute = 0;
  for (int m = 0; m <= 34; ++m) {
    for (int n = 1;; ++n) {
      const double z = boost::math::cyl_bessel_j_zero(double(m), n);
      if (z > 34.0) break;
      if (z >= 30.0) brute += m == 0 ? 1 : 2;
    }
  }
  CHECK(modes.size() == brute);
  for (const auto& mode : modes) {
    CHECK(mode.n >= 1);
    CHECK(std::abs(boost::math::cyl_bessel_j(std::abs(mode.m), mode.k)) <= 1e-9);
  }
  CHECK(std::is_sorted(modes.begin(), modes.end(),
                       [](const auto& a, const auto& b) { return a.k < b.k; }));
}

TEST_CASE("radius scales wavenumbers") {
  const auto unit = enumerate_modes(10.0, 20.0, 1.0);
  const auto twice = enumerate_modes(5.0, 10.0, 2.0);
  REQUIRE(unit.size() == twice.size());
  for (std::size_t i = 0; i < unit.size(); ++i) CHECK(twice[i].k == doctest::Approx(unit[i].k / 2.0));
}

TEST_CASE("shell width conventions") {
  const auto full = enumerate_shell(100.0, 1.0, 1.0, WidthConvention::kFull);
  const auto half = enumerate_shell(100.0, 0.5, 1.0, WidthConvention::kHalf);
  REQUIRE(full.size() == half.size());
  for (const auto& m : full) {
    CHECK(m.k >= 99.5);
    CHECK(m.k <= 100.5);
  }
}

TEST_CASE("28 levels in the narrow shell at k = 515") {
  const auto modes = enumerate_shell(515.0, 0.2, 1.0, WidthConvention::kFull);
  CHECK(level_count(modes) == 28);
  CHECK(modes.size() == 56);
}

TEST_CASE("Weyl count is the leading term") {
  const auto modes = enumerate_modes(200.0, 210.0);
  const double weyl = weyl_count(200.0, 210.0);
  CHECK(std::abs(static_cast<double>(modes.size()) - weyl) / weyl < 0.05);
}

TEST_CASE("blank radius classifier and fraction") {
  std::vector<BilliardMode> modes = {{1, 0, 10.0, 1.0}, {1, 3, 10.0, 1.0}, {1, -6, 10.0, 1.0}};
  CHECK(blank_radius(modes[2]) == doctest::Approx(0.6));
  CHECK(blank_fraction(modes, 0.5) == doctest::Approx(2.0 / 3.0));
  const auto cls = blank_radius_classifier(modes, 0.5);
  CHECK(cls.apply(0) == 1);
  CHECK(cls.apply(2) == 0);
  CHECK_THROWS_AS(blank_fraction(std::vector<BilliardMode>{}, 0.5), EmptyShellError);
}

TEST_CASE("f(R_b) is monotone and tracks g") {
  const auto modes = enumerate_shell(200.0, 5.0, 1.0, WidthConvention::kHalf);
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(i / 20.0);
  const auto c = f_curve_vs_Rb(modes, grid);
  REQUIRE(c.g.size() == grid.size());
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(c.curve.samples[i].f >= c.curve.samples[i - 1].f);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(std::abs(c.curve.samples[i].f - c.g[i]) < 0.05);
}

TEST_CASE("Planck-constant scaling is a set identity") {
  for (const double w : {1.5, 2.0, 3.0}) {
    const auto r = hbar_scaling_check(120.0, 1.0, w);
    CHECK(r.sets_equal);
    CHECK(r.population_scaled == r.population_reference);
    CHECK(r.population_scaled > 0);
    CHECK(r.f_scaled == r.f_reference);
  }
}
