#include "eigenshell/billiard/billiard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>

#include "eigenshell/billiard/bessel.hpp"
#include "eigenshell/core/errors.hpp"

namespace eigenshell::billiard {

std::vector<BilliardMode> enumerate_modes(double k_lo, double k_hi, double R0) {
  if (!(R0 > 0.0)) throw std::invalid_argument("enumerate_modes: R0 must be > 0");
  if (!(k_lo > 0.0) || k_hi < k_lo) throw std::invalid_argument("enumerate_modes: need 0 < k_lo <= k_hi");
  std::vector<BilliardMode> modes;
  const double x_lo = k_lo * R0;
  const double x_hi = k_hi * R0;
  for (int m = 0; m <= static_cast<int>(x_hi); ++m) {
    if (x_lo == x_hi) break;
    for (const auto& z : bessel_zeros_in(m, x_lo, x_hi)) {
      modes.push_back({z.n, m, z.x / R0, R0});
      if (m != 0) modes.push_back({z.n, -m, z.x / R0, R0});
    }
  }
  std::sort(modes.begin(), modes.end(), [](const BilliardMode& a, const BilliardMode& b) {
    return a.k != b.k ? a.k < b.k : a.m < b.m;
  });
  return modes;
}

std::vector<BilliardMode> enumerate_shell(double k_c, double dk, double R0,
                                          WidthConvention convention) {
  if (dk < 0.0) throw std::invalid_argument("enumerate_shell: dk must be >= 0");
  const double half = convention == WidthConvention::kFull ? 0.5 * dk : dk;
  if (!(k_c - half > 0.0)) throw std::invalid_argument("enumerate_shell: k_c - dk/2 must be > 0");
  if (half == 0.0) {
    // Only a zero sitting exactly at k_c qualifies.
    std::vector<BilliardMode> exact;
    for (int m = 0; m <= static_cast<int>(k_c * R0); ++m) {
      if (bessel_j(m, k_c * R0) == 0.0) {
        const auto zeros = bessel_zeros_in(m, k_c * R0 * (1 - 1e-15), k_c * R0 * (1 + 1e-15));
        for (const auto& z : zeros) {
          exact.push_back({z.n, m, k_c, R0});
          if (m != 0) exact.push_back({z.n, -m, k_c, R0});
        }
      }
    }
    return exact;
  }
  return enumerate_modes(k_c - half, k_c + half, R0);
}

std::size_t level_count(std::span<const BilliardMode> modes) {
  std::set<std::pair<int, int>> levels;
  for (const auto& mode : modes) levels.emplace(mode.n, std::abs(mode.m));
  return levels.size();
}

double weyl_count(double k_lo, double k_hi, double R0) {
  return 0.25 * R0 * R0 * (k_hi * k_hi - k_lo * k_lo);
}

double blank_radius(const BilliardMode& mode) { return std::abs(mode.m) / mode.k; }

double g_classical(double R_b, double R0) {
  if (!(R0 > 0.0) || !(R_b >= 0.0) || R_b > R0) {
    throw std::domain_error("g_classical: R_b must lie in [0, R0]");
  }
  const double u = R_b / R0;
  return (2.0 / std::numbers::pi) * (u * std::sqrt(1.0 - u * u) + std::asin(u));
}

Classifier blank_radius_classifier(std::span<const BilliardMode> modes, double R_b) {
  std::vector<double> radii;
  radii.reserve(modes.size());
  for (const auto& mode : modes) radii.push_back(blank_radius(mode));
  return Classifier::from_values("blank_radius", std::move(radii), R_b, Rule::kBelow);
}

double blank_fraction(std::span<const BilliardMode> modes, double R_b) {
  if (modes.empty()) throw EmptyShellError("blank_fraction: empty billiard shell");
  std::size_t hits = 0;
  for (const auto& mode : modes) hits += blank_radius(mode) < R_b ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(modes.size());
}

BlankCurve f_curve_vs_Rb(std::span<const BilliardMode> modes, std::span<const double> R_b_grid) {
  if (modes.empty()) throw EmptyShellError("f_curve_vs_Rb: empty billiard shell");
  BlankCurve out;
  out.curve.parameter_name = "R_b";
  out.curve.classifier_name = "blank_radius";
  const double R0 = modes.front().R0;
  for (const double R_b : R_b_grid) {
    out.curve.samples.push_back({R_b, blank_fraction(modes, R_b), modes.size(), false});
    out.g.push_back(g_classical(R_b, R0));
  }
  return out;
}

ScalingReport hbar_scaling_check(double k_c, double dk, double w, double R_b, double R0) {
  if (!(w >= 1.0)) throw std::invalid_argument("hbar_scaling_check: w must be >= 1");
  const double dE = k_c * dk;
  // Generous k window covering both shells; E = hbar^2 k^2 / 2.
  const double reach = 1.25 * w * w * dE;
  const double k_lo = std::sqrt(std::max(k_c * k_c - reach, 1e-6));
  const double k_hi = std::sqrt(k_c * k_c + reach);
  const auto pool = enumerate_modes(k_lo, k_hi, R0);

  auto select = [&](double hbar, double center, double width) {
    const auto shell = EnergyShell::line(center, width);
    std::vector<BilliardMode> chosen;
    for (const auto& mode : pool) {
      if (shell.contains(0.5 * hbar * hbar * mode.k * mode.k)) chosen.push_back(mode);
    }
    return chosen;
  };
  const double hbar_scaled = 1.0 / w;
  const auto scaled = select(hbar_scaled, 0.5 * hbar_scaled * hbar_scaled * k_c * k_c, dE);
  const auto reference = select(1.0, 0.5 * k_c * k_c, w * w * dE);

  auto labels = [](const std::vector<BilliardMode>& modes) {
    std::set<std::pair<int, int>> s;
    for (const auto& mode : modes) s.emplace(mode.n, mode.m);
    return s;
  };
  ScalingReport report;
  report.w = w;
  report.population_scaled = scaled.size();
  report.population_reference = reference.size();
  report.sets_equal = labels(scaled) == labels(reference);
  report.f_scaled = scaled.empty() ? 0.0 : blank_fraction(scaled, R_b);
  report.f_reference = reference.empty() ? 0.0 : blank_fraction(reference, R_b);
  return report;
}

}  // namespace eigenshell::billiard
