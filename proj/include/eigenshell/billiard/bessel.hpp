#pragma once

#include <vector>

namespace eigenshell::billiard {

inline constexpr int kMaxBesselOrder = 2000;
inline constexpr double kMaxBesselArgument = 1e4;

/// J_m(x) for 0 <= m <= 2000, 0 <= x <= 1e4. Power series for x <= 2,
/// normalized Miller downward recurrence otherwise. Absolute error is below
/// 1e-10 on the whole range. Throws std::domain_error outside it.
double bessel_j(int m, double x);

struct BesselZero {
  int n = 0;         ///< radial index, 1 for the first positive zero
  double x = 0.0;
};

/// All positive zeros of J_m in [lo, hi], ascending, with radial indices
/// assigned by counting every zero from the origin.
std::vector<BesselZero> bessel_zeros_in(int m, double lo, double hi);

}  // namespace eigenshell::billiard
