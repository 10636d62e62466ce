#pragma once

#include <span>
#include <vector>

#include "eigenshell/core/shell.hpp"

namespace eigenshell::billiard {

/// Dirichlet eigenmode of the circular billiard of radius R0, hbar = M = 1.
struct BilliardMode {
  int n = 0;  ///< radial quantum number, >= 1
  int m = 0;  ///< angular quantum number, either sign
  double k = 0.0;
  double R0 = 1.0;

  double energy() const { return 0.5 * k * k; }
};

/// How a wavenumber window (k_c, dk) maps to an interval.
enum class WidthConvention {
  kFull,  ///< [k_c - dk/2, k_c + dk/2]
  kHalf,  ///< [k_c - dk, k_c + dk]
};

/// Every mode with k in [k_lo, k_hi], m = 0 once and +-m twice, sorted by k
/// then m.
std::vector<BilliardMode> enumerate_modes(double k_lo, double k_hi, double R0 = 1.0);

/// Modes of the shell around k_c of width dk under `convention`.
std::vector<BilliardMode> enumerate_shell(double k_c, double dk, double R0 = 1.0,
                                          WidthConvention convention = WidthConvention::kFull);

/// Number of distinct levels (n, |m|) in a mode list.
std::size_t level_count(std::span<const BilliardMode> modes);

/// Weyl estimate (R0^2/4)(k_hi^2 - k_lo^2) of the number of states in [k_lo, k_hi].
double weyl_count(double k_lo, double k_hi, double R0 = 1.0);

/// |m| / k, the radius of the central region the mode avoids.
double blank_radius(const BilliardMode& mode);

/// Fraction of the classical isoenergetic surface with blank radius below R_b:
/// (2/pi)(u sqrt(1-u^2) + asin u), u = R_b/R0.
double g_classical(double R_b, double R0 = 1.0);

/// Classifier over `modes`: 1 iff blank_radius < R_b.
Classifier blank_radius_classifier(std::span<const BilliardMode> modes, double R_b);

/// Fraction of modes with blank radius below R_b. Throws EmptyShellError on an
/// empty list.
double blank_fraction(std::span<const BilliardMode> modes, double R_b);

/// f(R_b) over a fixed mode set, with g(R_b) recorded in the metadata-free
/// sample list as a parallel vector.
struct BlankCurve {
  RatioCurve curve;
  std::vector<double> g;
};
BlankCurve f_curve_vs_Rb(std::span<const BilliardMode> modes, std::span<const double> R_b_grid);

struct ScalingReport {
  double w = 1.0;
  std::size_t population_scaled = 0;    ///< shell at hbar/w, width dE
  std::size_t population_reference = 0; ///< shell at hbar, width w^2 dE
  bool sets_equal = false;
  double f_scaled = 0.0;
  double f_reference = 0.0;
};

/// Compares the mode set of the energy shell of width dE = k_c dk centred on
/// the level k_c at Planck constant 1/w with the shell of width w^2 dE at
/// Planck constant 1. f uses the blank-radius classifier at R_b.
ScalingReport hbar_scaling_check(double k_c, double dk, double w, double R_b = 0.5,
                                 double R0 = 1.0);

}  // namespace eigenshell::billiard
