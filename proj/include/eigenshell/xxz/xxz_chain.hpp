#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "eigenshell/core/shell.hpp"
#include "eigenshell/core/spectrum.hpp"

namespace eigenshell::xxz {

/// Open XXZ chain. Site i (1-based) is bit i-1 of the basis index; a clear
/// bit is spin up (sigma^z = +1).
struct ChainSpec {
  int N = 12;
  double rho = 0.4;
};

inline constexpr int kMaxSites = 14;

/// sum_i (sx sx + sy sy + rho sz sz) over bonds (i, i+1), dense real matrix.
Eigen::MatrixXd build_xxz(const ChainSpec& spec);

/// Diagonal of M_z on the product basis.
Eigen::VectorXd magnetization_diagonal(int N);

inline constexpr std::size_t kFeatureCount = 5;
enum Feature : std::size_t { kSigmaZMid = 0, kMz = 1, kC34 = 2, kGlobalX = 3, kRenyi2 = 4 };

/// Column names used in CSV output.
const std::array<std::string, kFeatureCount>& feature_names();

/// <sz_{[N/2]}>, <M_z>, <sx_3 sx_4>, <prod sx>, -log Tr(rho_1^2). The
/// correlation is NaN for N < 4. Throws std::invalid_argument when the norm
/// deviates from 1 by more than 1e-8.
std::array<double, kFeatureCount> feature_values(const Eigen::Ref<const Eigen::VectorXcd>& psi);
std::array<double, kFeatureCount> feature_values(const Eigen::Ref<const Eigen::VectorXd>& psi);

/// Second Renyi entropy of the reduced state of site 1.
double renyi2_first_spin(const Eigen::Ref<const Eigen::VectorXcd>& psi);

struct ChainAnalysis {
  ChainSpec spec;
  RealSpectrum spectrum;
  std::vector<std::array<double, kFeatureCount>> features;
  std::vector<bool> degenerate;  ///< gap to a neighbouring level below 1e-10
  std::array<double, kFeatureCount> medians{};
};

/// Diagonalizes the chain and evaluates every feature on every eigenstate.
ChainAnalysis analyze_chain(const ChainSpec& spec);
/// Same, for an already computed spectrum of build_xxz(spec).
ChainAnalysis analyze_spectrum(const ChainSpec& spec, RealSpectrum spectrum);

/// Median of a sample (mean of the two central values for even counts),
/// ignoring NaN.
double median(std::vector<double> values);

struct RatioSuite {
  std::array<RatioCurve, kFeatureCount> curves;
  std::vector<std::size_t> population;
  std::array<double, kFeatureCount> thresholds{};
};

/// One "F >= threshold" ratio curve per feature at fixed centre. Empty shells
/// become gap markers.
RatioSuite xxz_ratio_suite(const ChainAnalysis& analysis, double center,
                           std::span<const double> widths,
                           const std::array<double, kFeatureCount>& thresholds);

/// The default width grid 0.2, 0.4, ..., 4.0.
std::vector<double> default_width_grid();

}  // namespace eigenshell::xxz
