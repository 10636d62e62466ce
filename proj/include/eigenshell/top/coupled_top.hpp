#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eigenshell/core/shell.hpp"
#include "eigenshell/core/spectrum.hpp"

namespace eigenshell::top {

/// Largest two-top Hilbert dimension accepted by build_top_hamiltonian.
inline constexpr std::size_t kMaxTopDimension = 20000;

/// Orientation of the coupling. Both frames are related by the rotation that
/// exchanges x and z on each top and have identical spectra.
enum class Frame {
  kStandard,  ///< L1z + L2z + (mu/J) L1x L2x
  kSection,   ///< L1x + L2x + (mu/J) L1z L2z, diagonal coupling in the Lz basis
};

/// Spin-j angular momentum matrices in the Lz basis ordered m = -j..j.
Eigen::VectorXd spin_lz(double j);
Eigen::MatrixXd spin_lx(double j);

/// H/J for two spin-j tops with J = j, on the product basis
/// index = (m1 + j)(2j + 1) + (m2 + j). 2j must be a positive integer.
Eigen::MatrixXd build_top_hamiltonian(double j, double mu, Frame frame = Frame::kStandard);

/// Planck-cell tiling of one top. L odd, L^2 = 2j + 1, cell (q, k) has
/// Q = 2 pi q / L and mean Lz = k L = P j, k = -m_half..m_half.
class TopBasis {
 public:
  explicit TopBasis(int L);
  /// Basis for spin j; throws unless 2j + 1 is the square of an odd integer.
  static TopBasis for_spin(double j);

  int L() const { return L_; }
  int m_half() const { return (L_ - 1) / 2; }
  int j() const { return (L_ * L_ - 1) / 2; }
  int single_dimension() const { return L_ * L_; }

  double P(int k) const { return static_cast<double>(k) * L_ / j(); }
  double Q(int q) const;
  /// Nearest grid angle index to an angle in [0, 2pi].
  int nearest_q(double angle) const;
  std::vector<double> P_grid() const;

  /// Single-top cell state for an arbitrary angle Q and momentum row k.
  Eigen::VectorXcd cell(double Q, int k) const;
  /// All L^2 single-top cells as columns, ordered (k, q) with q fastest.
  Eigen::MatrixXcd cell_matrix() const;

 private:
  int L_;
};

/// Quantum Poincare section of a two-top state at Q1 = pi, H/J = E.
struct SectionDensity {
  std::vector<double> P1;       ///< row values
  std::vector<double> P2;       ///< column values
  Eigen::MatrixXd rho;          ///< rho(a, b) at (P1[a], P2[b]); 0 where absent
  Eigen::MatrixXi admissible;   ///< 1 where the cell lies on the energy surface
  Eigen::MatrixXd Q2;           ///< snapped Q2 per admissible cell, NaN otherwise
  double energy = 0.0;

  double total() const { return rho.sum(); }
};

/// cos Q2 on the surface H/J = E at Q1 = pi, or NaN when the surface misses
/// the (P1, P2) pair or P2 = +-1.
double section_cos_q2(double E, double mu, double P1, double P2, double Q1 = 3.14159265358979323846);

/// rho(P1, P2) = |<pi, P1; Q2, P2 | state>|^2 with Q2 from the energy
/// surface snapped to the nearest grid angle. The state must be expressed in
/// the kSection frame product basis.
SectionDensity husimi_section(const Eigen::Ref<const Eigen::VectorXd>& state,
                              const TopBasis& basis, double E, double mu);

/// Mass-weighted variance of (P1, P2) over the half section P2 >= 0.
/// Throws std::domain_error when that half carries no mass.
double section_variance(const SectionDensity& density);

/// 1 iff section_variance >= delta.
int variance_classifier(const SectionDensity& density, double delta);

/// Eigenpairs of H/J (kSection frame) with E/J in [lower, upper].
RealSpectrum solve_top_window(double j, double mu, double lower, double upper);

struct StateTypeCount {
  std::size_t integrable = 0;  ///< class 0
  std::size_t chaotic = 0;     ///< class 1
  double integrable_fraction() const {
    return static_cast<double>(integrable) / static_cast<double>(integrable + chaotic);
  }
};

/// Section variance of every stored state, in spectrum order.
std::vector<double> state_variances(const RealSpectrum& spectrum, const TopBasis& basis, double mu);

/// Counts class 0 / class 1 states in the shell. Throws EmptyShellError on an
/// empty shell.
StateTypeCount count_state_types(const RealSpectrum& spectrum, std::span<const double> variances,
                                 const EnergyShell& shell, double delta);

/// Classifier "Var >= delta" over precomputed variances.
Classifier variance_threshold_classifier(std::vector<double> variances, double delta);

}  // namespace eigenshell::top
