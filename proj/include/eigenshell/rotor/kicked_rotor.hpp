#pragma once

#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "eigenshell/core/shell.hpp"
#include "eigenshell/core/spectrum.hpp"

namespace eigenshell::rotor {

/// One period of the standard map: p' = p + K sin q, q' = q + p', mod 2pi.
std::pair<double, double> chirikov_step(double q, double p, double K);

/// The start (q, p) followed by n iterates.
std::vector<std::pair<double, double>> chirikov_orbit(double q, double p, double K, std::size_t n);

/// Quantized torus with m x m Planck cells: N = m^2 momentum levels,
/// hbar = 2 pi / N. Cell (a, b) spans momentum levels n = a m .. a m + m - 1
/// with centre P = 2 pi a / m + pi / m and carries the Fourier phase of
/// Q = 2 pi b / m + pi / m.
class TorusBasis {
 public:
  explicit TorusBasis(int m);

  int m() const { return m_; }
  int N() const { return m_ * m_; }
  double hbar() const;
  double centre(int index) const;  ///< Q or P of cell row/column index

  Eigen::VectorXcd cell(int a, int b) const;
  /// |<Q_b, P_a | psi>|^2 as an m x m matrix (row a = momentum, column b = angle).
  Eigen::MatrixXd cell_distribution(const Eigen::Ref<const Eigen::VectorXcd>& psi) const;

 private:
  int m_;
};

/// Floquet operator e^{-i p^2 / 2 hbar} e^{-i K cos q / hbar} in the momentum
/// basis, n = 0..N-1, with the kinetic phase evaluated at the symmetric
/// representative of n in [-N/2, N/2). Requires 8 <= m <= 128.
Eigen::MatrixXcd build_floquet(int m, double K);

struct FloquetSpectrum {
  ComplexSpectrum spectrum;
  int m = 0;
  double K = 0.0;
};

/// Pseudo-energies in [0, 2pi) and Floquet states.
FloquetSpectrum solve_floquet(int m, double K);

/// W = sqrt(sum [(Q - pi)^2 + (P - pi)^2] |<Q, P | psi>|^2).
double width_W(const Eigen::Ref<const Eigen::VectorXcd>& psi, const TorusBasis& basis);

/// W of every Floquet state, in spectrum order.
std::vector<double> state_widths(const FloquetSpectrum& floquet);

/// Classifier 1 iff W > threshold (default 0.8 pi).
Classifier width_classifier(std::vector<double> widths, double threshold = 0.8 * 3.14159265358979323846);

/// Average cell distribution of the states in a circular pseudo-energy shell.
/// Throws EmptyShellError when the shell is empty.
Eigen::MatrixXd shell_distribution(const FloquetSpectrum& floquet, const EnergyShell& shell);

/// -(1 / log m^2) sum p log p over the cells; rejects negative entries.
double gwvne_entropy(const Eigen::Ref<const Eigen::MatrixXd>& p);

/// Gamma(E_c) at fixed width for every centre.
std::vector<double> entropy_vs_center(const FloquetSpectrum& floquet, double width,
                                      std::span<const double> centers);

/// Fraction of cells where the state's cell probability exceeds `cutoff`.
double support_fraction(const Eigen::Ref<const Eigen::VectorXcd>& psi, const TorusBasis& basis,
                        double cutoff);

/// Least-squares line through (x, y) and the largest residual relative to
/// max |y|.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double max_relative_residual = 0.0;
};
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace eigenshell::rotor
