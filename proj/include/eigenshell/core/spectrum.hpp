#pragma once

#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace eigenshell {

using Complex = std::complex<double>;

/// Eigenpairs of one model run. `energies` is ascending; `states` holds one
/// eigenvector per column and is empty (0 columns) when vectors were not kept.
template <class Scalar>
struct SpectrumRecord {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  Eigen::VectorXd energies;
  Matrix states;
  std::vector<std::string> labels;

  std::size_t size() const { return static_cast<std::size_t>(energies.size()); }
  bool has_states() const { return states.cols() > 0; }
  std::span<const double> energy_span() const {
    return {energies.data(), static_cast<std::size_t>(energies.size())};
  }
};

using RealSpectrum = SpectrumRecord<double>;
using ComplexSpectrum = SpectrumRecord<Complex>;

/// Largest ||H v_k - E_k v_k||_2 over the stored columns.
template <class MatrixType, class Scalar>
double max_residual(const MatrixType& h, const SpectrumRecord<Scalar>& spectrum) {
  double worst = 0.0;
  for (Eigen::Index k = 0; k < spectrum.states.cols(); ++k) {
    const auto v = spectrum.states.col(k);
    const double r = (h * v - spectrum.energies(k) * v).norm();
    worst = std::max(worst, r);
  }
  return worst;
}

/// Largest deviation of V^dagger V from the identity (entrywise max-abs).
template <class Scalar>
double orthonormality_defect(const SpectrumRecord<Scalar>& spectrum) {
  const auto& v = spectrum.states;
  const auto gram = (v.adjoint() * v).eval();
  const auto n = gram.rows();
  return (gram - decltype(gram)::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace eigenshell
