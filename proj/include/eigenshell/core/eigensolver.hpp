#pragma once

#include <Eigen/Dense>

#include "eigenshell/core/spectrum.hpp"

namespace eigenshell {

/// Relative tolerance on |H - H^dagger| accepted by the Hermitian solvers.
inline constexpr double kSelfAdjointTolerance = 1e-10;
/// Tolerance on max |U^dagger U - I| accepted by eig_unitary.
inline constexpr double kUnitaryTolerance = 1e-8;

/// max_ij |H_ij - conj(H_ji)|.
double max_asymmetry(const Eigen::MatrixXd& h);
double max_asymmetry(const Eigen::MatrixXcd& h);

/// max_ij |(U^dagger U - I)_ij|.
double unitarity_defect(const Eigen::MatrixXcd& u);

/// Full eigendecomposition of a self-adjoint matrix (LAPACK divide and
/// conquer). The matrix is taken by value and reused as the eigenvector
/// buffer, so pass an rvalue to avoid a copy.
///
/// Throws NotSelfAdjointError when the asymmetry exceeds
/// kSelfAdjointTolerance * max|H|, NonConvergenceError on LAPACK failure.
RealSpectrum eig_hermitian(Eigen::MatrixXd h);
ComplexSpectrum eig_hermitian(Eigen::MatrixXcd h);

/// Eigenvalues of a self-adjoint matrix without vectors.
Eigen::VectorXd eigenvalues_hermitian(Eigen::MatrixXd h);

/// Eigenpairs with eigenvalue in [lower, upper] only (MRRR, range mode).
/// This is what makes the (2j+1)^2 ~ 1.5e4 coupled-top runs fit in memory.
RealSpectrum eig_hermitian_window(Eigen::MatrixXd h, double lower, double upper);

/// Floquet-style decomposition of a unitary matrix via complex Schur form.
/// Returned energies are pseudo-energies E = -arg(lambda) mapped into
/// [0, 2pi), ascending; columns are orthonormal Schur vectors.
ComplexSpectrum eig_unitary(const Eigen::MatrixXcd& u);

}  // namespace eigenshell
