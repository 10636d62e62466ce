#include "eigenshell/core/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "eigenshell/core/errors.hpp"

namespace eigenshell {
namespace {

template <class MatrixType>
double max_asymmetry_impl(const MatrixType& h) {
  double worst = 0.0;
  const Eigen::Index n = h.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j + 1; i < n; ++i) {
      worst = std::max(worst, std::abs(h(i, j) - std::conj(h(j, i))));
    }
    worst = std::max(worst, std::abs(std::imag(Complex(h(j, j)))));
  }
  return worst;
}

template <class MatrixType>
void require_self_adjoint(const MatrixType& h) {
  if (h.rows() == 0 || h.rows() != h.cols()) {
    throw std::invalid_argument("eig_hermitian: matrix must be square with dimension >= 1");
  }
  const double scale = std::max(h.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double asym = max_asymmetry_impl(h);
  if (asym > kSelfAdjointTolerance * scale) {
    std::ostringstream msg;
    msg << "eig_hermitian: matrix is not self-adjoint (max asymmetry " << asym << ", scale "
        << scale << ")";
    throw NotSelfAdjointError(msg.str(), asym);
  }
}

lapack_int as_lapack(Eigen::Index n) { return static_cast<lapack_int>(n); }

}  // namespace

double max_asymmetry(const Eigen::MatrixXd& h) { return max_asymmetry_impl(h); }
double max_asymmetry(const Eigen::MatrixXcd& h) { return max_asymmetry_impl(h); }

double unitarity_defect(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd gram = u.adjoint() * u;
  return (gram - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

RealSpectrum eig_hermitian(Eigen::MatrixXd h) {
  require_self_adjoint(h);
  const lapack_int n = as_lapack(h.rows());
  RealSpectrum out;
  out.energies.resize(n);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, h.data(), n, out.energies.data());
  if (info != 0) throw NonConvergenceError("dsyevd", info);
  out.states = std::move(h);
  return out;
}

ComplexSpectrum eig_hermitian(Eigen::MatrixXcd h) {
  require_self_adjoint(h);
  const lapack_int n = as_lapack(h.rows());
  ComplexSpectrum out;
  out.energies.resize(n);
  const lapack_int info =
      LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, h.data(), n, out.energies.data());
  if (info != 0) throw NonConvergenceError("zheevd", info);
  out.states = std::move(h);
  return out;
}

Eigen::VectorXd eigenvalues_hermitian(Eigen::MatrixXd h) {
  require_self_adjoint(h);
  const lapack_int n = as_lapack(h.rows());
  Eigen::VectorXd w(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, h.data(), n, w.data());
  if (info != 0) throw NonConvergenceError("dsyevd", info);
  return w;
}

RealSpectrum eig_hermitian_window(Eigen::MatrixXd h, double lower, double upper) {
  require_self_adjoint(h);
  if (!(lower <= upper)) throw std::invalid_argument("eig_hermitian_window: lower > upper");
  const lapack_int n = as_lapack(h.rows());

  // Tridiagonalize once, then MRRR on the tridiagonal restricted to the
  // window, then back-transform only the selected vectors.
  std::vector<double> diag(n), offdiag(std::max<lapack_int>(n, 1)), tau(std::max<lapack_int>(n - 1, 1));
  lapack_int info = LAPACKE_dsytrd(LAPACK_COL_MAJOR, 'L', n, h.data(), n, diag.data(),
                                   offdiag.data(), tau.data());
  if (info != 0) throw NonConvergenceError("dsytrd", info);

  // dstemr's interval is half-open (vl, vu].
  const double vl = std::nextafter(lower, -std::numeric_limits<double>::infinity());
  const double vu = upper;
  lapack_logical tryrac = 1;
  lapack_int found = 0;

  std::vector<double> d_query = diag, e_query = offdiag;
  double zcount = 0.0;
  std::vector<double> w(n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
  double work_query = 0.0;
  lapack_int iwork_query = 0;
  info = LAPACKE_dstemr_work(LAPACK_COL_MAJOR, 'V', 'V', n, d_query.data(), e_query.data(), vl,
                             vu, 0, 0, &found, w.data(), &zcount, n, -1, isuppz.data(), &tryrac,
                             &work_query, -1, &iwork_query, -1);
  if (info != 0) throw NonConvergenceError("dstemr (query)", info);
  const auto columns = std::max<lapack_int>(static_cast<lapack_int>(zcount), 1);

  std::vector<double> work(static_cast<std::size_t>(work_query));
  std::vector<lapack_int> iwork(static_cast<std::size_t>(iwork_query));
  Eigen::MatrixXd z(n, columns);
  tryrac = 1;
  info = LAPACKE_dstemr_work(LAPACK_COL_MAJOR, 'V', 'V', n, diag.data(), offdiag.data(), vl, vu,
                             0, 0, &found, w.data(), z.data(), n, columns, isuppz.data(), &tryrac,
                             work.data(), static_cast<lapack_int>(work.size()), iwork.data(),
                             static_cast<lapack_int>(iwork.size()));
  if (info != 0) throw NonConvergenceError("dstemr", info);

  RealSpectrum out;
  out.energies = Eigen::Map<Eigen::VectorXd>(w.data(), found);
  if (found == 0) {
    out.states.resize(n, 0);
    return out;
  }
  info = LAPACKE_dormtr(LAPACK_COL_MAJOR, 'L', 'L', 'N', n, found, h.data(), n, tau.data(),
                        z.data(), n);
  if (info != 0) throw NonConvergenceError("dormtr", info);
  out.states = z.leftCols(found);
  return out;
}

ComplexSpectrum eig_unitary(const Eigen::MatrixXcd& u) {
  if (u.rows() == 0 || u.rows() != u.cols()) {
    throw std::invalid_argument("eig_unitary: matrix must be square with dimension >= 1");
  }
  const double defect = unitarity_defect(u);
  if (defect > kUnitaryTolerance) {
    std::ostringstream msg;
    msg << "eig_unitary: matrix is not unitary (max |U^dagger U - I| = " << defect << ")";
    throw NotUnitaryError(msg.str(), defect);
  }
  const lapack_int n = as_lapack(u.rows());
  Eigen::MatrixXcd schur = u;
  Eigen::MatrixXcd vectors(n, n);
  Eigen::VectorXcd lambda(n);
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, schur.data(), n,
                                        &sdim, lambda.data(), vectors.data(), n);
  if (info != 0) throw NonConvergenceError("zgees", info);

  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<double> phase(n);
  for (lapack_int k = 0; k < n; ++k) {
    double e = std::fmod(-std::arg(lambda(k)), two_pi);
    if (e < 0.0) e += two_pi;
    if (e >= two_pi) e = 0.0;
    phase[k] = e;
  }
  std::vector<lapack_int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](lapack_int a, lapack_int b) { return phase[a] < phase[b]; });

  ComplexSpectrum out;
  out.energies.resize(n);
  out.states.resize(n, n);
  for (lapack_int k = 0; k < n; ++k) {
    out.energies(k) = phase[order[k]];
    out.states.col(k) = vectors.col(order[k]);
  }
  return out;
}

}  // namespace eigenshell
