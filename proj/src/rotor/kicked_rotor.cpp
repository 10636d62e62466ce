#include "eigenshell/rotor/kicked_rotor.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "eigenshell/core/eigensolver.hpp"
#include "eigenshell/core/errors.hpp"

namespace eigenshell::rotor {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

}  // namespace

std::pair<double, double> chirikov_step(double q, double p, double K) {
  const double p_next = wrap(p + K * std::sin(q));
  return {wrap(q + p_next), p_next};
}

std::vector<std::pair<double, double>> chirikov_orbit(double q, double p, double K, std::size_t n) {
  std::vector<std::pair<double, double>> orbit;
  orbit.reserve(n + 1);
  orbit.emplace_back(wrap(q), wrap(p));
  for (std::size_t i = 0; i < n; ++i) orbit.push_back(chirikov_step(orbit.back().first, orbit.back().second, K));
  return orbit;
}

TorusBasis::TorusBasis(int m) : m_(m) {
  if (m < 1) throw std::invalid_argument("TorusBasis: m must be >= 1");
}

double TorusBasis::hbar() const { return kTwoPi / N(); }

double TorusBasis::centre(int index) const { return kTwoPi * index / m_ + std::numbers::pi / m_; }

Eigen::VectorXcd TorusBasis::cell(int a, int b) const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N());
  const double norm = 1.0 / std::sqrt(static_cast<double>(m_));
  const double Q = centre(b);
  for (int s = 0; s < m_; ++s) v(a * m_ + s) = std::polar(norm, -Q * s);
  return v;
}

Eigen::MatrixXd TorusBasis::cell_distribution(const Eigen::Ref<const Eigen::VectorXcd>& psi) const {
  if (psi.size() != N()) throw std::invalid_argument("cell_distribution: state dimension mismatch");
  Eigen::MatrixXd dist(m_, m_);
  // Phase table e^{i Q_b s}.
  Eigen::MatrixXcd phases(m_, m_);
  for (int b = 0; b < m_; ++b) {
    for (int s = 0; s < m_; ++s) phases(b, s) = std::polar(1.0, centre(b) * s);
  }
  for (int a = 0; a < m_; ++a) {
    const Eigen::VectorXcd amp = phases * psi.segment(a * m_, m_);
    for (int b = 0; b < m_; ++b) dist(a, b) = std::norm(amp(b)) / m_;
  }
  return dist;
}

Eigen::MatrixXcd build_floquet(int m, double K) {
  if (m < 8 || m > 128) throw std::invalid_argument("build_floquet: m must lie in [8, 128]");
  const int N = m * m;
  const double hbar = kTwoPi / N;
  // c_d = (1/N) sum_k e^{-2 pi i k d / N} e^{-i K cos(q_k) / hbar}: one forward DFT.
  std::vector<Complex> kick(N), c;
  for (int k = 0; k < N; ++k) kick[k] = std::polar(1.0, -K * std::cos(kTwoPi * k / N) / hbar);
  Eigen::FFT<double> fft;
  fft.fwd(c, kick);
  for (auto& v : c) v /= static_cast<double>(N);

  Eigen::MatrixXcd U(N, N);
  for (int n = 0; n < N; ++n) {
    const long sym = n < (N + 1) / 2 ? n : n - N;  // n in [-N/2, N/2)
    const double kinetic = std::numbers::pi * static_cast<double>(sym * sym) / N;
    const Complex phase = std::polar(1.0, -std::fmod(kinetic, kTwoPi));
    for (int np = 0; np < N; ++np) {
      int d = (n - np) % N;
      if (d < 0) d += N;
      U(n, np) = phase * c[d];
    }
  }
  return U;
}

FloquetSpectrum solve_floquet(int m, double K) {
  FloquetSpectrum out;
  out.m = m;
  out.K = K;
  out.spectrum = eig_unitary(build_floquet(m, K));
  return out;
}

double width_W(const Eigen::Ref<const Eigen::VectorXcd>& psi, const TorusBasis& basis) {
  const Eigen::MatrixXd dist = basis.cell_distribution(psi);
  double w2 = 0.0;
  for (int a = 0; a < basis.m(); ++a) {
    const double dp = basis.centre(a) - std::numbers::pi;
    for (int b = 0; b < basis.m(); ++b) {
      const double dq = basis.centre(b) - std::numbers::pi;
      w2 += (dq * dq + dp * dp) * dist(a, b);
    }
  }
  return std::sqrt(w2);
}

std::vector<double> state_widths(const FloquetSpectrum& floquet) {
  const TorusBasis basis(floquet.m);
  std::vector<double> out(floquet.spectrum.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = width_W(floquet.spectrum.states.col(static_cast<Eigen::Index>(k)), basis);
  }
  return out;
}

Classifier width_classifier(std::vector<double> widths, double threshold) {
  return Classifier::from_values("width_W", std::move(widths), threshold, Rule::kAbove);
}

Eigen::MatrixXd shell_distribution(const FloquetSpectrum& floquet, const EnergyShell& shell) {
  const auto members = shell_select(floquet.spectrum.energy_span(), shell);
  if (members.empty()) throw EmptyShellError("shell_distribution: empty pseudo-energy shell");
  const TorusBasis basis(floquet.m);
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(basis.m(), basis.m());
  for (const auto k : members) {
    p += basis.cell_distribution(floquet.spectrum.states.col(static_cast<Eigen::Index>(k)));
  }
  return p / static_cast<double>(members.size());
}

double gwvne_entropy(const Eigen::Ref<const Eigen::MatrixXd>& p) {
  if (p.size() < 2) throw std::invalid_argument("gwvne_entropy: need at least two cells");
  double s = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double v = p.data()[i];
    if (v < 0.0) throw std::domain_error("gwvne_entropy: negative cell probability");
    if (v > 0.0) s -= v * std::log(v);
  }
  return s / std::log(static_cast<double>(p.size()));
}

std::vector<double> entropy_vs_center(const FloquetSpectrum& floquet, double width,
                                      std::span<const double> centers) {
  std::vector<double> out;
  out.reserve(centers.size());
  for (const double c : centers) {
    out.push_back(gwvne_entropy(shell_distribution(floquet, EnergyShell::circle(c, width))));
  }
  return out;
}

double support_fraction(const Eigen::Ref<const Eigen::VectorXcd>& psi, const TorusBasis& basis,
                        double cutoff) {
  const Eigen::MatrixXd dist = basis.cell_distribution(psi);
  return static_cast<double>((dist.array() > cutoff).count()) / static_cast<double>(dist.size());
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("linear_fit: need >= 2 paired points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, ymax = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    ymax = std::max(ymax, std::abs(y[i]));
  }
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(y[i] - (fit.slope * x[i] + fit.intercept)));
  }
  fit.max_relative_residual = ymax > 0.0 ? worst / ymax : 0.0;
  return fit;
}

}  // namespace eigenshell::rotor
