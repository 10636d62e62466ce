#include "eigenshell/top/coupled_top.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "eigenshell/core/eigensolver.hpp"
#include "eigenshell/core/errors.hpp"

namespace eigenshell::top {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int twice_spin(double j) {
  const double two_j = 2.0 * j;
  const double rounded = std::round(two_j);
  if (!(j > 0.0) || std::abs(two_j - rounded) > 1e-12) {
    throw std::invalid_argument("spin must be a positive multiple of 1/2");
  }
  return static_cast<int>(rounded);
}

double lx_element(double j, double m) {
  // <m+1| Lx |m>
  return 0.5 * std::sqrt(j * (j + 1.0) - m * (m + 1.0));
}

}  // namespace

Eigen::VectorXd spin_lz(double j) {
  const int d = twice_spin(j) + 1;
  Eigen::VectorXd lz(d);
  for (int i = 0; i < d; ++i) lz(i) = i - j;
  return lz;
}

Eigen::MatrixXd spin_lx(double j) {
  const int d = twice_spin(j) + 1;
  Eigen::MatrixXd lx = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i + 1 < d; ++i) {
    const double v = lx_element(j, i - j);
    lx(i + 1, i) = v;
    lx(i, i + 1) = v;
  }
  return lx;
}

Eigen::MatrixXd build_top_hamiltonian(double j, double mu, Frame frame) {
  const int d = twice_spin(j) + 1;
  const auto dim = static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
  if (dim > kMaxTopDimension) {
    std::ostringstream msg;
    msg << "build_top_hamiltonian: dimension " << dim << " exceeds cap " << kMaxTopDimension;
    throw std::invalid_argument(msg.str());
  }
  const double J = j;
  const auto n = static_cast<Eigen::Index>(dim);
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
  auto index = [d](int i1, int i2) { return static_cast<Eigen::Index>(i1) * d + i2; };

  if (frame == Frame::kStandard) {
    const double c = mu / (J * J);
    for (int i1 = 0; i1 < d; ++i1) {
      for (int i2 = 0; i2 < d; ++i2) {
        const Eigen::Index r = index(i1, i2);
        h(r, r) = ((i1 - j) + (i2 - j)) / J;
        for (const int s1 : {-1, 1}) {
          const int k1 = i1 + s1;
          if (k1 < 0 || k1 >= d) continue;
          const double a1 = lx_element(j, std::min(i1, k1) - j);
          for (const int s2 : {-1, 1}) {
            const int k2 = i2 + s2;
            if (k2 < 0 || k2 >= d) continue;
            h(index(k1, k2), r) = c * a1 * lx_element(j, std::min(i2, k2) - j);
          }
        }
      }
    }
  } else {
    const double c = mu / (J * J);
    for (int i1 = 0; i1 < d; ++i1) {
      for (int i2 = 0; i2 < d; ++i2) {
        const Eigen::Index r = index(i1, i2);
        h(r, r) = c * (i1 - j) * (i2 - j);
        if (i1 + 1 < d) {
          const double v = lx_element(j, i1 - j) / J;
          h(index(i1 + 1, i2), r) = v;
          h(r, index(i1 + 1, i2)) = v;
        }
        if (i2 + 1 < d) {
          const double v = lx_element(j, i2 - j) / J;
          h(index(i1, i2 + 1), r) = v;
          h(r, index(i1, i2 + 1)) = v;
        }
      }
    }
  }
  return h;
}

TopBasis::TopBasis(int L) : L_(L) {
  if (L < 1 || L % 2 == 0) throw std::invalid_argument("TopBasis: L must be a positive odd integer");
}

TopBasis TopBasis::for_spin(double j) {
  const int d = twice_spin(j) + 1;
  const int L = static_cast<int>(std::lround(std::sqrt(static_cast<double>(d))));
  if (L * L != d || L % 2 == 0) {
    std::ostringstream msg;
    msg << "TopBasis: 2j+1 = " << d << " is not the square of an odd integer";
    throw std::invalid_argument(msg.str());
  }
  return TopBasis(L);
}

double TopBasis::Q(int q) const { return kTwoPi * q / L_; }

int TopBasis::nearest_q(double angle) const {
  int q = static_cast<int>(std::lround(angle * L_ / kTwoPi)) % L_;
  if (q < 0) q += L_;
  return q;
}

std::vector<double> TopBasis::P_grid() const {
  std::vector<double> out;
  for (int k = -m_half(); k <= m_half(); ++k) out.push_back(P(k));
  return out;
}

Eigen::VectorXcd TopBasis::cell(double Qv, int k) const {
  if (std::abs(k) > m_half()) throw std::out_of_range("TopBasis::cell: momentum row out of range");
  const int jj = j();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(single_dimension());
  const double norm = 1.0 / std::sqrt(static_cast<double>(L_));
  for (int n = k * L_ - m_half(); n <= k * L_ + m_half(); ++n) {
    v(n + jj) = std::polar(norm, -Qv * n);
  }
  return v;
}

Eigen::MatrixXcd TopBasis::cell_matrix() const {
  Eigen::MatrixXcd cells(single_dimension(), single_dimension());
  Eigen::Index col = 0;
  for (int k = -m_half(); k <= m_half(); ++k) {
    for (int q = 0; q < L_; ++q) cells.col(col++) = cell(Q(q), k);
  }
  return cells;
}

double section_cos_q2(double E, double mu, double P1, double P2, double Q1) {
  const double s2 = 1.0 - P2 * P2;
  if (!(s2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double c = (E - mu * P1 * P2 - std::sqrt(std::max(0.0, 1.0 - P1 * P1)) * std::cos(Q1)) /
                   std::sqrt(s2);
  if (std::abs(c) > 1.0) return std::numeric_limits<double>::quiet_NaN();
  return c;
}

SectionDensity husimi_section(const Eigen::Ref<const Eigen::VectorXd>& state,
                              const TopBasis& basis, double E, double mu) {
  const int L = basis.L();
  const int d = basis.single_dimension();
  const int jj = basis.j();
  const int mh = basis.m_half();
  if (state.size() != static_cast<Eigen::Index>(d) * d) {
    throw std::invalid_argument("husimi_section: state dimension does not match the basis");
  }
  SectionDensity out;
  out.energy = E;
  out.P1 = basis.P_grid();
  out.P2 = out.P1;
  out.rho = Eigen::MatrixXd::Zero(L, L);
  out.admissible = Eigen::MatrixXi::Zero(L, L);
  out.Q2 = Eigen::MatrixXd::Constant(L, L, std::numeric_limits<double>::quiet_NaN());

  const double inv_L = 1.0 / L;
  Eigen::VectorXd folded(d);
  for (int k1 = -mh; k1 <= mh; ++k1) {
    // Contract the first top with the Q1 = pi cell: sum_n1 e^{i pi n1} psi(n1, .).
    folded.setZero();
    for (int n1 = k1 * L - mh; n1 <= k1 * L + mh; ++n1) {
      const double sign = (n1 % 2 == 0) ? 1.0 : -1.0;
      folded += sign * state.segment(static_cast<Eigen::Index>(n1 + jj) * d, d);
    }
    for (int k2 = -mh; k2 <= mh; ++k2) {
      const int a = k1 + mh;
      const int b = k2 + mh;
      const double c = section_cos_q2(E, mu, basis.P(k1), basis.P(k2));
      if (std::isnan(c)) continue;
      const int q = basis.nearest_q(std::acos(c));
      const double Q2 = basis.Q(q);
      Complex amp = 0.0;
      for (int n2 = k2 * L - mh; n2 <= k2 * L + mh; ++n2) {
        amp += folded(n2 + jj) * std::polar(1.0, Q2 * n2);
      }
      out.admissible(a, b) = 1;
      out.Q2(a, b) = Q2;
      out.rho(a, b) = std::norm(amp) * inv_L * inv_L;
    }
  }
  return out;
}

double section_variance(const SectionDensity& density) {
  double mass = 0.0, m1 = 0.0, m2 = 0.0;
  const auto rows = static_cast<Eigen::Index>(density.P1.size());
  const auto cols = static_cast<Eigen::Index>(density.P2.size());
  for (Eigen::Index a = 0; a < rows; ++a) {
    for (Eigen::Index b = 0; b < cols; ++b) {
      if (density.P2[b] < 0.0 || !density.admissible(a, b)) continue;
      const double r = density.rho(a, b);
      mass += r;
      m1 += r * density.P1[a];
      m2 += r * density.P2[b];
    }
  }
  if (!(mass > 0.0)) throw std::domain_error("section_variance: no mass on the P2 >= 0 half section");
  m1 /= mass;
  m2 /= mass;
  double var = 0.0;
  for (Eigen::Index a = 0; a < rows; ++a) {
    for (Eigen::Index b = 0; b < cols; ++b) {
      if (density.P2[b] < 0.0 || !density.admissible(a, b)) continue;
      const double d1 = density.P1[a] - m1;
      const double d2 = density.P2[b] - m2;
      var += density.rho(a, b) * (d1 * d1 + d2 * d2);
    }
  }
  return var / mass;
}

int variance_classifier(const SectionDensity& density, double delta) {
  return section_variance(density) >= delta ? 1 : 0;
}

RealSpectrum solve_top_window(double j, double mu, double lower, double upper) {
  return eig_hermitian_window(build_top_hamiltonian(j, mu, Frame::kSection), lower, upper);
}

std::vector<double> state_variances(const RealSpectrum& spectrum, const TopBasis& basis, double mu) {
  std::vector<double> out(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    out[k] = section_variance(
        husimi_section(spectrum.states.col(col), basis, spectrum.energies(col), mu));
  }
  return out;
}

Classifier variance_threshold_classifier(std::vector<double> variances, double delta) {
  return Classifier::from_values("section_variance", std::move(variances), delta, Rule::kAtLeast);
}

StateTypeCount count_state_types(const RealSpectrum& spectrum, std::span<const double> variances,
                                 const EnergyShell& shell, double delta) {
  if (variances.size() != spectrum.size()) {
    throw std::invalid_argument("count_state_types: one variance per state required");
  }
  const auto members = shell_select(spectrum.energy_span(), shell);
  if (members.empty()) throw EmptyShellError("count_state_types: empty shell");
  StateTypeCount count;
  for (const auto k : members) {
    if (variances[k] >= delta) {
      ++count.chaotic;
    } else {
      ++count.integrable;
    }
  }
  return count;
}

}  // namespace eigenshell::top
