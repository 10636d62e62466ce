#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "eigenshell/core/eigensolver.hpp"
#include "eigenshell/core/errors.hpp"
#include "eigenshell/top/coupled_top.hpp"

using namespace eigenshell;
using namespace eigenshell::top;

TEST_CASE("spin matrices") {
  for (const double j : {0.5, 1.0, 2.5, 4.0}) {
    const auto lz = spin_lz(j);
    const auto lx = spin_lx(j);
    const auto d = lz.size();
    // Lx has the same spectrum as Lz.
    const auto ev = eigenvalues_hermitian(lx);
    for (Eigen::Index k = 0; k < d; ++k) CHECK(ev(k) == doctest::Approx(lz(k)).epsilon(1e-12));
    // Casimir: Lx^2 + Ly^2 = j(j+1) - Lz^2, and Ly^2 = Lx^2 by symmetry of the
    // real tridiagonal form, so 2 Lx^2 has diagonal j(j+1) - m^2.
    const Eigen::MatrixXd lx2 = lx * lx;
    for (Eigen::Index k = 0; k < d; ++k) {
      CHECK(2.0 * lx2(k, k) == doctest::Approx(j * (j + 1) - lz(k) * lz(k)));
    }
  }
  CHECK_THROWS_AS(spin_lz(0.3), std::invalid_argument);
}

TEST_CASE("both frames share one spectrum") {
  for (const double j : {1.0, 1.5, 3.0}) {
    for (const double mu : {0.0, 0.5, 2.0}) {
      const auto a = eigenvalues_hermitian(build_top_hamiltonian(j, mu, Frame::kStandard));
      const auto b = eigenvalues_hermitian(build_top_hamiltonian(j, mu, Frame::kSection));
      CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-10);
    }
  }
}

TEST_CASE("uncoupled spectrum is a sum of two tops") {
  const double j = 2.0;
  const auto e = eigenvalues_hermitian(build_top_hamiltonian(j, 0.0, Frame::kSection));
  std::vector<double> expected;
  for (int a = -2; a <= 2; ++a) {
    for (int b = -2; b <= 2; ++b) expected.push_back((a + b) / j);
  }
  std::sort(expected.begin(), expected.end());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(e(static_cast<Eigen::Index>(k)) == doctest::Approx(expected[k]).epsilon(1e-12));
  }
}

TEST_CASE("dimension cap") {
  CHECK_THROWS_AS(build_top_hamiltonian(80.0, 0.5), std::invalid_argument);
}

TEST_CASE("Planck cells form an orthonormal basis at every supported size") {
  for (const int L : {1, 3, 5, 7, 9, 11}) {
    const TopBasis basis(L);
    const auto c = basis.cell_matrix();
    const auto n = c.cols();
    CHECK(n == L * L);
    CHECK((c.adjoint() * c - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  CHECK_THROWS_AS(TopBasis(4), std::invalid_argument);
  CHECK(TopBasis::for_spin(60.0).L() == 11);
  CHECK_THROWS_AS(TopBasis::for_spin(49.5), std::invalid_argument);
}

TEST_CASE("Planck cell moments") {
  const TopBasis basis(9);
  const auto lz = spin_lz(basis.j());
  for (int k = -4; k <= 4; ++k) {
    for (const double Q : {0.0, 1.0, std::numbers::pi}) {
      const auto v = basis.cell(Q, k);
      const Eigen::VectorXd p = v.cwiseAbs2();
      const double mean = p.dot(lz);
      const double var = p.dot(lz.cwiseProduct(lz)) - mean * mean;
      CHECK(mean / basis.j() == doctest::Approx(basis.P(k)).epsilon(1e-12));
      CHECK(var == doctest::Approx((81.0 - 1.0) / 12.0));
    }
  }
  CHECK(basis.nearest_q(2.0 * std::numbers::pi) == 0);
  CHECK(basis.nearest_q(basis.Q(4) + 0.01) == 4);
}

TEST_CASE("section density matches explicit cell overlaps") {
  const int L = 5;
  const TopBasis basis(L);
  const double j = basis.j();
  const double mu = 0.5;
  const auto s = solve_top_window(j, mu, -1.0, -0.8);
  REQUIRE(s.size() > 0);
  const auto psi = s.states.col(0);
  const auto d = husimi_section(psi, basis, s.energies(0), mu);
  std::size_t admissible = 0;
  for (int a = 0; a < L; ++a) {
    for (int b = 0; b < L; ++b) {
      const double c = section_cos_q2(s.energies(0), mu, d.P1[a], d.P2[b]);
      CHECK(static_cast<bool>(d.admissible(a, b)) == !std::isnan(c));
      if (!d.admissible(a, b)) {
        CHECK(d.rho(a, b) == 0.0);
        continue;
      }
      ++admissible;
      const double Q2 = basis.Q(basis.nearest_q(std::acos(c)));
      const Eigen::VectorXcd c1 = basis.cell(std::numbers::pi, a - 2);
      const Eigen::VectorXcd c2 = basis.cell(Q2, b - 2);
      Complex amp = 0.0;
      for (Eigen::Index x = 0; x < c1.size(); ++x) {
        for (Eigen::Index y = 0; y < c2.size(); ++y) {
          amp += std::conj(c1(x) * c2(y)) * psi(x * c2.size() + y);
        }
      }
      CHECK(d.rho(a, b) == doctest::Approx(std::norm(amp)).epsilon(1e-10));
      CHECK(d.Q2(a, b) == doctest::Approx(Q2));
    }
  }
  CHECK(admissible > 0);
}

TEST_CASE("section variance") {
  SectionDensity d;
  d.P1 = {-0.5, 0.0, 0.5};
  d.P2 = {-0.5, 0.0, 0.5};
  d.rho = Eigen::MatrixXd::Zero(3, 3);
  d.admissible = Eigen::MatrixXi::Ones(3, 3);
  d.Q2 = Eigen::MatrixXd::Zero(3, 3);
  CHECK_THROWS_AS(section_variance(d), std::domain_error);

  d.rho(0, 0) = 5.0;  // P2 < 0, ignored
  CHECK_THROWS_AS(section_variance(d), std::domain_error);
  d.rho(1, 2) = 1.0;
  CHECK(section_variance(d) == doctest::Approx(0.0));
  d.rho(2, 1) = 1.0;
  // Two equal masses separated by (0.5, -0.5).
  CHECK(section_variance(d) == doctest::Approx(0.25 * 0.5));
  CHECK(variance_classifier(d, 0.1) == 1);
  CHECK(variance_classifier(d, 0.2) == 0);
}

TEST_CASE("state type counting") {
  RealSpectrum s;
  s.energies = Eigen::VectorXd::LinSpaced(5, -1.0, -0.8);
  const std::vector<double> var = {0.1, 0.2, 0.05, 0.3, 0.17};
  const auto c = count_state_types(s, var, EnergyShell::line(-0.9, 0.2), 0.16);
  CHECK(c.integrable == 2);
  CHECK(c.chaotic == 3);
  CHECK(c.integrable_fraction() == doctest::Approx(0.4));
  CHECK_THROWS_AS(count_state_types(s, var, EnergyShell::line(0.0, 0.1), 0.16), EmptyShellError);
  const auto cls = variance_threshold_classifier(var, 0.16);
  CHECK(cls.apply(1) == 1);
  CHECK(cls.apply(2) == 0);
}
