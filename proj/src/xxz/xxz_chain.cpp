#include "eigenshell/xxz/xxz_chain.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eigenshell/core/eigensolver.hpp"

namespace eigenshell::xxz {
namespace {

int sites_of(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) throw std::invalid_argument("state dimension is not a power of two");
  return std::countr_zero(static_cast<unsigned long long>(dim));
}

double spin_z(std::size_t s, int site) { return ((s >> (site - 1)) & 1U) ? -1.0 : 1.0; }

}  // namespace

Eigen::MatrixXd build_xxz(const ChainSpec& spec) {
  if (spec.N < 2 || spec.N > kMaxSites) throw std::invalid_argument("build_xxz: N must lie in [2, 14]");
  const std::size_t dim = std::size_t{1} << spec.N;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s) {
    for (int i = 1; i < spec.N; ++i) {
      const std::size_t mask = (std::size_t{1} << (i - 1)) | (std::size_t{1} << i);
      const bool parallel = spin_z(s, i) == spin_z(s, i + 1);
      const auto r = static_cast<Eigen::Index>(s);
      h(r, r) += parallel ? spec.rho : -spec.rho;
      if (!parallel) h(static_cast<Eigen::Index>(s ^ mask), r) += 2.0;
    }
  }
  return h;
}

Eigen::VectorXd magnetization_diagonal(int N) {
  const std::size_t dim = std::size_t{1} << N;
  Eigen::VectorXd mz(static_cast<Eigen::Index>(dim));
  for (std::size_t s = 0; s < dim; ++s) {
    mz(static_cast<Eigen::Index>(s)) = N - 2.0 * std::popcount(s);
  }
  return mz;
}

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {"sigma_z_mid", "M_z", "C34", "N_x",
                                                               "renyi2_site1"};
  return names;
}

double renyi2_first_spin(const Eigen::Ref<const Eigen::VectorXcd>& psi) {
  sites_of(psi.size());
  Complex r00 = 0.0, r11 = 0.0, r01 = 0.0;
  for (Eigen::Index rest = 0; rest < psi.size() / 2; ++rest) {
    const Complex up = psi(2 * rest);
    const Complex down = psi(2 * rest + 1);
    r00 += up * std::conj(up);
    r11 += down * std::conj(down);
    r01 += up * std::conj(down);
  }
  const double purity = std::norm(r00) + std::norm(r11) + 2.0 * std::norm(r01);
  return std::max(0.0, -std::log(purity));
}

std::array<double, kFeatureCount> feature_values(const Eigen::Ref<const Eigen::VectorXcd>& psi) {
  const int N = sites_of(psi.size());
  if (std::abs(psi.norm() - 1.0) > 1e-8) throw std::invalid_argument("feature_values: state is not normalized");
  const std::size_t dim = static_cast<std::size_t>(psi.size());
  const int mid = N / 2;
  const std::size_t all = dim - 1;
  const std::size_t mask34 = N >= 4 ? (std::size_t{1} << 2) | (std::size_t{1} << 3) : 0;
  double sz = 0.0, mz = 0.0;
  Complex c34 = 0.0, nx = 0.0;
  for (std::size_t s = 0; s < dim; ++s) {
    const Complex a = psi(static_cast<Eigen::Index>(s));
    const double p = std::norm(a);
    sz += spin_z(s, mid) * p;
    mz += (N - 2.0 * std::popcount(s)) * p;
    if (N >= 4) c34 += std::conj(psi(static_cast<Eigen::Index>(s ^ mask34))) * a;
    nx += std::conj(psi(static_cast<Eigen::Index>(s ^ all))) * a;
  }
  return {sz, mz, N >= 4 ? c34.real() : std::numeric_limits<double>::quiet_NaN(), nx.real(),
          renyi2_first_spin(psi)};
}

std::array<double, kFeatureCount> feature_values(const Eigen::Ref<const Eigen::VectorXd>& psi) {
  return feature_values(Eigen::VectorXcd(psi.cast<Complex>()));
}

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ChainAnalysis analyze_chain(const ChainSpec& spec) {
  return analyze_spectrum(spec, eig_hermitian(build_xxz(spec)));
}

ChainAnalysis analyze_spectrum(const ChainSpec& spec, RealSpectrum spectrum) {
  if (spectrum.states.rows() != (Eigen::Index{1} << spec.N) || !spectrum.has_states()) {
    throw std::invalid_argument("analyze_spectrum: spectrum does not match the chain");
  }
  ChainAnalysis out;
  out.spec = spec;
  out.spectrum = std::move(spectrum);
  const std::size_t n = out.spectrum.size();
  out.features.resize(n);
  out.degenerate.assign(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    out.features[k] = feature_values(Eigen::VectorXd(out.spectrum.states.col(static_cast<Eigen::Index>(k))));
    const auto& e = out.spectrum.energies;
    const auto i = static_cast<Eigen::Index>(k);
    if ((i > 0 && e(i) - e(i - 1) < 1e-10) || (i + 1 < e.size() && e(i + 1) - e(i) < 1e-10)) {
      out.degenerate[k] = true;
    }
  }
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    std::vector<double> column(n);
    for (std::size_t k = 0; k < n; ++k) column[k] = out.features[k][f];
    out.medians[f] = median(std::move(column));
  }
  return out;
}

RatioSuite xxz_ratio_suite(const ChainAnalysis& analysis, double center,
                           std::span<const double> widths,
                           const std::array<double, kFeatureCount>& thresholds) {
  RatioSuite suite;
  suite.thresholds = thresholds;
  const auto energies = analysis.spectrum.energy_span();
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    std::vector<double> column(analysis.features.size());
    for (std::size_t k = 0; k < column.size(); ++k) column[k] = analysis.features[k][f];
    const auto classifier =
        Classifier::from_values(feature_names()[f], std::move(column), thresholds[f], Rule::kAtLeast);
    suite.curves[f] = ratio_curve(energies, classifier, center, widths, Topology::kLine, EmptyPolicy::kMark);
  }
  for (const auto& s : suite.curves[0].samples) suite.population.push_back(s.population);
  return suite;
}

std::vector<double> default_width_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 20; ++i) grid.push_back(0.2 * i);
  return grid;
}

}  // namespace eigenshell::xxz
