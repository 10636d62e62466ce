// Acceptance runner: one PASS/FAIL line per criterion.
//
//   acceptance [--cache DIR] [--only 1,2,...] [--known-failure N]...
//
// A criterion listed with --known-failure still prints FAIL when it fails but
// does not set the exit status.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "eigenshell/billiard/billiard.hpp"
#include "eigenshell/cli/experiments.hpp"
#include "eigenshell/core/eigensolver.hpp"
#include "eigenshell/core/io.hpp"
#include "eigenshell/core/shell.hpp"
#include "eigenshell/phase/phase_space.hpp"
#include "eigenshell/rotor/kicked_rotor.hpp"
#include "eigenshell/top/coupled_top.hpp"
#include "eigenshell/xxz/xxz_chain.hpp"

using namespace eigenshell;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

class Runner {
 public:
  Runner(std::optional<SpectrumCache> cache, std::set<int> only, std::set<int> known)
      : cache_(std::move(cache)), only_(std::move(only)), known_(std::move(known)) {}

  void run(int id, const std::string& title, const std::function<Outcome()>& body) {
    if (!only_.empty() && only_.count(id) == 0) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool known = known_.count(id) > 0;
    std::cout << "criterion " << id << " [" << title << "]: " << (o.pass ? "PASS" : "FAIL")
              << (!o.pass && known ? " (known failure)" : "") << " | " << o.detail << " | " << fmt(secs, 3)
              << " s" << std::endl;
    if (!o.pass && !known) failed_ = true;
  }

  const SpectrumCache* cache() const { return cache_ ? &*cache_ : nullptr; }
  bool failed() const { return failed_; }

 private:
  std::optional<SpectrumCache> cache_;
  std::set<int> only_;
  std::set<int> known_;
  bool failed_ = false;
};

// ------------------------------------------------------------------ billiard

Outcome billiard_plateau() {
  std::string detail;
  bool pass = true;
  for (const double dk : {1.0, 2.0, 5.0}) {
    const auto modes = billiard::enumerate_shell(515.0, dk, 1.0, billiard::WidthConvention::kHalf);
    const double f = billiard::blank_fraction(modes, 0.5);
    pass = pass && std::abs(f - 0.61) <= 0.02;
    detail += "f(dk=" + fmt(dk) + ")=" + fmt(f) + " ";
  }
  return {pass, detail + "(half-width shells, target 0.61 +- 0.02)"};
}

double g_oracle(double R_b) {
  using boost::math::quadrature::gauss_kronrod;
  auto inner = [&](double r) {
    const double top = r <= R_b ? 0.5 * kPi : std::asin(R_b / r);
    return gauss_kronrod<double, 31>::integrate([](double) { return 1.0; }, 0.0, top, 5, 1e-14) / (0.5 * kPi);
  };
  auto outer = [&](double r) { return 2.0 * r * inner(r); };
  return gauss_kronrod<double, 61>::integrate(outer, 0.0, R_b, 10, 1e-14) +
         gauss_kronrod<double, 61>::integrate(outer, R_b, 1.0, 10, 1e-14);
}

Outcome billiard_curve() {
  const auto modes = billiard::enumerate_shell(515.0, 5.0, 1.0, billiard::WidthConvention::kHalf);
  std::vector<double> grid;
  for (int i = 1; i <= 50; ++i) grid.push_back(i / 50.0);
  const auto c = billiard::f_curve_vs_Rb(modes, grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(c.curve.samples[i].f - c.g[i]));
  const double g_half = billiard::g_classical(0.5);
  const double oracle = g_oracle(0.5);
  const bool pass = worst <= 0.03 && std::abs(g_half - 0.60900) <= 1e-4 && std::abs(g_half - oracle) <= 1e-4;
  return {pass, "max|f-g|=" + fmt(worst) + " (<= 0.03), g(1/2)=" + fmt(g_half, 10) + " oracle=" + fmt(oracle, 10)};
}

Outcome billiard_count() {
  const auto modes = billiard::enumerate_shell(515.0, 0.2, 1.0, billiard::WidthConvention::kFull);
  const auto levels = billiard::level_count(modes);
  return {levels == 28, std::to_string(levels) + " levels (" + std::to_string(modes.size()) +
                            " states counting +-m) in the full-width shell [514.9, 515.1]; convention: levels"};
}

Outcome billiard_scaling() {
  bool pass = true;
  std::string detail;
  for (const double w : {1.5, 2.0, 3.0}) {
    const auto r = billiard::hbar_scaling_check(515.0, 1.0, w);
    pass = pass && r.sets_equal && r.population_scaled > 0;
    detail += "w=" + fmt(w) + ": " + std::to_string(r.population_scaled) + "/" +
              std::to_string(r.population_reference) + (r.sets_equal ? " equal " : " DIFFERENT ");
  }
  return {pass, detail};
}

// ------------------------------------------------------------- coupled top

struct TopRun {
  RealSpectrum spectrum;
  std::vector<double> variances;
};

TopRun top_run(int L, const SpectrumCache* cache) {
  const double j = (L * L - 1) / 2.0;
  TopRun r;
  r.spectrum = cli::top_window_spectrum(j, 0.5, -1.0, -0.8, cache);
  r.variances = top::state_variances(r.spectrum, top::TopBasis(L), 0.5);
  return r;
}

Outcome top_plateau(const std::vector<TopRun>& runs, const std::vector<int>& Ls) {
  bool pass = true;
  std::string detail;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto cls = top::variance_threshold_classifier(runs[i].variances, 0.16);
    double lo = 1.0, hi = 0.0;
    detail += "L=" + std::to_string(Ls[i]) + ": f=";
    for (const double w : {0.04, 0.1, 0.2}) {
      const double f = ratio_f(runs[i].spectrum.energy_span(), EnergyShell::line(-0.9, w), cls).f;
      lo = std::min(lo, f);
      hi = std::max(hi, f);
      detail += fmt(f) + " ";
    }
    detail += "spread " + fmt(hi - lo) + "; ";
    pass = pass && hi - lo <= 0.08;
  }
  return {pass, detail + "(<= 0.08)"};
}

// ------------------------------------------------------------ phase space

phase::VolumeReport volume_report(const SpectrumCache* cache) {
  phase::VolumeOptions opt;
  std::ostringstream key;
  key << "top-volume;E=" << format_double(opt.energy) << ";mu=" << format_double(opt.mu)
      << ";dP=" << format_double(opt.dP) << ";sub=" << opt.subdivisions << ";quad=fold-gauss10;T=" << format_double(opt.lyapunov_time)
      << ";lambda=" << format_double(opt.lambda_star) << ";h=" << format_double(opt.h);
  for (const double q : opt.partition) key << ";" << format_double(q);
  std::optional<fs::path> file;
  if (cache) {
    file = cache->root() / (cache_key(key.str()) + ".volume.json");
    if (fs::exists(*file)) {
      std::ifstream in(*file);
      const auto j = nlohmann::json::parse(in);
      phase::VolumeReport r;
      r.V_total = j.at("V_total");
      r.V_island = j.at("V_island");
      r.ratio = j.at("ratio");
      r.excluded_measure = j.at("excluded_measure");
      r.trajectories = j.at("trajectories");
      r.island_trajectories = j.at("island_trajectories");
      return r;
    }
  }
  const auto r = phase::hyperarea(opt);
  if (file) {
    fs::create_directories(file->parent_path());
    nlohmann::json j = {{"V_total", r.V_total},           {"V_island", r.V_island},
                        {"ratio", r.ratio},               {"excluded_measure", r.excluded_measure},
                        {"trajectories", r.trajectories}, {"island_trajectories", r.island_trajectories}};
    std::ofstream(*file) << j.dump(2) << '\n';
  }
  return r;
}

// Independent estimate of the surface hyperarea: uniform Monte Carlo in
// (P1, P2) on each plane with the analytic weight |grad H| / |dH/dQ2|, then
// the trapezoid rule over the same Q1 nodes.
double monte_carlo_area(double E, double mu, const std::vector<double>& planes, int samples) {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> area(planes.size(), 0.0);
  for (std::size_t p = 0; p < planes.size(); ++p) {
    double sum = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double P1 = u(rng), P2 = u(rng);
      const auto x = phase::project_to_energy(E, mu, planes[p], P1, P2);
      if (!x) continue;
      const double r1 = std::sqrt(1 - P1 * P1), r2 = std::sqrt(1 - P2 * P2);
      const double hq1 = -r1 * std::sin(x->Q1), hq2 = -r2 * std::sin(x->Q2);
      const double hp1 = -P1 * std::cos(x->Q1) / r1 + mu * P2;
      const double hp2 = -P2 * std::cos(x->Q2) / r2 + mu * P1;
      if (hq2 == 0.0) continue;
      sum += std::sqrt(hq1 * hq1 + hq2 * hq2 + hp1 * hp1 + hp2 * hp2) / std::abs(hq2);
    }
    area[p] = 4.0 * sum / samples;
  }
  double v = 0.0;
  for (std::size_t p = 0; p + 1 < planes.size(); ++p) v += 0.5 * (planes[p + 1] - planes[p]) * (area[p] + area[p + 1]);
  return v;
}

// ------------------------------------------------------------ kicked rotor

Outcome rotor_plateaus(const SpectrumCache* cache) {
  const double K = 1.1;
  const double threshold = 0.8 * kPi;
  auto load = [&](int m) {
    rotor::FloquetSpectrum f;
    f.m = m;
    f.K = K;
    f.spectrum = cli::floquet_spectrum(m, K, cache);
    return f;
  };
  const auto f40 = load(40);
  const auto w40 = rotor::state_widths(f40);
  const auto cls = rotor::width_classifier(w40, threshold);

  // (a) f over dE in [1, 2pi].
  double lo = 1, hi = 0;
  for (int i = 0; i < 12; ++i) {
    const double w = 1.0 + (2 * kPi - 1.0) * i / 11.0;
    const double f = ratio_f(f40.spectrum.energy_span(), EnergyShell::circle(0.0, w), cls).f;
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  const double spread_a = hi - lo;

  // (b) f at dE = 2 across m.
  lo = 1, hi = 0;
  for (const int m : {20, 28, 40}) {
    const auto f = m == 40 ? f40 : load(m);
    const auto w = m == 40 ? w40 : rotor::state_widths(f);
    const double r =
        ratio_f(f.spectrum.energy_span(), EnergyShell::circle(0.0, 2.0), rotor::width_classifier(w, threshold)).f;
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double spread_b = hi - lo;

  // (c) linear population.
  std::vector<double> x, y;
  for (int i = 0; i < 32; ++i) {
    const double w = 0.2 + (2 * kPi - 0.2) * i / 31.0;
    x.push_back(w);
    y.push_back(static_cast<double>(shell_select(f40.spectrum.energy_span(), EnergyShell::circle(0.0, w)).size()));
  }
  const auto fit = rotor::linear_fit(x, y);

  // (d) entropy across centres.
  std::vector<double> centers;
  for (int i = 0; i < 32; ++i) centers.push_back(2 * kPi * i / 32.0);
  const auto gamma = rotor::entropy_vs_center(f40, 0.4, centers);
  double mean = 0, var = 0;
  for (const double g : gamma) mean += g / 32.0;
  for (const double g : gamma) var += (g - mean) * (g - mean) / 32.0;
  const double sd = std::sqrt(var);

  const bool pass = spread_a <= 0.05 && spread_b <= 0.07 && fit.max_relative_residual <= 0.05 && sd <= 0.05;
  return {pass, "(a) spread " + fmt(spread_a) + " <= 0.05; (b) spread " + fmt(spread_b) + " <= 0.07; (c) residual " +
                    fmt(fit.max_relative_residual) + " <= 0.05; (d) std Gamma " + fmt(sd) + " <= 0.05 (mean " +
                    fmt(mean) + ")"};
}

// -------------------------------------------------------------------- xxz

Outcome xxz_contrast(const SpectrumCache* cache) {
  const xxz::ChainSpec spec{12, 0.4};
  const auto analysis = xxz::analyze_spectrum(spec, cli::xxz_spectrum(12, 0.4, cache));
  const auto widths = xxz::default_width_grid();
  const auto suite = xxz::xxz_ratio_suite(analysis, 4.0, widths, analysis.medians);
  const std::size_t half = widths.size() / 2;
  std::array<double, xxz::kFeatureCount> tv{};
  for (std::size_t k = 0; k < xxz::kFeatureCount; ++k) tv[k] = total_variation(suite.curves[k], half, widths.size());
  bool local_ok = true;
  double local_max = 0.0;
  std::string detail = "upper-half TV:";
  for (std::size_t k = 0; k < xxz::kFeatureCount; ++k) {
    detail += " " + xxz::feature_names()[k] + "=" + fmt(tv[k]);
    if (k == xxz::kGlobalX) continue;
    local_ok = local_ok && tv[k] <= 0.1;
    local_max = std::max(local_max, tv[k]);
  }
  const bool contrast = tv[xxz::kGlobalX] > local_max;
  detail += "; locals <= 0.1: " + std::string(local_ok ? "yes" : "no") +
            "; N_x exceeds every local: " + std::string(contrast ? "yes" : "no");
  return {local_ok && contrast, detail};
}

// --------------------------------------------------------------- properties

Outcome property_suites() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  };

  {  // eigensolver residual / reconstruction
    std::srand(5);
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(120, 120);
    a = 0.5 * (a + a.transpose()).eval();
    const auto s = eig_hermitian(Eigen::MatrixXd(a));
    expect(max_residual(a, s) <= 1e-10, "eigensolver residual");
    expect(orthonormality_defect(s) <= 1e-12, "eigensolver orthonormality");
    const Eigen::MatrixXd back = s.states * s.energies.asDiagonal() * s.states.transpose();
    expect((back - a).cwiseAbs().maxCoeff() <= 1e-11, "eigensolver reconstruction");
  }
  for (const int L : {1, 3, 5, 7, 9, 11}) {  // Planck completeness
    const auto c = top::TopBasis(L).cell_matrix();
    expect((c.adjoint() * c - Eigen::MatrixXcd::Identity(c.cols(), c.cols())).cwiseAbs().maxCoeff() <= 1e-12,
           "top Planck completeness L=" + std::to_string(L));
  }
  for (const int m : {20, 28, 40}) {
    const rotor::TorusBasis b(m);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(b.N());
    for (int a = 0; a < m; ++a) {
      for (int q = 0; q < m; ++q) total += b.cell(a, q).cwiseAbs2();
    }
    expect((total.array() - 1.0).abs().maxCoeff() <= 1e-12, "torus Planck completeness m=" + std::to_string(m));
  }
  {  // Chirikov: fixed points and unit Jacobian
    const auto [q, p] = rotor::chirikov_step(0.0, 0.0, 1.1);
    expect(q == 0.0 && p == 0.0, "standard map fixed point");
    const double e = 1e-6, K = 1.1, q0 = 1.3, p0 = 0.4;
    auto f = [&](double qq, double pp) {
      const double pn = pp + K * std::sin(qq);
      return std::pair{qq + pn, pn};
    };
    const auto [a1, b1] = f(q0 + e, p0);
    const auto [a0, b0] = f(q0 - e, p0);
    const auto [c1, d1] = f(q0, p0 + e);
    const auto [c0, d0] = f(q0, p0 - e);
    const double det = ((a1 - a0) * (d1 - d0) - (c1 - c0) * (b1 - b0)) / (4 * e * e);
    expect(std::abs(det - 1.0) <= 1e-8, "standard map Jacobian");
  }
  {  // EOM energy drift
    const auto x0 = phase::random_energy_seed(-0.9, 0.5, 1);
    const auto x = phase::evolve(x0, 0.5, 1e4);
    expect(std::abs(phase::energy(x, 0.5) - phase::energy(x0, 0.5)) <= 1e-6, "EOM energy drift");
  }
  {  // Gamma extremes
    expect(std::abs(rotor::gwvne_entropy(Eigen::MatrixXd::Constant(8, 8, 1.0 / 64)) - 1.0) <= 1e-12, "Gamma = 1");
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(8, 8);
    d(1, 1) = 1.0;
    expect(std::abs(rotor::gwvne_entropy(d)) <= 1e-12, "Gamma = 0");
  }
  {  // Renyi oracle
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (const int N : {2, 3, 4}) {
      for (int t = 0; t < 100; ++t) {
        Eigen::VectorXcd v(1 << N);
        for (auto& z : v) z = Complex(g(rng), g(rng));
        v /= v.norm();
        Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
        for (Eigen::Index r = 0; r < v.size() / 2; ++r) {
          for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) rho(a, b) += v(2 * r + a) * std::conj(v(2 * r + b));
          }
        }
        const double oracle = -std::log((rho * rho).trace().real());
        expect(std::abs(xxz::renyi2_first_spin(v) - oracle) <= 1e-10, "Renyi oracle");
      }
    }
  }
  for (int N = 2; N <= 6; ++N) {  // commutators
    const auto h = xxz::build_xxz({N, 0.4});
    const Eigen::MatrixXd mz = xxz::magnetization_diagonal(N).asDiagonal();
    const int d = 1 << N;
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) x(i ^ (d - 1), i) = 1.0;
    expect((h * mz - mz * h).norm() <= 1e-10, "[H, M_z]");
    expect((h * x - x * h).norm() <= 1e-10, "[H, prod sx]");
  }
  {  // ratio_f brute force
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 100; ++t) {
      const std::size_t n = 1 + rng() % 64;
      std::vector<double> e(n), feat(n);
      for (auto& v : e) v = u(rng);
      for (auto& v : feat) v = u(rng);
      std::size_t in = 0, hit = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (std::abs(e[k]) <= 0.5) {
          ++in;
          hit += feat[k] >= 0.0;
        }
      }
      if (in == 0) continue;
      const auto r = ratio_f(e, EnergyShell::line(0.0, 1.0), Classifier::from_values("x", feat, 0.0));
      expect(r.population == in && r.f == static_cast<double>(hit) / in, "ratio_f brute force");
    }
  }
  std::sort(failures.begin(), failures.end());
  failures.erase(std::unique(failures.begin(), failures.end()), failures.end());
  std::string detail = failures.empty() ? "all property checks hold" : "failed:";
  for (const auto& f : failures) detail += " " + f + ";";
  return {failures.empty(), detail};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::string cache_dir;
  std::vector<int> only;
  std::vector<int> known;
  app.add_option("--cache", cache_dir, "spectrum cache directory (none: recompute)");
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  app.add_option("--known-failure", known, "criteria whose failure does not set the exit status");
  CLI11_PARSE(app, argc, argv);

  std::optional<SpectrumCache> cache;
  if (!cache_dir.empty()) cache.emplace(cache_dir);
  Runner runner(std::move(cache), {only.begin(), only.end()}, {known.begin(), known.end()});
  const auto* c = runner.cache();

  runner.run(1, "billiard 61% plateau", billiard_plateau);
  runner.run(2, "billiard analytic curve", billiard_curve);
  runner.run(3, "billiard 28-state count", billiard_count);
  runner.run(4, "hbar scaling identity", billiard_scaling);

  std::vector<TopRun> tops;
  std::optional<phase::VolumeReport> volume;
  auto need_tops = [&] {
    if (tops.empty()) {
      tops.push_back(top_run(9, c));
      tops.push_back(top_run(11, c));
    }
  };
  auto need_volume = [&] {
    if (!volume) volume = volume_report(c);
  };
  runner.run(5, "coupled-top plateau", [&] {
    need_tops();
    return top_plateau(tops, {9, 11});
  });
  runner.run(6, "coupled-top quantum/classical fraction", [&] {
    need_tops();
    need_volume();
    const auto count = top::count_state_types(tops[1].spectrum, tops[1].variances,
                                              EnergyShell::line(-0.9, 0.1), 0.16);
    const double q = count.integrable_fraction();
    return Outcome{std::abs(q - volume->ratio) <= 0.08,
                   "L=11: N_I=" + std::to_string(count.integrable) + " N_C=" + std::to_string(count.chaotic) +
                       " N_I/(N_I+N_C)=" + fmt(q) + " vs V_I/V=" + fmt(volume->ratio) + ", |diff|=" +
                       fmt(std::abs(q - volume->ratio)) + " (<= 0.08)"};
  });
  runner.run(7, "hypersurface volume", [&] {
    need_volume();
    const double mc = monte_carlo_area(-0.9, 0.5, phase::default_partition(), 200000);
    const double total = volume->V_total + volume->excluded_measure;
    const double rel = std::abs(total - mc) / mc;
    const bool excluded_ok = volume->excluded_measure <= 0.02 * volume->V_total;
    return Outcome{std::abs(volume->ratio - 0.60) <= 0.04 && rel <= 0.03 && excluded_ok,
                   "V_I/V=" + fmt(volume->ratio) + " (0.60 +- 0.04); V=" + fmt(volume->V_total) + " + excluded " +
                       fmt(volume->excluded_measure) + " vs Monte Carlo " + fmt(mc) + ", rel " + fmt(rel) +
                       " (<= 0.03); " + std::to_string(volume->trajectories) + " trajectories"};
  });
  runner.run(8, "kicked-rotor plateaus", [&] { return rotor_plateaus(c); });
  runner.run(9, "XXZ contrast", [&] { return xxz_contrast(c); });
  runner.run(10, "property suites", property_suites);
  return runner.failed() ? 1 : 0;
}
