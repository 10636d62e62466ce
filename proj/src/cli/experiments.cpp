#include "eigenshell/cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "eigenshell/billiard/billiard.hpp"
#include "eigenshell/core/eigensolver.hpp"
#include "eigenshell/phase/phase_space.hpp"
#include "eigenshell/rotor/kicked_rotor.hpp"
#include "eigenshell/top/coupled_top.hpp"
#include "eigenshell/xxz/xxz_chain.hpp"

namespace eigenshell::cli {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / (n - 1);
  return v;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + format_double(values[i]);
  return out;
}

void require(bool ok, const std::string& field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

void require_positive(const std::vector<double>& values, const std::string& field) {
  for (const double v : values) require(v > 0.0 && std::isfinite(v), field, "every value must be > 0");
}

void require_ascending(const std::vector<double>& values, const std::string& field) {
  require(std::is_sorted(values.begin(), values.end()), field, "values must be ascending");
}

std::ostream& log_stream(const RunOptions& options) { return options.log ? *options.log : std::clog; }

class Emitter {
 public:
  Emitter(const ExperimentConfig& config, const RunOptions& options, RunResult& result)
      : config_(config), options_(options), result_(result) {}

  CsvTable table(const std::string& figure, const std::string& units,
                 std::vector<std::string> columns) const {
    CsvTable t;
    t.metadata.emplace_back("experiment", config_.name());
    t.metadata.emplace_back("figure", figure);
    t.metadata.emplace_back("units", units);
    t.metadata.emplace_back("seed", std::to_string(options_.seed));
    for (const auto& [key, value] : config_.values()) t.metadata.emplace_back("config." + key, value);
    t.columns = std::move(columns);
    return t;
  }

  void write(const CsvTable& t, const std::string& file) {
    const auto path = options_.out_dir / file;
    t.write(path);
    result_.files.push_back(path);
  }

  void write_text(const std::string& text, const std::string& file) {
    const auto path = options_.out_dir / file;
    std::filesystem::create_directories(options_.out_dir);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
    result_.files.push_back(path);
  }

 private:
  const ExperimentConfig& config_;
  const RunOptions& options_;
  RunResult& result_;
};

std::optional<SpectrumCache> make_cache(const RunOptions& options) {
  if (!options.use_cache) return std::nullopt;
  return options.cache_root ? SpectrumCache(*options.cache_root) : SpectrumCache::from_environment();
}

template <class Spectrum, class Compute>
Spectrum cached(const std::string& canonical, const SpectrumCache* cache, bool* hit, std::ostream* log,
                Compute compute) {
  if (hit) *hit = false;
  const auto key = cache_key(canonical);
  if (cache != nullptr) {
    std::string warning;
    std::optional<Spectrum> loaded;
    if constexpr (std::is_same_v<Spectrum, RealSpectrum>) {
      loaded = cache->load_real(key, &warning);
    } else {
      loaded = cache->load_complex(key, &warning);
    }
    if (!warning.empty() && log) *log << "warning: " << warning << "; recomputing\n";
    if (loaded) {
      if (hit) *hit = true;
      if (log) *log << "cache hit " << key.substr(0, 16) << " (" << canonical << ")\n";
      return *loaded;
    }
  }
  Spectrum spectrum = compute();
  if (cache != nullptr) {
    cache->store(key, spectrum);
    if (log) *log << "cache store " << key.substr(0, 16) << " (" << canonical << ")\n";
  }
  return spectrum;
}

// ---------------------------------------------------------------- billiard

const std::set<std::string> kBilliardKeys = {
    "model.k_c", "model.R0", "plateau.dk", "plateau.width_convention", "classifier.R_b",
    "curve.dk", "curve.width_convention", "curve.points", "count.dk", "count.width_convention",
    "scaling.w", "scaling.dk"};

billiard::WidthConvention convention(const ExperimentConfig& c, const std::string& key,
                                     const std::string& fallback) {
  const auto v = c.get_string(key, fallback);
  if (v == "half") return billiard::WidthConvention::kHalf;
  if (v == "full") return billiard::WidthConvention::kFull;
  throw ConfigError(key, "expected 'half' or 'full', got '" + v + "'");
}

void validate_billiard(const ExperimentConfig& c) {
  c.require_known(kBilliardKeys);
  const double k_c = c.get_double("model.k_c", 515);
  const double R0 = c.get_double("model.R0", 1);
  require(k_c > 0, "model.k_c", "must be > 0");
  require(R0 > 0, "model.R0", "must be > 0");
  require(k_c * R0 <= 9000, "model.k_c", "k_c * R0 exceeds the Bessel range");
  const auto dks = c.get_doubles("plateau.dk", {1, 2, 5});
  require_positive(dks, "plateau.dk");
  for (const auto& key : {"plateau.width_convention", "curve.width_convention", "count.width_convention"}) {
    convention(c, key, "half");
  }
  const double R_b = c.get_double("classifier.R_b", 0.5 * R0);
  require(R_b > 0 && R_b <= R0, "classifier.R_b", "must lie in (0, R0]");
  require(c.get_double("curve.dk", 5) > 0, "curve.dk", "must be > 0");
  require(c.get_int("curve.points", 50) >= 2, "curve.points", "must be >= 2");
  require(c.get_double("count.dk", 0.2) > 0, "count.dk", "must be > 0");
  require(c.get_double("scaling.dk", 1) > 0, "scaling.dk", "must be > 0");
  for (const double w : c.get_doubles("scaling.w", {1.5, 2, 3})) require(w >= 1, "scaling.w", "must be >= 1");
  for (const double dk : dks) require(k_c - dk > 0, "plateau.dk", "shell reaches k <= 0");
}

void run_billiard(const ExperimentConfig& c, Emitter& emit) {
  const double k_c = c.get_double("model.k_c", 515);
  const double R0 = c.get_double("model.R0", 1);
  const double R_b = c.get_double("classifier.R_b", 0.5 * R0);
  const std::string units = "k in 1/length, E = k^2/2 (hbar = M = 1), radii in units of length";

  auto plateau = emit.table("billiard ratio versus shell width", units,
                            {"dk", "f", "states", "levels", "g"});
  const auto plateau_conv = convention(c, "plateau.width_convention", "half");
  for (const double dk : c.get_doubles("plateau.dk", {1, 2, 5})) {
    const auto modes = billiard::enumerate_shell(k_c, dk, R0, plateau_conv);
    plateau.add_row({format_double(dk), format_double(billiard::blank_fraction(modes, R_b)),
                     std::to_string(modes.size()), std::to_string(billiard::level_count(modes)),
                     format_double(billiard::g_classical(R_b, R0))});
  }
  emit.write(plateau, "billiard_ratio_vs_width.csv");

  const auto curve_modes = billiard::enumerate_shell(k_c, c.get_double("curve.dk", 5), R0,
                                                     convention(c, "curve.width_convention", "half"));
  const auto points = static_cast<std::size_t>(c.get_int("curve.points", 50));
  std::vector<double> grid;
  for (std::size_t i = 1; i <= points; ++i) grid.push_back(R0 * static_cast<double>(i) / points);
  const auto curve = billiard::f_curve_vs_Rb(curve_modes, grid);
  auto curve_table = emit.table("billiard ratio versus blank radius with classical overlay", units,
                                {"R_b", "f", "g", "population"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    curve_table.add_row({format_double(grid[i]), format_double(curve.curve.samples[i].f),
                         format_double(curve.g[i]), std::to_string(curve.curve.samples[i].population)});
  }
  emit.write(curve_table, "billiard_ratio_vs_blank_radius.csv");

  const auto count_modes = billiard::enumerate_shell(k_c, c.get_double("count.dk", 0.2), R0,
                                                     convention(c, "count.width_convention", "full"));
  auto modes_table = emit.table("billiard modes of the narrow shell", units, {"m", "n", "k", "E", "blank_radius"});
  for (const auto& mode : count_modes) {
    modes_table.add_row({std::to_string(mode.m), std::to_string(mode.n), format_double(mode.k),
                         format_double(mode.energy()), format_double(billiard::blank_radius(mode))});
  }
  modes_table.metadata.emplace_back("states", std::to_string(count_modes.size()));
  modes_table.metadata.emplace_back("levels", std::to_string(billiard::level_count(count_modes)));
  emit.write(modes_table, "billiard_shell_modes.csv");

  auto scaling = emit.table("billiard Planck-constant scaling of shells", units,
                            {"w", "population_scaled", "population_reference", "sets_equal", "f_scaled",
                             "f_reference"});
  for (const double w : c.get_doubles("scaling.w", {1.5, 2, 3})) {
    const auto r = billiard::hbar_scaling_check(k_c, c.get_double("scaling.dk", 1), w, R_b, R0);
    scaling.add_row({format_double(w), std::to_string(r.population_scaled),
                     std::to_string(r.population_reference), r.sets_equal ? "1" : "0",
                     format_double(r.f_scaled), format_double(r.f_reference)});
  }
  emit.write(scaling, "billiard_hbar_scaling.csv");
}

// ------------------------------------------------------------- coupled top

const std::set<std::string> kTopKeys = {"model.L", "model.mu", "solver.lower", "solver.upper",
                                        "shell.center", "shell.widths", "classifier.delta",
                                        "output.sections"};

void validate_top(const ExperimentConfig& c) {
  c.require_known(kTopKeys);
  const long L = c.get_int("model.L", 11);
  require(L >= 3 && L % 2 == 1, "model.L", "must be an odd integer >= 3");
  require(static_cast<std::size_t>(L * L * L * L) <= top::kMaxTopDimension, "model.L",
          "dimension L^4 exceeds the desk-scale cap");
  const double lower = c.get_double("solver.lower", -1.0);
  const double upper = c.get_double("solver.upper", -0.8);
  require(lower < upper, "solver.upper", "must exceed solver.lower");
  const double center = c.get_double("shell.center", -0.9);
  const auto widths = c.get_doubles("shell.widths", {0.04, 0.1, 0.2});
  require_positive(widths, "shell.widths");
  require_ascending(widths, "shell.widths");
  for (const double w : widths) {
    require(center - 0.5 * w >= lower && center + 0.5 * w <= upper, "shell.widths",
            "every shell must lie inside [solver.lower, solver.upper]");
  }
  require(c.get_double("classifier.delta", 0.16) >= 0, "classifier.delta", "must be >= 0");
  require(c.get_int("output.sections", 5) >= 0, "output.sections", "must be >= 0");
}

void run_top(const ExperimentConfig& c, const RunOptions& options, Emitter& emit, RunResult& result) {
  const int L = static_cast<int>(c.get_int("model.L", 11));
  const double j = (L * L - 1) / 2.0;
  const double mu = c.get_double("model.mu", 0.5);
  const double delta = c.get_double("classifier.delta", 0.16);
  const double center = c.get_double("shell.center", -0.9);
  const auto cache = make_cache(options);
  const auto spectrum = top_window_spectrum(j, mu, c.get_double("solver.lower", -1.0),
                                            c.get_double("solver.upper", -0.8),
                                            cache ? &*cache : nullptr, &result.cache_hit, &log_stream(options));
  const top::TopBasis basis(L);
  const auto variances = top::state_variances(spectrum, basis, mu);
  const std::string units = "energies E/J (dimensionless), momenta P = Lz/J";

  auto states = emit.table("coupled-top section variances of eigenstates", units, {"index", "E", "variance", "class"});
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    states.add_row({std::to_string(k), format_double(spectrum.energies(static_cast<Eigen::Index>(k))),
                    format_double(variances[k]), variances[k] >= delta ? "1" : "0"});
  }
  emit.write(states, "top_states.csv");

  const auto widths = c.get_doubles("shell.widths", {0.04, 0.1, 0.2});
  const auto classifier = top::variance_threshold_classifier(variances, delta);
  auto curve = ratio_curve(spectrum.energy_span(), classifier, center, widths);
  auto ratio = emit.table("coupled-top ratio versus shell width", units,
                          {"delta_E", "f_chaotic", "f_integrable", "population", "N_I", "N_C"});
  for (const auto& s : curve.samples) {
    const auto count = top::count_state_types(spectrum, variances, EnergyShell::line(center, s.parameter), delta);
    ratio.add_row({format_double(s.parameter), format_double(s.f), format_double(1.0 - s.f),
                   std::to_string(s.population), std::to_string(count.integrable), std::to_string(count.chaotic)});
  }
  emit.write(ratio, "top_ratio_vs_width.csv");

  // Section densities of the states closest to the centre.
  const auto sections = static_cast<std::size_t>(c.get_int("output.sections", 5));
  std::vector<std::size_t> order(spectrum.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(spectrum.energies(static_cast<Eigen::Index>(a)) - center) <
           std::abs(spectrum.energies(static_cast<Eigen::Index>(b)) - center);
  });
  order.resize(std::min(sections, order.size()));
  std::sort(order.begin(), order.end());
  auto dens = emit.table("coupled-top quantum Poincare sections at Q1 = pi", units, {"index", "E", "P1", "P2", "Q2", "rho"});
  for (const auto k : order) {
    const auto col = static_cast<Eigen::Index>(k);
    const auto d = top::husimi_section(spectrum.states.col(col), basis, spectrum.energies(col), mu);
    for (std::size_t a = 0; a < d.P1.size(); ++a) {
      for (std::size_t b = 0; b < d.P2.size(); ++b) {
        if (!d.admissible(a, b)) continue;
        dens.add_row({std::to_string(k), format_double(d.energy), format_double(d.P1[a]), format_double(d.P2[b]),
                      format_double(d.Q2(a, b)), format_double(d.rho(a, b))});
      }
    }
  }
  emit.write(dens, "top_sections.csv");
}

// -------------------------------------------------------------- top volume

const std::set<std::string> kVolumeKeys = {"model.energy", "model.mu", "grid.dP", "grid.partition",
                                           "grid.subdivisions", "lyapunov.T", "lyapunov.lambda_star", "integrator.h",
                                           "painting.batch", "section.T"};

void validate_volume(const ExperimentConfig& c) {
  c.require_known(kVolumeKeys);
  const double mu = c.get_double("model.mu", 0.5);
  const double E = c.get_double("model.energy", -0.9);
  require(std::abs(E) <= 2 + std::abs(mu), "model.energy", "outside the attainable range [-(2+mu), 2+mu]");
  const double dP = c.get_double("grid.dP", 0.02);
  require(dP > 0 && dP <= 0.02, "grid.dP", "must lie in (0, 0.02]");
  require(c.get_int("grid.subdivisions", 16) >= 1, "grid.subdivisions", "must be >= 1");
  const auto partition = c.get_doubles("grid.partition", phase::default_partition());
  require(partition.size() >= 2, "grid.partition", "needs at least two nodes");
  require_ascending(partition, "grid.partition");
  require(partition.front() >= 0 && partition.back() <= kTwoPi, "grid.partition", "must lie in [0, 2pi]");
  require(c.get_double("lyapunov.T", phase::kLyapunovTime) > 0, "lyapunov.T", "must be > 0");
  require(c.get_double("lyapunov.lambda_star", phase::kLyapunovThreshold) > 0, "lyapunov.lambda_star", "must be > 0");
  require(c.get_double("integrator.h", 1e-3) > 0, "integrator.h", "must be > 0");
  require(c.get_int("painting.batch", 8) >= 1, "painting.batch", "must be >= 1");
  require(c.get_double("section.T", 2000) >= 0, "section.T", "must be >= 0");
}

void run_volume(const ExperimentConfig& c, const RunOptions& options, Emitter& emit) {
  phase::VolumeOptions opt;
  opt.energy = c.get_double("model.energy", -0.9);
  opt.mu = c.get_double("model.mu", 0.5);
  opt.dP = c.get_double("grid.dP", 0.02);
  opt.partition = c.get_doubles("grid.partition", phase::default_partition());
  opt.subdivisions = c.get_int("grid.subdivisions", 16);
  opt.lyapunov_time = c.get_double("lyapunov.T", phase::kLyapunovTime);
  opt.lambda_star = c.get_double("lyapunov.lambda_star", phase::kLyapunovThreshold);
  opt.h = c.get_double("integrator.h", 1e-3);
  opt.batch = static_cast<std::size_t>(c.get_int("painting.batch", 8));
  opt.threads = options.threads;
  std::size_t next_log = 0;
  opt.progress = [&](std::size_t traj, std::size_t labelled, std::size_t admissible) {
    if (traj < next_log) return;
    next_log = traj + 200;
    log_stream(options) << "painting: " << traj << " trajectories, " << labelled << "/" << admissible
                        << " cells labelled\n";
  };
  const auto report = phase::hyperarea(opt);
  const std::string units = "hyperarea in (rad x normalized momentum^2) units";

  auto planes = emit.table("coupled-top section areas versus Q1", units,
                           {"Q1", "A_total", "A_island", "admissible_cells", "island_cells", "sea_cells",
                            "unlabelable_cells", "excluded_cells", "samples", "excluded_samples"});
  for (const auto& p : report.planes) {
    planes.add_row({format_double(p.Q1), format_double(p.total), format_double(p.island),
                    std::to_string(p.admissible_cells), std::to_string(p.island_cells), std::to_string(p.sea_cells),
                    std::to_string(p.unlabelable_cells), std::to_string(p.excluded_cells),
                    std::to_string(p.samples), std::to_string(p.excluded_samples)});
  }
  emit.write(planes, "volume_planes.csv");

  std::ostringstream text;
  text << "energy: " << format_double(opt.energy) << '\n'
       << "mu: " << format_double(opt.mu) << '\n'
       << "partition: " << join(opt.partition) << '\n'
       << "grid_dP: " << format_double(opt.dP) << '\n'
       << "subdivisions: " << opt.subdivisions << '\n'
       << "lyapunov_T: " << format_double(opt.lyapunov_time) << '\n'
       << "lambda_star: " << format_double(opt.lambda_star) << '\n'
       << "V_total: " << format_double(report.V_total) << '\n'
       << "V_island: " << format_double(report.V_island) << '\n'
       << "ratio: " << format_double(report.ratio) << '\n'
       << "excluded_measure: " << format_double(report.excluded_measure) << '\n'
       << "trajectories: " << report.trajectories << '\n'
       << "island_trajectories: " << report.island_trajectories << '\n';
  emit.write_text(text.str(), "volume_report.txt");

  const double section_T = c.get_double("section.T", 2000);
  if (section_T > 0) {
    const auto x0 = phase::random_energy_seed(opt.energy, opt.mu, options.seed);
    const auto cloud = phase::poincare_section(x0, opt.mu, section_T, opt.h);
    auto t = emit.table("coupled-top classical Poincare section at Q1 = pi, sin Q2 > 0", units, {"P1", "P2"});
    t.metadata.emplace_back("crossings", std::to_string(cloud.crossings()));
    t.metadata.emplace_back("few_crossings", cloud.few_crossings ? "1" : "0");
    for (const auto& p : cloud.points) t.add_numeric_row({p[0], p[1]});
    emit.write(t, "section_cloud.csv");
  }
}

// ------------------------------------------------------------ kicked rotor

const std::set<std::string> kRotorKeys = {"model.m", "model.K", "shell.center", "shell.widths",
                                          "classifier.threshold", "hbar.m_list", "hbar.width",
                                          "entropy.width", "entropy.centers", "population.widths",
                                          "orbits.count", "orbits.length"};

std::vector<double> default_rotor_widths() { return linspace(1.0, kTwoPi, 12); }
std::vector<double> default_population_widths() { return linspace(0.2, kTwoPi, 32); }

void validate_rotor(const ExperimentConfig& c) {
  c.require_known(kRotorKeys);
  const long m = c.get_int("model.m", 40);
  require(m >= 8 && m <= 128, "model.m", "must lie in [8, 128]");
  for (const long mm : c.get_ints("hbar.m_list", {20, 28, 40})) {
    require(mm >= 8 && mm <= 128, "hbar.m_list", "every m must lie in [8, 128]");
  }
  for (const auto& key : {"shell.widths", "population.widths"}) {
    const auto w = c.get_doubles(key, {1.0});
    require_positive(w, key);
    require_ascending(w, key);
    for (const double v : w) require(v <= kTwoPi + 1e-12, key, "circular widths must be <= 2pi");
  }
  for (const auto& key : {"hbar.width", "entropy.width"}) {
    const double w = c.get_double(key, 1.0);
    require(w > 0 && w <= kTwoPi + 1e-12, key, "must lie in (0, 2pi]");
  }
  require(c.get_int("entropy.centers", 32) >= 1, "entropy.centers", "must be >= 1");
  require(c.get_int("orbits.count", 20) >= 0, "orbits.count", "must be >= 0");
  require(c.get_int("orbits.length", 500) >= 0, "orbits.length", "must be >= 0");
}

void run_rotor(const ExperimentConfig& c, const RunOptions& options, Emitter& emit, RunResult& result) {
  const int m = static_cast<int>(c.get_int("model.m", 40));
  const double K = c.get_double("model.K", 1.1);
  const double center = c.get_double("shell.center", 0.0);
  const double threshold = c.get_double("classifier.threshold", 0.8 * std::numbers::pi);
  const auto cache = make_cache(options);
  const SpectrumCache* cache_ptr = cache ? &*cache : nullptr;
  const std::string units = "pseudo-energies in [0, 2pi), widths W in radians";

  auto solve = [&](int mm, bool* hit) {
    rotor::FloquetSpectrum f;
    f.m = mm;
    f.K = K;
    f.spectrum = floquet_spectrum(mm, K, cache_ptr, hit, &log_stream(options));
    return f;
  };
  const auto floquet = solve(m, &result.cache_hit);
  const auto widths = rotor::state_widths(floquet);

  auto states = emit.table("kicked-rotor Floquet state widths", units, {"E", "W", "class"});
  for (std::size_t k = 0; k < widths.size(); ++k) {
    states.add_row({format_double(floquet.spectrum.energies(static_cast<Eigen::Index>(k))), format_double(widths[k]),
                    widths[k] > threshold ? "1" : "0"});
  }
  emit.write(states, "rotor_states.csv");

  const auto classifier = rotor::width_classifier(widths, threshold);
  auto curve = ratio_curve(floquet.spectrum.energy_span(), classifier, center,
                           c.get_doubles("shell.widths", default_rotor_widths()), Topology::kCircle);
  curve.metadata = emit.table("kicked-rotor ratio versus shell width", units, {}).metadata;
  emit.write(ratio_curve_table(curve), "rotor_ratio_vs_width.csv");

  auto hbar = emit.table("kicked-rotor ratio versus effective Planck constant", units, {"m", "hbar_eff", "f", "population"});
  const double hbar_width = c.get_double("hbar.width", 2.0);
  for (const long mm : c.get_ints("hbar.m_list", {20, 28, 40})) {
    const auto f = mm == m ? floquet : solve(static_cast<int>(mm), nullptr);
    const auto w = mm == m ? widths : rotor::state_widths(f);
    const auto r = ratio_f(f.spectrum.energy_span(), EnergyShell::circle(center, hbar_width),
                           rotor::width_classifier(w, threshold));
    hbar.add_row({std::to_string(mm), format_double(kTwoPi / (mm * mm)), format_double(r.f), std::to_string(r.population)});
  }
  emit.write(hbar, "rotor_ratio_vs_hbar.csv");

  auto population = emit.table("kicked-rotor shell population versus width", units, {"delta_E", "population"});
  for (const double w : c.get_doubles("population.widths", default_population_widths())) {
    population.add_row({format_double(w), std::to_string(shell_select(floquet.spectrum.energy_span(),
                                                                      EnergyShell::circle(center, w)).size())});
  }
  emit.write(population, "rotor_population.csv");

  const auto n_centers = static_cast<std::size_t>(c.get_int("entropy.centers", 32));
  std::vector<double> centers(n_centers);
  for (std::size_t i = 0; i < n_centers; ++i) centers[i] = kTwoPi * static_cast<double>(i) / n_centers;
  const auto gamma = rotor::entropy_vs_center(floquet, c.get_double("entropy.width", 0.4), centers);
  auto entropy = emit.table("kicked-rotor shell entropy versus centre", units, {"E_c", "Gamma"});
  for (std::size_t i = 0; i < n_centers; ++i) entropy.add_numeric_row({centers[i], gamma[i]});
  emit.write(entropy, "rotor_entropy.csv");

  const auto n_orbits = static_cast<std::size_t>(c.get_int("orbits.count", 20));
  const auto length = static_cast<std::size_t>(c.get_int("orbits.length", 500));
  if (n_orbits > 0) {
    auto orbits = emit.table("classical standard-map orbits", units, {"orbit", "q", "p"});
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (std::size_t o = 0; o < n_orbits; ++o) {
      const double q0 = angle(rng);
      const double p0 = angle(rng);
      for (const auto& [q, p] : rotor::chirikov_orbit(q0, p0, K, length)) {
        orbits.add_row({std::to_string(o), format_double(q), format_double(p)});
      }
    }
    emit.write(orbits, "rotor_orbits.csv");
  }
}

// --------------------------------------------------------------------- xxz

const std::set<std::string> kXxzKeys = {"model.N", "model.rho", "shell.center", "shell.widths",
                                        "classifier.thresholds"};

void validate_xxz(const ExperimentConfig& c) {
  c.require_known(kXxzKeys);
  const long N = c.get_int("model.N", 12);
  require(N >= 2 && N <= xxz::kMaxSites, "model.N", "must lie in [2, 14]");
  const auto widths = c.get_doubles("shell.widths", xxz::default_width_grid());
  require_positive(widths, "shell.widths");
  require_ascending(widths, "shell.widths");
  if (c.has("classifier.thresholds")) {
    require(c.get_doubles("classifier.thresholds", {}).size() == xxz::kFeatureCount, "classifier.thresholds",
            "needs exactly five values");
  }
}

void run_xxz(const ExperimentConfig& c, const RunOptions& options, Emitter& emit, RunResult& result) {
  xxz::ChainSpec spec{static_cast<int>(c.get_int("model.N", 12)), c.get_double("model.rho", 0.4)};
  const double center = c.get_double("shell.center", 4.0);
  const auto cache = make_cache(options);
  auto analysis = xxz::analyze_spectrum(
      spec, xxz_spectrum(spec.N, spec.rho, cache ? &*cache : nullptr, &result.cache_hit, &log_stream(options)));
  if (!(center >= analysis.spectrum.energies(0) &&
        center <= analysis.spectrum.energies(analysis.spectrum.energies.size() - 1))) {
    throw ConfigError("shell.center", "outside the spectrum range");
  }
  auto thresholds = analysis.medians;
  if (c.has("classifier.thresholds")) {
    const auto t = c.get_doubles("classifier.thresholds", {});
    std::copy(t.begin(), t.end(), thresholds.begin());
  }
  const std::string units = "energies in coupling units";

  std::vector<std::string> columns = {"E"};
  for (const auto& n : xxz::feature_names()) columns.push_back(n);
  columns.push_back("degenerate");
  auto states = emit.table("XXZ eigenstate features", units, columns);
  for (std::size_t k = 0; k < analysis.features.size(); ++k) {
    std::vector<std::string> row = {format_double(analysis.spectrum.energies(static_cast<Eigen::Index>(k)))};
    for (const double v : analysis.features[k]) row.push_back(format_double(v));
    row.push_back(analysis.degenerate[k] ? "1" : "0");
    states.add_row(std::move(row));
  }
  emit.write(states, "xxz_states.csv");

  const auto widths = c.get_doubles("shell.widths", xxz::default_width_grid());
  const auto suite = xxz::xxz_ratio_suite(analysis, center, widths, thresholds);
  std::vector<std::string> curve_columns = {"delta_E"};
  for (const auto& n : xxz::feature_names()) curve_columns.push_back("f_" + n);
  curve_columns.push_back("population");
  auto curves = emit.table("XXZ ratio curves for five classifiers and shell population", units, curve_columns);
  for (std::size_t f = 0; f < xxz::kFeatureCount; ++f) {
    curves.metadata.emplace_back("threshold." + xxz::feature_names()[f], format_double(thresholds[f]));
  }
  for (std::size_t i = 0; i < widths.size(); ++i) {
    std::vector<std::string> row = {format_double(widths[i])};
    for (std::size_t f = 0; f < xxz::kFeatureCount; ++f) row.push_back(format_double(suite.curves[f].samples[i].f));
    row.push_back(std::to_string(suite.population[i]));
    curves.add_row(std::move(row));
  }
  emit.write(curves, "xxz_ratio_curves.csv");
}

}  // namespace

RealSpectrum top_window_spectrum(double j, double mu, double lower, double upper, const SpectrumCache* cache,
                                 bool* hit, std::ostream* log) {
  const std::string canonical = "coupled-top;frame=section;j=" + format_double(j) + ";mu=" + format_double(mu) +
                                ";window=" + format_double(lower) + "," + format_double(upper);
  return cached<RealSpectrum>(canonical, cache, hit, log, [&] { return top::solve_top_window(j, mu, lower, upper); });
}

ComplexSpectrum floquet_spectrum(int m, double K, const SpectrumCache* cache, bool* hit, std::ostream* log) {
  const std::string canonical = "kicked-rotor;m=" + std::to_string(m) + ";K=" + format_double(K);
  return cached<ComplexSpectrum>(canonical, cache, hit, log, [&] { return rotor::solve_floquet(m, K).spectrum; });
}

RealSpectrum xxz_spectrum(int N, double rho, const SpectrumCache* cache, bool* hit, std::ostream* log) {
  const std::string canonical = "xxz;N=" + std::to_string(N) + ";rho=" + format_double(rho);
  return cached<RealSpectrum>(canonical, cache, hit, log,
                              [&] { return eig_hermitian(xxz::build_xxz({N, rho})); });
}

void validate(const ExperimentConfig& config) {
  const auto& name = config.name();
  if (name == "billiard") return validate_billiard(config);
  if (name == "coupled-top") return validate_top(config);
  if (name == "top-volume") return validate_volume(config);
  if (name == "kicked-rotor") return validate_rotor(config);
  if (name == "xxz") return validate_xxz(config);
  throw ConfigError("experiment.name", "unknown experiment '" + name + "'");
}

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  RunResult result;
  Emitter emit(config, options, result);
  const auto& name = config.name();
  if (name == "billiard") run_billiard(config, emit);
  if (name == "coupled-top") run_top(config, options, emit, result);
  if (name == "top-volume") run_volume(config, options, emit);
  if (name == "kicked-rotor") run_rotor(config, options, emit, result);
  if (name == "xxz") run_xxz(config, options, emit, result);
  return result;
}

}  // namespace eigenshell::cli
