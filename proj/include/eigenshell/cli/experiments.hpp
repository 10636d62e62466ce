#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eigenshell/cli/config.hpp"
#include "eigenshell/core/io.hpp"
#include "eigenshell/core/spectrum.hpp"

namespace eigenshell::cli {

struct RunOptions {
  std::filesystem::path out_dir = "out";
  std::uint64_t seed = 1;
  bool use_cache = true;
  unsigned threads = 1;
  std::optional<std::filesystem::path> cache_root;  ///< overrides EIGENSHELL_CACHE
  std::ostream* log = nullptr;
};

struct RunResult {
  std::vector<std::filesystem::path> files;
  bool cache_hit = false;
};

/// Checks every field against the target module's preconditions without
/// computing anything. Throws ConfigError.
void validate(const ExperimentConfig& config);

/// validate() followed by the experiment; writes CSV/text artifacts into
/// options.out_dir.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options);

/// Spectrum lookups shared by the CLI and the acceptance runner. When `cache`
/// is null the spectrum is always recomputed. `hit` reports a cache hit.
RealSpectrum top_window_spectrum(double j, double mu, double lower, double upper,
                                 const SpectrumCache* cache, bool* hit = nullptr,
                                 std::ostream* log = nullptr);
ComplexSpectrum floquet_spectrum(int m, double K, const SpectrumCache* cache, bool* hit = nullptr,
                                 std::ostream* log = nullptr);
RealSpectrum xxz_spectrum(int N, double rho, const SpectrumCache* cache, bool* hit = nullptr,
                          std::ostream* log = nullptr);

}  // namespace eigenshell::cli
