#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace eigenshell::phase {

/// Canonical point of the classical coupled top, H/J = sqrt(1-P1^2) cos Q1 +
/// sqrt(1-P2^2) cos Q2 + mu P1 P2. Angles in [0, 2pi), |P_i| < 1.
struct PhasePoint {
  double Q1 = 0.0;
  double Q2 = 0.0;
  double P1 = 0.0;
  double P2 = 0.0;
};

/// Momenta closer to +-1 than this abort a trajectory.
inline constexpr double kPoleMargin = 1e-9;

class TrajectoryAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

double energy(const PhasePoint& x, double mu);

/// Time derivatives (dQ1, dQ2, dP1, dP2) of the canonical equations.
std::array<double, 4> eom_rhs(const PhasePoint& x, double mu);

/// One classical RK4 step of size h. Integration runs on the two unit spin
/// vectors, which is regular at the poles; the result is mapped back to
/// canonical coordinates. Throws TrajectoryAborted when a momentum reaches
/// the pole margin.
PhasePoint eom_step(const PhasePoint& x, double mu, double h);

/// Integrates for time T with step h.
PhasePoint evolve(const PhasePoint& x, double mu, double T, double h = 1e-3);

/// Point on the surface H/J = E at the given Q1, P1, P2 with Q2 on the
/// principal arccos branch; empty when the surface misses these coordinates.
std::optional<PhasePoint> project_to_energy(double E, double mu, double Q1, double P1, double P2);

/// Uniform (Q1, P1, P2) draws with Q2 solved from the energy; deterministic in
/// `seed`. Throws std::runtime_error after 1e4 consecutive misses.
PhasePoint random_energy_seed(double E, double mu, std::uint64_t seed);

struct SectionCloud {
  double Q1 = 3.14159265358979323846;
  double energy = 0.0;
  std::vector<std::array<double, 2>> points;  ///< (P1, P2)
  std::vector<double> Q2;                     ///< Q2 at each crossing
  std::vector<double> times;
  bool few_crossings = false;                 ///< fewer than 10 crossings
  std::size_t crossings() const { return points.size(); }
};

/// Crossings of Q1 = plane with sin Q2 > 0 over time T, each refined by a
/// secant iteration on the crossing time to |Q1 - plane| <= 1e-10.
SectionCloud poincare_section(const PhasePoint& x0, double mu, double T, double h = 1e-3,
                              double plane = 3.14159265358979323846);

enum class Label { kIsland, kSea, kUnlabelable };

const char* label_name(Label label);

struct LyapunovResult {
  double exponent = 0.0;
  Label label = Label::kUnlabelable;
};

inline constexpr double kLyapunovThreshold = 1e-2;
inline constexpr double kLyapunovTime = 1e4;

/// Largest Lyapunov exponent by tangent-vector renormalization; island iff
/// the exponent is below lambda_star.
LyapunovResult lyapunov_label(const PhasePoint& x0, double mu, double T = kLyapunovTime,
                              double lambda_star = kLyapunovThreshold, double h = 1e-3);

/// The 18-node Q1 partition used for the hyperarea quadrature.
std::vector<double> default_partition();

struct VolumeOptions {
  double energy = -0.9;
  double mu = 0.5;
  std::vector<double> partition = default_partition();
  double dP = 0.02;
  double fd_step = 1e-5;
  int subdivisions = 16;  ///< P1 sub-columns per cell for the area integral; labels stay per cell
  double lyapunov_time = kLyapunovTime;
  double lambda_star = kLyapunovThreshold;
  double h = 1e-3;
  std::size_t batch = 8;  ///< trajectories launched per painting round
  unsigned threads = 1;
  bool label_islands = true;
  /// Called after each painting round with (trajectories, labelled cells, admissible cells).
  std::function<void(std::size_t, std::size_t, std::size_t)> progress;
};

struct PlaneArea {
  double Q1 = 0.0;
  double total = 0.0;
  double island = 0.0;
  std::size_t admissible_cells = 0;
  std::size_t island_cells = 0;
  std::size_t sea_cells = 0;
  std::size_t unlabelable_cells = 0;
  std::size_t excluded_cells = 0;    ///< cells holding at least one singular sample
  std::size_t samples = 0;           ///< admissible area samples
  std::size_t excluded_samples = 0;  ///< samples with a singular weight
};

struct VolumeReport {
  double V_total = 0.0;
  double V_island = 0.0;
  double ratio = 0.0;
  double excluded_measure = 0.0;  ///< estimated hyperarea of excluded singular cells
  double dP = 0.0;
  std::vector<PlaneArea> planes;
  std::size_t trajectories = 0;
  std::size_t island_trajectories = 0;
};

/// Local weight C1 * C2 of the hyperarea measure at a surface point given by
/// (Q1, P1, P2), from central differences; empty for inadmissible or singular
/// points.
std::optional<double> area_weight(double E, double mu, double Q1, double P1, double P2,
                                  double fd_step = 1e-5);

/// Hyperarea of the isoenergetic surface (sin Q2 > 0 sheet) and of its
/// island part. Islands are found by launching Lyapunov trajectories from
/// unlabeled cell centres and labeling every cell their crossings visit.
VolumeReport hyperarea(const VolumeOptions& options);

}  // namespace eigenshell::phase
