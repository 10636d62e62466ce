#include "eigenshell/phase/phase_space.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <boost/math/quadrature/gauss.hpp>

namespace eigenshell::phase {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Two unit spins (x1, y1, z1, x2, y2, z2) with z = P and Q the azimuth.
using Spins = std::array<double, 6>;
// Spins followed by a tangent vector.
using Extended = std::array<double, 12>;

double wrap_angle(double a) {
  a = std::fmod(a, kTwoPi);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi) a = 0.0;
  return a;
}

Spins to_spins(const PhasePoint& x) {
  const double r1 = std::sqrt(std::max(0.0, 1.0 - x.P1 * x.P1));
  const double r2 = std::sqrt(std::max(0.0, 1.0 - x.P2 * x.P2));
  return {r1 * std::cos(x.Q1), r1 * std::sin(x.Q1), x.P1,
          r2 * std::cos(x.Q2), r2 * std::sin(x.Q2), x.P2};
}

PhasePoint to_point(const Spins& s) {
  return {wrap_angle(std::atan2(s[1], s[0])), wrap_angle(std::atan2(s[4], s[3])), s[2], s[5]};
}

void check_poles(double z1, double z2) {
  if (std::abs(z1) > 1.0 - kPoleMargin || std::abs(z2) > 1.0 - kPoleMargin) {
    std::ostringstream msg;
    msg << "trajectory reached a pole (P1=" << z1 << ", P2=" << z2 << ")";
    throw TrajectoryAborted(msg.str());
  }
}

template <std::size_t N>
void spin_rhs(const std::array<double, N>& s, double mu, std::array<double, N>& d) {
  const double x1 = s[0], y1 = s[1], z1 = s[2], x2 = s[3], y2 = s[4], z2 = s[5];
  d[0] = mu * y1 * z2;
  d[1] = z1 - mu * x1 * z2;
  d[2] = -y1;
  d[3] = mu * y2 * z1;
  d[4] = z2 - mu * x2 * z1;
  d[5] = -y2;
  if constexpr (N == 12) {
    const double a1 = s[6], b1 = s[7], c1 = s[8], a2 = s[9], b2 = s[10], c2 = s[11];
    d[6] = mu * (b1 * z2 + y1 * c2);
    d[7] = c1 - mu * (a1 * z2 + x1 * c2);
    d[8] = -b1;
    d[9] = mu * (b2 * z1 + y2 * c1);
    d[10] = c2 - mu * (a2 * z1 + x2 * c1);
    d[11] = -b2;
  }
}

template <std::size_t N>
std::array<double, N> rk4(const std::array<double, N>& s, double mu, double h) {
  std::array<double, N> k1, k2, k3, k4, t;
  spin_rhs(s, mu, k1);
  for (std::size_t i = 0; i < N; ++i) t[i] = s[i] + 0.5 * h * k1[i];
  spin_rhs(t, mu, k2);
  for (std::size_t i = 0; i < N; ++i) t[i] = s[i] + 0.5 * h * k2[i];
  spin_rhs(t, mu, k3);
  for (std::size_t i = 0; i < N; ++i) t[i] = s[i] + h * k3[i];
  spin_rhs(t, mu, k4);
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

std::size_t step_count(double T, double h) {
  if (!(h > 0.0) || !(T >= 0.0)) throw std::invalid_argument("need T >= 0 and h > 0");
  return static_cast<std::size_t>(std::llround(T / h));
}

// sin(Q1 - c) and cos(Q1 - c), up to the common factor sqrt(1 - P1^2).
double plane_sin(double x1, double y1, double sc, double cc) { return y1 * cc - x1 * sc; }
double plane_cos(double x1, double y1, double sc, double cc) { return x1 * cc + y1 * sc; }

Extended initial_extended(const Spins& s) {
  Extended e{};
  std::copy(s.begin(), s.end(), e.begin());
  // A fixed generic direction, projected onto the tangent planes of both spheres.
  std::array<double, 6> v = {0.31, -0.47, 0.59, -0.23, 0.41, 0.37};
  for (int top = 0; top < 2; ++top) {
    const int o = 3 * top;
    const double dot = v[o] * s[o] + v[o + 1] * s[o + 1] + v[o + 2] * s[o + 2];
    for (int i = 0; i < 3; ++i) v[o + i] -= dot * s[o + i];
  }
  double norm = 0.0;
  for (double c : v) norm += c * c;
  norm = std::sqrt(norm);
  for (int i = 0; i < 6; ++i) e[6 + i] = v[i] / norm;
  return e;
}

struct PaintedTrajectory {
  LyapunovResult result;
  std::vector<std::pair<std::size_t, std::size_t>> cells;  // (plane, cell)
};

struct PaintGrid {
  std::vector<double> sin_c, cos_c;
  double dP = 0.02;
  std::size_t n = 100;

  std::optional<std::size_t> cell_of(double P1, double P2) const {
    const auto i = static_cast<long>(std::floor((P1 + 1.0) / dP));
    const auto k = static_cast<long>(std::floor((P2 + 1.0) / dP));
    if (i < 0 || k < 0 || i >= static_cast<long>(n) || k >= static_cast<long>(n)) return std::nullopt;
    return static_cast<std::size_t>(i) * n + static_cast<std::size_t>(k);
  }
};

PaintedTrajectory run_painting(const PhasePoint& x0, double mu, const VolumeOptions& opt,
                               const PaintGrid& grid) {
  PaintedTrajectory out;
  const std::size_t steps = step_count(opt.lyapunov_time, opt.h);
  const auto renorm_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / opt.h)));
  const std::size_t planes = grid.sin_c.size();
  Extended s = initial_extended(to_spins(x0));
  std::vector<double> g_prev(planes);
  for (std::size_t p = 0; p < planes; ++p) g_prev[p] = plane_sin(s[0], s[1], grid.sin_c[p], grid.cos_c[p]);
  double log_sum = 0.0;
  try {
    for (std::size_t step = 1; step <= steps; ++step) {
      const Extended next = rk4(s, mu, opt.h);
      check_poles(next[2], next[5]);
      for (std::size_t p = 0; p < planes; ++p) {
        const double g = plane_sin(next[0], next[1], grid.sin_c[p], grid.cos_c[p]);
        if ((g_prev[p] < 0.0) != (g < 0.0)) {
          const double a = g_prev[p] / (g_prev[p] - g);
          double c[6];
          for (int i = 0; i < 6; ++i) c[i] = s[i] + a * (next[i] - s[i]);
          if (plane_cos(c[0], c[1], grid.sin_c[p], grid.cos_c[p]) > 0.0 && c[4] > 0.0) {
            if (const auto cell = grid.cell_of(c[2], c[5])) out.cells.emplace_back(p, *cell);
          }
        }
        g_prev[p] = g;
      }
      s = next;
      if (step % renorm_every == 0 || step == steps) {
        double norm = 0.0;
        for (int i = 6; i < 12; ++i) norm += s[i] * s[i];
        norm = std::sqrt(norm);
        log_sum += std::log(norm);
        for (int i = 6; i < 12; ++i) s[i] /= norm;
      }
    }
  } catch (const TrajectoryAborted&) {
    out.result = {0.0, Label::kUnlabelable};
    out.cells.clear();
    return out;
  }
  const double lambda = log_sum / (static_cast<double>(steps) * opt.h);
  out.result = {lambda, lambda < opt.lambda_star ? Label::kIsland : Label::kSea};
  std::sort(out.cells.begin(), out.cells.end());
  out.cells.erase(std::unique(out.cells.begin(), out.cells.end()), out.cells.end());
  return out;
}

}  // namespace

double energy(const PhasePoint& x, double mu) {
  return std::sqrt(std::max(0.0, 1.0 - x.P1 * x.P1)) * std::cos(x.Q1) +
         std::sqrt(std::max(0.0, 1.0 - x.P2 * x.P2)) * std::cos(x.Q2) + mu * x.P1 * x.P2;
}

std::array<double, 4> eom_rhs(const PhasePoint& x, double mu) {
  const double r1 = std::sqrt(1.0 - x.P1 * x.P1);
  const double r2 = std::sqrt(1.0 - x.P2 * x.P2);
  return {x.P1 * std::cos(x.Q1) / r1 - mu * x.P2, x.P2 * std::cos(x.Q2) / r2 - mu * x.P1,
          -r1 * std::sin(x.Q1), -r2 * std::sin(x.Q2)};
}

PhasePoint eom_step(const PhasePoint& x, double mu, double h) {
  check_poles(x.P1, x.P2);
  const Spins next = rk4(to_spins(x), mu, h);
  check_poles(next[2], next[5]);
  return to_point(next);
}

PhasePoint evolve(const PhasePoint& x, double mu, double T, double h) {
  check_poles(x.P1, x.P2);
  Spins s = to_spins(x);
  const std::size_t steps = step_count(T, h);
  for (std::size_t i = 0; i < steps; ++i) {
    s = rk4(s, mu, h);
    check_poles(s[2], s[5]);
  }
  return to_point(s);
}

std::optional<PhasePoint> project_to_energy(double E, double mu, double Q1, double P1, double P2) {
  if (std::abs(P1) >= 1.0 || std::abs(P2) >= 1.0) return std::nullopt;
  const double c = (E - mu * P1 * P2 - std::sqrt(1.0 - P1 * P1) * std::cos(Q1)) /
                   std::sqrt(1.0 - P2 * P2);
  if (!(std::abs(c) <= 1.0)) return std::nullopt;
  return PhasePoint{wrap_angle(Q1), std::acos(c), P1, P2};
}

PhasePoint random_energy_seed(double E, double mu, std::uint64_t seed) {
  if (std::abs(E) > 2.0 + std::abs(mu)) throw std::invalid_argument("random_energy_seed: energy out of range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> momentum(-1.0 + kPoleMargin, 1.0 - kPoleMargin);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const double Q1 = angle(rng);
    const double P1 = momentum(rng);
    const double P2 = momentum(rng);
    if (const auto x = project_to_energy(E, mu, Q1, P1, P2)) return *x;
  }
  throw std::runtime_error("random_energy_seed: 1e4 consecutive inadmissible draws");
}

SectionCloud poincare_section(const PhasePoint& x0, double mu, double T, double h, double plane) {
  check_poles(x0.P1, x0.P2);
  SectionCloud cloud;
  cloud.Q1 = plane;
  cloud.energy = energy(x0, mu);
  const double sc = std::sin(plane), cc = std::cos(plane);
  Spins s = to_spins(x0);
  const std::size_t steps = step_count(T, h);
  double g_prev = plane_sin(s[0], s[1], sc, cc);
  for (std::size_t step = 1; step <= steps; ++step) {
    const Spins next = rk4(s, mu, h);
    check_poles(next[2], next[5]);
    const double g = plane_sin(next[0], next[1], sc, cc);
    if ((g_prev < 0.0) != (g < 0.0) && plane_cos(next[0], next[1], sc, cc) > 0.0) {
      // Secant on the sub-step length tau in [0, h].
      double t0 = 0.0, g0 = g_prev, t1 = h, g1 = g;
      Spins hit = next;
      double tau = h;
      for (int it = 0; it < 60; ++it) {
        tau = t1 - g1 * (t1 - t0) / (g1 - g0);
        hit = rk4(s, mu, tau);
        const double gt = plane_sin(hit[0], hit[1], sc, cc);
        const double r = std::hypot(hit[0], hit[1]);
        if (std::abs(gt) <= 1e-11 * std::max(r, 1e-300)) break;
        t0 = t1;
        g0 = g1;
        t1 = tau;
        g1 = gt;
      }
      if (hit[4] > 0.0) {
        const PhasePoint p = to_point(hit);
        cloud.points.push_back({p.P1, p.P2});
        cloud.Q2.push_back(p.Q2);
        cloud.times.push_back((static_cast<double>(step) - 1.0) * h + tau);
      }
    }
    g_prev = g;
    s = next;
  }
  cloud.few_crossings = cloud.points.size() < 10;
  return cloud;
}

const char* label_name(Label label) {
  switch (label) {
    case Label::kIsland:
      return "island";
    case Label::kSea:
      return "sea";
    case Label::kUnlabelable:
      return "unlabelable";
  }
  return "unknown";
}

LyapunovResult lyapunov_label(const PhasePoint& x0, double mu, double T, double lambda_star,
                              double h) {
  VolumeOptions opt;
  opt.lyapunov_time = T;
  opt.lambda_star = lambda_star;
  opt.h = h;
  const PaintGrid no_planes{};
  try {
    check_poles(x0.P1, x0.P2);
  } catch (const TrajectoryAborted&) {
    return {0.0, Label::kUnlabelable};
  }
  return run_painting(x0, mu, opt, no_planes).result;
}

std::vector<double> default_partition() {
  return {0.1, 0.7, 1.0, 1.3, 1.6, 1.9, 2.2, 2.5, 2.8,
          3.1, 3.4, 3.7, 4.0, 4.3, 4.6, 4.9, 5.2, 5.8};
}

std::optional<double> area_weight(double E, double mu, double Q1, double P1, double P2,
                                  double fd_step) {
  const auto x = project_to_energy(E, mu, Q1, P1, P2);
  if (!x) return std::nullopt;
  const auto q2_at = [&](double p1, double p2) -> std::optional<double> {
    const auto y = project_to_energy(E, mu, Q1, p1, p2);
    if (!y) return std::nullopt;
    return y->Q2;
  };
  const auto a = q2_at(P1 + fd_step, P2);
  const auto b = q2_at(P1 - fd_step, P2);
  const auto c = q2_at(P1, P2 + fd_step);
  const auto d = q2_at(P1, P2 - fd_step);
  if (!a || !b || !c || !d) return std::nullopt;
  const double dq_dp1 = (*a - *b) / (2.0 * fd_step);
  const double dq_dp2 = (*c - *d) / (2.0 * fd_step);
  const double C1 = std::sqrt(1.0 + dq_dp1 * dq_dp1 + dq_dp2 * dq_dp2);

  const auto H = [&](double q1, double q2, double p1, double p2) {
    return energy({q1, q2, p1, p2}, mu);
  };
  const double s = fd_step;
  const double hQ1 = (H(x->Q1 + s, x->Q2, P1, P2) - H(x->Q1 - s, x->Q2, P1, P2)) / (2 * s);
  const double hQ2 = (H(x->Q1, x->Q2 + s, P1, P2) - H(x->Q1, x->Q2 - s, P1, P2)) / (2 * s);
  const double hP1 = (H(x->Q1, x->Q2, P1 + s, P2) - H(x->Q1, x->Q2, P1 - s, P2)) / (2 * s);
  const double hP2 = (H(x->Q1, x->Q2, P1, P2 + s) - H(x->Q1, x->Q2, P1, P2 - s)) / (2 * s);
  const double grad2 = hQ1 * hQ1 + hQ2 * hQ2 + hP1 * hP1 + hP2 * hP2;
  const double rest = 1.0 - hQ1 * hQ1 / grad2;
  if (!(grad2 > 0.0) || !(rest > 1e-12)) return std::nullopt;
  const double C2 = 1.0 / std::sqrt(rest);
  return C1 * C2;
}

namespace {

// Admissible P2 interval at fixed (Q1, P1): (E - r1 cos Q1 - mu P1 P2)^2 <= 1 - P2^2.
// The ends are the fold of the surface (sin Q2 = 0), where the weight has a
// 1/sqrt singularity.
std::optional<std::pair<double, double>> admissible_p2(double E, double mu, double Q1, double P1) {
  if (std::abs(P1) >= 1.0) return std::nullopt;
  const double a = E - std::sqrt(1.0 - P1 * P1) * std::cos(Q1);
  const double A = mu * mu * P1 * P1 + 1.0, B = -2.0 * a * mu * P1, C = a * a - 1.0;
  const double D = B * B - 4.0 * A * C;
  if (!(D > 0.0)) return std::nullopt;
  const double r = std::sqrt(D);
  return std::pair{(-B - r) / (2.0 * A), (-B + r) / (2.0 * A)};
}

// Close to the fold a 1e-5 stencil can leave the surface; retry with smaller steps.
std::optional<double> fold_safe_weight(double E, double mu, double Q1, double P1, double P2, double step) {
  for (int k = 0; k < 4; ++k, step *= 0.1) {
    if (const auto w = area_weight(E, mu, Q1, P1, P2, step)) return w;
  }
  return std::nullopt;
}

struct CellIntegral {
  double area = 0.0;
  double ok_measure = 0.0;   // coordinate measure dP1 dP2 of evaluated nodes
  double bad_measure = 0.0;  // same for nodes with a singular weight
  std::uint32_t ok = 0, bad = 0;
  bool admissible = false;
  std::pair<double, double> seed{0.0, 0.0};
};

// Integral of C1 C2 over one grid cell: midpoint sub-columns in P1, and in
// P2 Gauss-Legendre on the admissible part, with a cosine substitution at
// any end that is a fold so the 1/sqrt singularity is integrated exactly.
CellIntegral integrate_cell(const VolumeOptions& opt, double Q1, double p1_lo, double p2_lo) {
  using Gauss = boost::math::quadrature::gauss<double, 10>;
  static const auto nodes = [] {
    std::array<std::pair<double, double>, 10> n{};  // (x in [-1, 1], weight)
    const auto& x = Gauss::abscissa();
    const auto& w = Gauss::weights();
    for (std::size_t i = 0; i < 5; ++i) {
      n[2 * i] = {x[i], w[i]};
      n[2 * i + 1] = {-x[i], w[i]};
    }
    return n;
  }();
  constexpr double kHalfPi = std::numbers::pi / 2.0;

  CellIntegral out;
  const int sub = opt.subdivisions;
  const double d1 = opt.dP / sub, p2_hi = p2_lo + opt.dP;
  for (int i = 0; i < sub; ++i) {
    const double P1 = p1_lo + (i + 0.5) * d1;
    const auto range = admissible_p2(opt.energy, opt.mu, Q1, P1);
    if (!range) continue;
    const double a = std::max(range->first, p2_lo), b = std::min(range->second, p2_hi);
    if (!(b > a)) continue;
    out.admissible = true;
    const bool fold_a = range->first >= p2_lo, fold_b = range->second <= p2_hi;
    for (const auto& [x, w] : nodes) {
      double P2, jac;
      if (fold_a && fold_b) {
        const double t = kHalfPi * x;
        P2 = 0.5 * (a + b) + 0.5 * (b - a) * std::sin(t);
        jac = 0.5 * (b - a) * std::cos(t) * kHalfPi;
      } else if (fold_a || fold_b) {
        const double t = 0.5 * kHalfPi * (x + 1.0);
        const double u = (b - a) * (1.0 - std::cos(t));
        P2 = fold_a ? a + u : b - u;
        jac = (b - a) * std::sin(t) * 0.5 * kHalfPi;
      } else {
        P2 = 0.5 * (a + b) + 0.5 * (b - a) * x;
        jac = 0.5 * (b - a);
      }
      const double measure = w * jac * d1;
      if (out.ok == 0 && out.bad == 0) out.seed = {P1, P2};
      const auto weight = fold_safe_weight(opt.energy, opt.mu, Q1, P1, P2, opt.fd_step);
      if (weight && std::isfinite(*weight)) {
        out.area += *weight * measure;
        out.ok_measure += measure;
        ++out.ok;
      } else {
        out.bad_measure += measure;
        ++out.bad;
      }
    }
  }
  return out;
}

}  // namespace

VolumeReport hyperarea(const VolumeOptions& opt) {
  if (opt.partition.size() < 2 || !std::is_sorted(opt.partition.begin(), opt.partition.end()) ||
      opt.partition.front() < 0.0 || opt.partition.back() > kTwoPi) {
    throw std::invalid_argument("hyperarea: partition must be ascending inside [0, 2pi]");
  }
  if (!(opt.dP > 0.0) || opt.dP > 0.02 + 1e-15) throw std::invalid_argument("hyperarea: dP must lie in (0, 0.02]");
  if (opt.subdivisions < 1) throw std::invalid_argument("hyperarea: subdivisions must be positive");

  PaintGrid grid;
  grid.dP = opt.dP;
  grid.n = static_cast<std::size_t>(std::llround(2.0 / opt.dP));
  for (const double c : opt.partition) {
    grid.sin_c.push_back(std::sin(c));
    grid.cos_c.push_back(std::cos(c));
  }
  const std::size_t planes = opt.partition.size();
  const std::size_t cells = grid.n * grid.n;
  auto centre = [&](std::size_t cell) {
    return std::pair{-1.0 + (static_cast<double>(cell / grid.n) + 0.5) * opt.dP,
                     -1.0 + (static_cast<double>(cell % grid.n) + 0.5) * opt.dP};
  };

  std::vector<std::vector<double>> weight(planes, std::vector<double>(cells, std::nan("")));
  std::vector<std::vector<CellIntegral>> cell_int(planes, std::vector<CellIntegral>(cells));
  std::vector<std::vector<std::pair<double, double>>> seed_at(planes, std::vector<std::pair<double, double>>(cells));
  for (std::size_t p = 0; p < planes; ++p) {
    for (std::size_t cell = 0; cell < cells; ++cell) {
      const auto [c1, c2] = centre(cell);
      auto ci = integrate_cell(opt, opt.partition[p], c1 - 0.5 * opt.dP, c2 - 0.5 * opt.dP);
      const bool centre_ok = project_to_energy(opt.energy, opt.mu, opt.partition[p], c1, c2).has_value();
      if (!ci.admissible && !centre_ok) continue;
      // A cell whose admissible sliver is too thin for any node still gets a seed at its centre.
      seed_at[p][cell] = centre_ok ? std::pair{c1, c2} : ci.seed;
      weight[p][cell] = ci.area;
      cell_int[p][cell] = ci;
    }
  }

  // 0 = unknown, otherwise 1 + Label.
  std::vector<std::vector<std::uint8_t>> label(planes, std::vector<std::uint8_t>(cells, 0));
  VolumeReport report;
  report.dP = opt.dP;
  if (opt.label_islands) {
    std::size_t admissible = 0, labelled = 0;
    for (const auto& plane : weight) {
      for (const double w : plane) admissible += !std::isnan(w);
    }
    std::size_t cursor = 0;  // flattened (plane, cell) scan position
    const std::size_t batch = std::max<std::size_t>(1, opt.batch);
    while (true) {
      std::vector<std::pair<std::size_t, std::size_t>> seeds;
      for (; cursor < planes * cells && seeds.size() < batch; ++cursor) {
        const std::size_t p = cursor / cells, cell = cursor % cells;
        if (label[p][cell] == 0 && !std::isnan(weight[p][cell])) seeds.emplace_back(p, cell);
      }
      if (seeds.empty()) break;
      std::vector<PaintedTrajectory> runs(seeds.size());
      std::atomic<std::size_t> next{0};
      auto worker = [&] {
        for (std::size_t i = next++; i < seeds.size(); i = next++) {
          const auto [p, cell] = seeds[i];
          const auto [P1, P2] = seed_at[p][cell];
          const auto x0 = project_to_energy(opt.energy, opt.mu, opt.partition[p], P1, P2);
          try {
            if (!x0) throw TrajectoryAborted("seed off the energy surface");
            check_poles(x0->P1, x0->P2);
            runs[i] = run_painting(*x0, opt.mu, opt, grid);
          } catch (const TrajectoryAborted&) {
            runs[i].result = {0.0, Label::kUnlabelable};
          }
        }
      };
      const unsigned nthreads = std::max(1u, std::min<unsigned>(opt.threads, seeds.size()));
      if (nthreads == 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
      }
      for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto code = static_cast<std::uint8_t>(1 + static_cast<int>(runs[i].result.label));
        ++report.trajectories;
        if (runs[i].result.label == Label::kIsland) ++report.island_trajectories;
        auto& seed_label = label[seeds[i].first][seeds[i].second];
        if (seed_label == 0) {
          seed_label = code;
          ++labelled;
        }
        for (const auto& [p, cell] : runs[i].cells) {
          if (label[p][cell] == 0 && !std::isnan(weight[p][cell])) {
            label[p][cell] = code;
            ++labelled;
          }
        }
      }
      if (opt.progress) opt.progress(report.trajectories, labelled, admissible);
    }
  }

  std::vector<double> ok_measure(planes, 0.0), bad_measure(planes, 0.0);
  for (std::size_t p = 0; p < planes; ++p) {
    PlaneArea area;
    area.Q1 = opt.partition[p];
    for (std::size_t cell = 0; cell < cells; ++cell) {
      const double w = weight[p][cell];
      if (std::isnan(w)) continue;
      ++area.admissible_cells;
      const std::uint8_t code = label[p][cell];
      if (code == 1 + static_cast<int>(Label::kIsland)) ++area.island_cells;
      if (code == 1 + static_cast<int>(Label::kSea)) ++area.sea_cells;
      if (code == 1 + static_cast<int>(Label::kUnlabelable)) ++area.unlabelable_cells;
      const auto& ci = cell_int[p][cell];
      area.samples += ci.ok + ci.bad;
      area.excluded_samples += ci.bad;
      if (ci.bad > 0) ++area.excluded_cells;
      ok_measure[p] += ci.ok_measure;
      bad_measure[p] += ci.bad_measure;
      area.total += w;
      const bool island = opt.label_islands ? code == 1 + static_cast<int>(Label::kIsland) : true;
      if (island) area.island += w;
    }
    report.planes.push_back(area);
  }

  auto trapezoid = [&](auto member) {
    double v = 0.0;
    for (std::size_t p = 0; p + 1 < planes; ++p) {
      v += 0.5 * (opt.partition[p + 1] - opt.partition[p]) *
           (report.planes[p].*member + report.planes[p + 1].*member);
    }
    return v;
  };
  report.V_total = trapezoid(&PlaneArea::total);
  report.V_island = trapezoid(&PlaneArea::island);
  report.ratio = report.V_total > 0.0 ? report.V_island / report.V_total : 0.0;

  // Excluded measure: singular nodes charged the mean included weight of
  // its plane, integrated over Q1 with the same trapezoid rule.
  std::vector<double> excluded_area(planes, 0.0);
  for (std::size_t p = 0; p < planes; ++p) {
    if (!(ok_measure[p] > 0.0)) continue;
    excluded_area[p] = bad_measure[p] * report.planes[p].total / ok_measure[p];
  }
  for (std::size_t p = 0; p + 1 < planes; ++p) {
    report.excluded_measure +=
        0.5 * (opt.partition[p + 1] - opt.partition[p]) * (excluded_area[p] + excluded_area[p + 1]);
  }
  return report;
}

}  // namespace eigenshell::phase
