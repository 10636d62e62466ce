#include "eigenshell/core/shell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "eigenshell/core/errors.hpp"

namespace eigenshell {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Signed distance from center on the circle, in [-pi, pi).
double circular_offset(double energy, double center) {
  double d = std::fmod(energy - center + std::numbers::pi, kTwoPi);
  if (d < 0.0) d += kTwoPi;
  return d - std::numbers::pi;
}

}  // namespace

EnergyShell EnergyShell::line(double center, double width) {
  if (!(width > 0.0) || !std::isfinite(width) || !std::isfinite(center)) {
    throw std::invalid_argument("EnergyShell: width must be finite and > 0");
  }
  return {center, width, Topology::kLine};
}

EnergyShell EnergyShell::circle(double center, double width) {
  if (!(width > 0.0) || width > kTwoPi || !std::isfinite(center)) {
    throw std::invalid_argument("EnergyShell: circular width must lie in (0, 2pi]");
  }
  return {center, width, Topology::kCircle};
}

bool EnergyShell::contains(double energy) const {
  if (topology_ == Topology::kLine) return energy >= lower() && energy <= upper();
  if (width_ >= kTwoPi) return true;
  return std::abs(circular_offset(energy, center_)) <= 0.5 * width_;
}

std::vector<std::size_t> shell_select(std::span<const double> energies, const EnergyShell& shell) {
  std::vector<std::size_t> members;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    if (shell.contains(energies[k])) members.push_back(k);
  }
  return members;
}

int Classifier::apply(std::size_t index) const {
  const double value = feature(index);
  switch (rule) {
    case Rule::kAtLeast:
      return value >= threshold ? 1 : 0;
    case Rule::kAbove:
      return value > threshold ? 1 : 0;
    case Rule::kBelow:
      return value < threshold ? 1 : 0;
  }
  return 0;
}

Classifier Classifier::from_values(std::string name, std::vector<double> values, double threshold,
                                   Rule rule) {
  Classifier c;
  c.name = std::move(name);
  c.threshold = threshold;
  c.rule = rule;
  c.feature = [values = std::move(values)](std::size_t k) { return values.at(k); };
  return c;
}

RatioResult ratio_over(std::span<const std::size_t> members, const Classifier& classifier) {
  if (members.empty()) throw EmptyShellError("ratio over an empty shell is undefined");
  std::size_t hits = 0;
  for (const auto k : members) hits += static_cast<std::size_t>(classifier.apply(k));
  return {static_cast<double>(hits) / static_cast<double>(members.size()), members.size()};
}

RatioResult ratio_f(std::span<const double> energies, const EnergyShell& shell,
                    const Classifier& classifier) {
  const auto members = shell_select(energies, shell);
  if (members.empty()) {
    std::ostringstream msg;
    msg << "empty shell: no states in [" << shell.lower() << ", " << shell.upper() << "]";
    throw EmptyShellError(msg.str());
  }
  return ratio_over(members, classifier);
}

RatioCurve ratio_curve(std::span<const double> energies, const Classifier& classifier,
                       double center, std::span<const double> widths, Topology topology,
                       EmptyPolicy empty_policy) {
  if (!std::is_sorted(widths.begin(), widths.end())) {
    throw std::invalid_argument("ratio_curve: width grid must be ascending");
  }
  RatioCurve curve;
  curve.parameter_name = "delta_E";
  curve.classifier_name = classifier.name;
  curve.samples.reserve(widths.size());
  for (const double w : widths) {
    const auto shell = topology == Topology::kLine ? EnergyShell::line(center, w)
                                                   : EnergyShell::circle(center, w);
    const auto members = shell_select(energies, shell);
    if (members.empty()) {
      if (empty_policy == EmptyPolicy::kThrow) {
        std::ostringstream msg;
        msg << "empty shell at delta_E = " << w << " around " << center;
        throw EmptyShellError(msg.str());
      }
      curve.samples.push_back({w, std::numeric_limits<double>::quiet_NaN(), 0, true});
      continue;
    }
    const auto r = ratio_over(members, classifier);
    curve.samples.push_back({w, r.f, r.population, false});
  }
  return curve;
}

double total_variation(const RatioCurve& curve, std::size_t first, std::size_t last) {
  last = std::min(last, curve.samples.size());
  double tv = 0.0;
  const RatioSample* previous = nullptr;
  for (std::size_t i = first; i < last; ++i) {
    const auto& s = curve.samples[i];
    if (s.empty) continue;
    if (previous != nullptr) tv += std::abs(s.f - previous->f);
    previous = &s;
  }
  return tv;
}

double spread(const RatioCurve& curve) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : curve.samples) {
    if (s.empty) continue;
    lo = std::min(lo, s.f);
    hi = std::max(hi, s.f);
  }
  return hi >= lo ? hi - lo : 0.0;
}

}  // namespace eigenshell
