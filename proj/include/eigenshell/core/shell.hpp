#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace eigenshell {

enum class Topology { kLine, kCircle };

/// Closed interval [center - width/2, center + width/2]. On the circle the
/// interval is taken modulo 2pi and may wrap through 0.
class EnergyShell {
 public:
  static EnergyShell line(double center, double width);
  static EnergyShell circle(double center, double width);

  double center() const { return center_; }
  double width() const { return width_; }
  Topology topology() const { return topology_; }
  double lower() const { return center_ - 0.5 * width_; }
  double upper() const { return center_ + 0.5 * width_; }

  bool contains(double energy) const;

 private:
  EnergyShell(double center, double width, Topology topology)
      : center_(center), width_(width), topology_(topology) {}

  double center_;
  double width_;
  Topology topology_;
};

/// Indices k with energies[k] inside the shell, ascending.
std::vector<std::size_t> shell_select(std::span<const double> energies, const EnergyShell& shell);

enum class Rule {
  kAtLeast,  ///< 1 iff feature >= threshold
  kAbove,    ///< 1 iff feature >  threshold
  kBelow,    ///< 1 iff feature <  threshold
};

/// Thresholded feature functional over the states of one spectrum. The
/// feature is addressed by spectrum index so that expensive features can be
/// evaluated lazily for shell members only.
struct Classifier {
  std::string name;
  std::function<double(std::size_t)> feature;
  double threshold = 0.0;
  Rule rule = Rule::kAtLeast;

  /// Always 0 or 1; a NaN feature classifies as 0.
  int apply(std::size_t index) const;

  static Classifier from_values(std::string name, std::vector<double> values, double threshold,
                                Rule rule = Rule::kAtLeast);
};

struct RatioResult {
  double f = 0.0;
  std::size_t population = 0;
};

/// Fraction of shell members classified 1. Throws EmptyShellError when the
/// shell selects nothing.
RatioResult ratio_f(std::span<const double> energies, const EnergyShell& shell,
                    const Classifier& classifier);

/// Same ratio over an explicit index set.
RatioResult ratio_over(std::span<const std::size_t> members, const Classifier& classifier);

struct RatioSample {
  double parameter = 0.0;
  double f = 0.0;
  std::size_t population = 0;
  bool empty = false;  ///< gap marker; f is NaN
};

struct RatioCurve {
  std::string parameter_name;
  std::string classifier_name;
  std::vector<RatioSample> samples;
  std::vector<std::pair<std::string, std::string>> metadata;
};

enum class EmptyPolicy { kThrow, kMark };

/// f(delta E) at fixed center for every width in `widths` (ascending, > 0).
RatioCurve ratio_curve(std::span<const double> energies, const Classifier& classifier,
                       double center, std::span<const double> widths,
                       Topology topology = Topology::kLine,
                       EmptyPolicy empty_policy = EmptyPolicy::kThrow);

/// Total variation sum |f_{i+1} - f_i| over samples [first, last), skipping
/// gap markers.
double total_variation(const RatioCurve& curve, std::size_t first, std::size_t last);

/// max f - min f over the non-empty samples.
double spread(const RatioCurve& curve);

}  // namespace eigenshell
