#include "eigenshell/billiard/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace eigenshell::billiard {
namespace {

double series(int m, double x) {
  const double half = 0.5 * x;
  const double lead = std::exp(m * std::log(half) - std::lgamma(m + 1.0));
  const double q = -half * half;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= q / (k * static_cast<double>(k + m));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return lead * sum;
}

double miller(int m, double x) {
  constexpr double kBig = 1e250;
  int start = static_cast<int>(std::max<double>(m, x) + 15.0 * std::cbrt(x) + 30.0);
  start += start % 2;
  const double two_over_x = 2.0 / x;
  double next = 0.0;  // J_{k+1}
  double cur = 1e-300;   // J_k
  double norm = 0.0;
  double wanted = 0.0;
  for (int k = start; k > 0; --k) {
    const double prev = k * two_over_x * cur - next;  // J_{k-1}
    next = cur;
    cur = prev;
    if (std::abs(cur) > kBig) {
      cur /= kBig;
      next /= kBig;
      norm /= kBig;
      wanted /= kBig;
    }
    // cur now holds J_{k-1}.
    if (k - 1 == m) wanted = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
  }
  norm += cur;  // J_0
  return wanted / norm;
}

}  // namespace

double bessel_j(int m, double x) {
  if (m < 0 || m > kMaxBesselOrder || !(x >= 0.0) || x > kMaxBesselArgument) {
    throw std::domain_error("bessel_j: arguments outside 0<=m<=2000, 0<=x<=1e4 (m=" +
                            std::to_string(m) + ", x=" + std::to_string(x) + ")");
  }
  if (x == 0.0) return m == 0 ? 1.0 : 0.0;
  if (x <= 2.0) return series(m, x);
  return miller(m, x);
}

std::vector<BesselZero> bessel_zeros_in(int m, double lo, double hi) {
  if (!(lo >= 0.0) || !(lo < hi)) throw std::invalid_argument("bessel_zeros_in: need 0 <= lo < hi");
  std::vector<BesselZero> out;
  constexpr double kStep = std::numbers::pi / 4.0;
  // No positive zero of J_m lies below m.
  double a = m == 0 ? 0.0 : static_cast<double>(m);
  if (a >= hi) return out;
  double fa = bessel_j(m, a);
  int count = 0;
  while (a < hi) {
    const double bb = a + kStep;
    const double fb = bessel_j(m, bb);
    if ((fa > 0.0 && fb <= 0.0) || (fa < 0.0 && fb >= 0.0)) {
      ++count;
      double l = a, r = bb, fl = fa;
      if (fb == 0.0) {
        l = r = bb;
      }
      while (r - l > 1e-12) {
        const double mid = 0.5 * (l + r);
        const double fm = bessel_j(m, mid);
        if ((fl > 0.0) == (fm > 0.0) && fm != 0.0) {
          l = mid;
          fl = fm;
        } else {
          r = mid;
        }
      }
      double z = 0.5 * (l + r);
      const double derivative =
          m == 0 ? -bessel_j(1, z) : 0.5 * (bessel_j(m - 1, z) - bessel_j(m + 1, z));
      if (derivative != 0.0) {
        const double polished = z - bessel_j(m, z) / derivative;
        if (std::abs(polished - z) < 1e-9) z = polished;
      }
      if (z >= lo && z <= hi) out.push_back({count, z});
      if (fb == 0.0) {
        // The zero sat on the grid node; step past it so it is not counted twice.
        a = bb;
        fa = bessel_j(m, a + 1e-9);
        continue;
      }
    }
    a = bb;
    fa = fb;
  }
  return out;
}

}  // namespace eigenshell::billiard
