#pragma once

// Independent oracles for the test suite. These deliberately avoid the
// library's own computation paths: quadrature instead of closed forms,
// dense sampling instead of structure, direct rescans instead of the
// incremental bookkeeping under test.

#include <cmath>
#include <functional>
#include <vector>

#include "koblab/types.hpp"

namespace oracles {

/// Hyperbolic length of the radial segment [0, r] in the unit disc,
/// integrating the density 1/(1-t^2) with composite Simpson.
inline double disc_radial_length(double r, int panels = 2000) {
  auto f = [](double t) { return 1.0 / (1.0 - t * t); };
  const double h = r / panels;
  double acc = f(0.0) + f(r);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(i * h);
  return acc * h / 3.0;
}

/// Euclidean distance from a point of the bidisc to its boundary, by dense
/// sampling of the two faces |z1| = 1 and |z2| = 1.
inline double bidisc_boundary_distance_sampled(koblab::cx z1, koblab::cx z2) {
  using koblab::cx;
  double best = 1e9;
  const int na = 256, nr = 24;
  for (int a = 0; a < na; ++a) {
    const double th = 2.0 * M_PI * a / na;
    const cx u(std::cos(th), std::sin(th));
    for (int ri = 0; ri <= nr; ++ri) {
      for (int ai = 0; ai < 16; ++ai) {
        const double rr = static_cast<double>(ri) / nr;
        const cx v = rr * cx(std::cos(2.0 * M_PI * ai / 16), std::sin(2.0 * M_PI * ai / 16));
        best = std::min(best, std::hypot(std::abs(u - z1), std::abs(v - z2)));
        best = std::min(best, std::hypot(std::abs(v - z1), std::abs(u - z2)));
      }
    }
  }
  return best;
}

/// Parameter and value of the closest approach of the bent bidisc geodesic
/// to the origin: the crossing of arctanh|x(t)| (falling) with
/// arctanh(2rt) (rising) at t* = (1 - sqrt(1-r^2)) / (2 r^2).
inline double tent_crossing_parameter(double r) {
  return (1.0 - std::sqrt(1.0 - r * r)) / (2.0 * r * r);
}
inline double tent_crossing_value(double r) {
  return std::atanh((1.0 - std::sqrt(1.0 - r * r)) / r);
}

/// Horocycle limit of k(z, x_n) - k(0, x_n) for real x_n -> 1 in the disc.
inline double horocycle_limit(koblab::cx z) {
  return 0.5 * std::log(std::norm(koblab::cx(1.0, 0.0) - z) / (1.0 - std::norm(z)));
}

/// Reference record extraction: scan a profile (index n = 1, 2, ...) and
/// keep every index whose value strictly exceeds all previous values; the
/// first index is a record by convention.
inline std::vector<int> records_rescan(const std::vector<double>& profile) {
  std::vector<int> out;
  for (size_t i = 0; i < profile.size(); ++i) {
    bool rec = true;
    for (size_t m = 0; m < i; ++m)
      if (profile[m] >= profile[i]) rec = false;
    if (i == 0) rec = true;
    if (rec) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

/// Simpson integral of a scalar function on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels = 1000) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

}  // namespace oracles
