#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace koblab {

using cx = std::complex<double>;

/// A point of C^N, stored as N complex coordinates. Also used for tangent
/// vectors since the representation is identical.
struct Point {
  std::vector<cx> z;

  Point() = default;
  explicit Point(std::vector<cx> coords) : z(std::move(coords)) {}
  Point(std::initializer_list<cx> coords) : z(coords) {}

  int dim() const { return static_cast<int>(z.size()); }
  cx& operator[](int j) { return z[static_cast<size_t>(j)]; }
  const cx& operator[](int j) const { return z[static_cast<size_t>(j)]; }

  double norm2() const {
    double s = 0.0;
    for (const cx& c : z) s += std::norm(c);
    return s;
  }
  double norm() const { return std::sqrt(norm2()); }

  bool finite() const {
    for (const cx& c : z)
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    return true;
  }
};

inline Point operator+(const Point& a, const Point& b) {
  Point r = a;
  for (int j = 0; j < a.dim(); ++j) r[j] += b[j];
  return r;
}
inline Point operator-(const Point& a, const Point& b) {
  Point r = a;
  for (int j = 0; j < a.dim(); ++j) r[j] -= b[j];
  return r;
}
inline Point operator*(cx s, const Point& a) {
  Point r = a;
  for (cx& c : r.z) c *= s;
  return r;
}

/// Hermitian inner product <a,b> = sum_j a_j conj(b_j).
inline cx hermitian(const Point& a, const Point& b) {
  cx s = 0.0;
  for (int j = 0; j < a.dim(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

inline double euclid_dist(const Point& a, const Point& b) { return (a - b).norm(); }

inline Point zero_point(int n) { return Point(std::vector<cx>(static_cast<size_t>(n), cx(0.0, 0.0))); }

inline Point unit_coord(int n, int j, cx phase = 1.0) {
  Point p = zero_point(n);
  p[j] = phase;
  return p;
}

/// Documented default tolerances; experiment configs may override them.
struct Tolerances {
  double boundary = 1e-9;    // relative to domain diameter, decides "on the boundary"
  double exact = 1e-6;       // bracket width below which a distance counts as exact
  double functional = 1e-9;  // slack allowed when checking supporting functionals
  double horosphere = 1e-6;  // slack in sequential-horosphere membership checks
  double julia = 1e-8;       // slack in the polydisc Julia inequality
};

constexpr long kDefaultBudget = 10000;

class dimension_mismatch : public std::invalid_argument {
 public:
  explicit dimension_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace koblab
