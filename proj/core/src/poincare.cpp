#include "koblab/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace koblab {

double poincare_distance(cx z, cx w) {
  const double az = std::abs(z), aw = std::abs(w);
  if (az >= 1.0 || aw >= 1.0)
    throw std::domain_error("poincare_distance: argument on or outside the unit circle");
  const double num = std::abs(z - w);
  if (num == 0.0) return 0.0;
  const double den = std::abs(1.0 - std::conj(w) * z);
  // k = log(den + num) - (1/2) log((1-|z|^2)(1-|w|^2)); avoids the
  // cancellation in 1 - s^2 when both points approach the boundary.
  const double pz = (1.0 - az) * (1.0 + az);
  const double pw = (1.0 - aw) * (1.0 + aw);
  return std::log(den + num) - 0.5 * (std::log(pz) + std::log(pw));
}

double poincare_density(cx z) {
  const double a2 = std::norm(z);
  if (a2 >= 1.0) throw std::domain_error("poincare_density: |z| >= 1");
  return 1.0 / (1.0 - a2);
}

double disc_distance(cx center, double radius, cx z, cx w) {
  return poincare_distance((z - center) / radius, (w - center) / radius);
}

double halfplane_distance(double bound, cx z, cx w) {
  // Map {Re < bound} onto the right half-plane by u = bound - z, where
  // k(u, v) = arctanh |(u - v)/(u + conj(v))|.
  const cx u = cx(bound, 0.0) - z;
  const cx v = cx(bound, 0.0) - w;
  if (u.real() <= 0.0 || v.real() <= 0.0)
    throw std::domain_error("halfplane_distance: argument outside the half-plane");
  const double num = std::abs(u - v);
  if (num == 0.0) return 0.0;
  const double den = std::abs(u + std::conj(v));
  return 0.5 * std::log((den + num) / (den - num));
}

double disc_density(cx center, double radius, cx z) {
  return poincare_density((z - center) / radius) / radius;
}

double halfplane_density(double bound, cx z) {
  const double gap = bound - z.real();
  if (gap <= 0.0) throw std::domain_error("halfplane_density: outside the half-plane");
  return 1.0 / (2.0 * gap);
}

cx mobius_to_zero(cx a, cx z) { return (z - a) / (1.0 - std::conj(a) * z); }
cx mobius_from_zero(cx a, cx z) { return (z + a) / (1.0 + std::conj(a) * z); }

cx disc_geodesic_point(cx a, cx b, double u) {
  const cx d = mobius_to_zero(a, b);
  const double t = std::abs(d);
  if (t == 0.0) return a;
  const cx e = d / t;
  return mobius_from_zero(a, e * std::tanh(u * std::atanh(t)));
}

double ball_distance(const Point& z, const Point& w) {
  if (z.dim() != w.dim()) throw dimension_mismatch("ball_distance: dimension mismatch");
  const double nz = z.norm2(), nw = w.norm2();
  if (nz >= 1.0 || nw >= 1.0)
    throw std::domain_error("ball_distance: argument outside the open unit ball");
  const double d2 = std::norm(cx(1.0, 0.0) - hermitian(z, w));
  const double one_minus_s2 = (1.0 - nz) * (1.0 - nw) / d2;  // in (0, 1]
  const double s2 = std::max(0.0, 1.0 - one_minus_s2);
  const double s = std::sqrt(s2);
  if (s == 0.0) return 0.0;
  return 0.5 * std::log((1.0 + s) * (1.0 + s) / one_minus_s2);
}

Point ball_mobius(const Point& a, const Point& z) {
  const double na = a.norm2();
  if (na >= 1.0) throw std::domain_error("ball_mobius: center outside the ball");
  if (na == 0.0) return zero_point(z.dim()) - z;  // phi_0 = -id
  const cx za = hermitian(z, a);
  const double s = std::sqrt(1.0 - na);
  const Point proj = (za / na) * a;  // P_a z
  Point rest = z - proj;            // Q_a z
  Point num = a - proj - s * rest;
  const cx den = cx(1.0, 0.0) - za;
  return (1.0 / den) * num;
}

double ball_royden_norm(const Point& z, const Point& v) {
  const double nz = z.norm2();
  if (nz >= 1.0) throw std::domain_error("ball_royden_norm: point outside the ball");
  if (v.norm2() == 0.0) throw std::invalid_argument("ball_royden_norm: zero vector");
  const double a = 1.0 - nz;
  const double vz = std::norm(hermitian(v, z));
  return std::sqrt(v.norm2() / a + vz / (a * a));
}

double product_distance(const std::vector<double>& factor_distances) {
  if (factor_distances.empty())
    throw std::invalid_argument("product_distance: empty factor list");
  double m = 0.0;
  for (double d : factor_distances) {
    if (d < 0.0) throw std::invalid_argument("product_distance: negative distance");
    m = std::max(m, d);
  }
  return m;
}

}  // namespace koblab
