#include "koblab/polygon_metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace koblab {

namespace {

// 16-point Gauss-Legendre nodes/weights on [0,1].
constexpr int kGL = 16;
const double kGLx[kGL] = {
    0.005299532504175031, 0.0277124884633837,  0.06718439880608412, 0.1222977958224985,
    0.1910618777986781,   0.2709916111713863,  0.3591982246103705,  0.4524937450811813,
    0.5475062549188187,   0.6408017753896295,  0.7290083888286137,  0.8089381222013219,
    0.8777022041775015,   0.9328156011939159,  0.9722875115366163,  0.994700467495825};
const double kGLw[kGL] = {
    0.01357622970587705, 0.03112676196932395, 0.04757925584124639, 0.06231448562776694,
    0.07479799440828837, 0.08457825969750127, 0.09130170752246179, 0.0947253052275343,
    0.0947253052275343,  0.09130170752246179, 0.08457825969750127, 0.07479799440828837,
    0.06231448562776694, 0.04757925584124639, 0.03112676196932395, 0.01357622970587705};

double wrap_angle(double a) {
  const double two_pi = 2.0 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a < 0.0) a += two_pi;
  return a;
}

}  // namespace

bool RegularPolygon::contains(cx x, double slack) const {
  const cx rel = (x - center) * std::polar(1.0, -vertex_phase);
  // Facet normals at angles pi/m + 2 pi j/m relative to a vertex at angle 0.
  for (int j = 0; j < m; ++j) {
    const double th = std::numbers::pi / m + 2.0 * std::numbers::pi * j / m;
    if (rel.real() * std::cos(th) + rel.imag() * std::sin(th) > apothem - slack) return false;
  }
  return true;
}

double RegularPolygon::support(double theta) const {
  // Support of the gon in direction theta (center-relative): the maximum of
  // Re(v e^{-i theta}) over vertices is attained at the nearest vertex.
  const double rel = wrap_angle(theta - vertex_phase);
  const double sector = 2.0 * std::numbers::pi / m;
  const double d = std::abs(std::remainder(rel, sector));
  return circumradius() * std::cos(d);
}

RegularPolygonMap::RegularPolygonMap(RegularPolygon gon) : gon_(gon) {
  if (gon.m < 3) throw std::invalid_argument("RegularPolygonMap: need m >= 3");
  // apothem = lambda * I_m * cos(pi/m) with I_m = B(1/m, 1 - 2/m)/m.
  const double im = std::beta(1.0 / gon.m, 1.0 - 2.0 / gon.m) / gon.m;
  lambda_ = gon.apothem / (std::cos(std::numbers::pi / gon.m) * im);
}

cx RegularPolygonMap::deriv(cx zeta) const {
  const cx tm = std::pow(zeta, gon_.m);
  // Principal branch; Re(1 - zeta^m) > 0 on the open disc.
  return lambda_ * std::exp((-2.0 / gon_.m) * std::log(cx(1.0, 0.0) - tm)) *
         std::polar(1.0, gon_.vertex_phase);
}

cx RegularPolygonMap::map_centered(cx zeta) const {
  // Integrate g' along the straight segment [0, zeta], composite GL panels.
  const int panels = 8;
  cx acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = static_cast<double>(p) / panels;
    const double h = 1.0 / panels;
    for (int i = 0; i < kGL; ++i) {
      const double s = a + h * kGLx[i];
      const cx t = s * zeta;
      const cx tm = std::pow(t, gon_.m);
      acc += h * kGLw[i] * std::exp((-2.0 / gon_.m) * std::log(cx(1.0, 0.0) - tm));
    }
  }
  return lambda_ * acc * zeta;
}

cx RegularPolygonMap::map(cx zeta) const {
  if (std::abs(zeta) >= 1.0)
    throw std::domain_error("RegularPolygonMap::map: |zeta| >= 1");
  return gon_.center + std::polar(1.0, gon_.vertex_phase) * map_centered(zeta);
}

cx RegularPolygonMap::inverse(cx x) const {
  if (!gon_.contains(x, 0.0))
    throw std::domain_error("RegularPolygonMap::inverse: point outside the polygon");
  const cx y = (x - gon_.center) * std::polar(1.0, -gon_.vertex_phase);
  cx zeta = y / lambda_;
  if (std::abs(zeta) > 0.999) zeta *= 0.999 / std::abs(zeta);
  for (int it = 0; it < 80; ++it) {
    const cx g = map_centered(zeta);
    const cx gp = lambda_ * std::exp((-2.0 / gon_.m) * std::log(cx(1.0, 0.0) - std::pow(zeta, gon_.m)));
    cx step = (g - y) / gp;
    // Keep the iterate inside the disc; halve the step if it would exit.
    while (std::abs(zeta - step) >= 1.0 - 1e-12 && std::abs(step) > 1e-18) step *= 0.5;
    zeta -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return zeta;
}

double RegularPolygonMap::distance(cx x, cx y) const {
  const cx zx = inverse(x), zy = inverse(y);
  const double num = std::abs(zx - zy);
  if (num == 0.0) return 0.0;
  const double den = std::abs(1.0 - std::conj(zy) * zx);
  const double px = (1.0 - std::abs(zx)) * (1.0 + std::abs(zx));
  const double py = (1.0 - std::abs(zy)) * (1.0 + std::abs(zy));
  return std::log(den + num) - 0.5 * (std::log(px) + std::log(py));
}

double RegularPolygonMap::density(cx x) const {
  const cx z = inverse(x);
  const double gp = std::abs(deriv(z));
  return 1.0 / ((1.0 - std::norm(z)) * gp);
}

std::vector<cx> clip_halfplanes(const std::vector<std::pair<cx, double>>& halfplanes,
                                double bound) {
  // Start from the bounding square, clip by each half-plane Re(z a) <= b
  // (Sutherland-Hodgman on a convex subject).
  std::vector<cx> poly = {cx(-bound, -bound), cx(bound, -bound), cx(bound, bound),
                          cx(-bound, bound)};
  for (const auto& [a, b] : halfplanes) {
    if (std::abs(a) < 1e-15) {
      if (b < 0.0) return {};
      continue;
    }
    std::vector<cx> next;
    const size_t n = poly.size();
    for (size_t i = 0; i < n; ++i) {
      const cx p = poly[i], q = poly[(i + 1) % n];
      const double fp = (p * a).real() - b;
      const double fq = (q * a).real() - b;
      if (fp <= 0.0) next.push_back(p);
      if ((fp < 0.0 && fq > 0.0) || (fp > 0.0 && fq < 0.0)) {
        const double t = fp / (fp - fq);
        next.push_back(p + t * (q - p));
      }
    }
    poly = std::move(next);
    if (poly.size() < 3) return {};
  }
  // Merge near-duplicate vertices and drop collinear ones.
  std::vector<cx> out;
  const double eps = 1e-11 * bound;
  for (const cx& v : poly) {
    if (out.empty() || std::abs(v - out.back()) > eps) out.push_back(v);
  }
  while (out.size() >= 2 && std::abs(out.front() - out.back()) <= eps) out.pop_back();
  if (out.size() < 3) return out;
  std::vector<cx> clean;
  const size_t n = out.size();
  for (size_t i = 0; i < n; ++i) {
    const cx a = out[(i + n - 1) % n], b = out[i], c = out[(i + 1) % n];
    const cx u = b - a, v = c - b;
    const double cross = u.real() * v.imag() - u.imag() * v.real();
    if (std::abs(cross) > eps * (std::abs(u) + std::abs(v))) clean.push_back(b);
  }
  return clean;
}

std::optional<RegularPolygon> detect_regular_polygon(const std::vector<cx>& vertices,
                                                     double tol) {
  const int m = static_cast<int>(vertices.size());
  if (m < 3) return std::nullopt;
  cx c = 0.0;
  for (const cx& v : vertices) c += v;
  c /= static_cast<double>(m);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  for (const cx& v : vertices) {
    const double r = std::abs(v - c);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  if (rmax <= 0.0 || (rmax - rmin) > tol * rmax) return std::nullopt;

  std::vector<double> angles;
  angles.reserve(vertices.size());
  for (const cx& v : vertices) angles.push_back(wrap_angle(std::arg(v - c)));
  std::sort(angles.begin(), angles.end());
  const double sector = 2.0 * std::numbers::pi / m;
  for (int i = 0; i < m; ++i) {
    const double gap = (i + 1 < m) ? angles[i + 1] - angles[i]
                                   : angles[0] + 2.0 * std::numbers::pi - angles[m - 1];
    if (std::abs(gap - sector) > tol * 10.0) return std::nullopt;
  }
  RegularPolygon gon;
  gon.m = m;
  gon.center = c;
  gon.vertex_phase = angles[0];
  gon.apothem = 0.5 * (rmin + rmax) * std::cos(std::numbers::pi / m);
  return gon;
}

}  // namespace koblab
