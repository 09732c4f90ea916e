#pragma once

#include <optional>
#include <vector>

#include "koblab/types.hpp"

namespace koblab {

/// Regular m-gon in the plane: facet normals at angles
/// vertex_phase + pi/m + 2 pi j / m, vertices at vertex_phase + 2 pi j / m.
struct RegularPolygon {
  int m = 3;
  double apothem = 1.0;  // distance from center to each edge
  double vertex_phase = 0.0;
  cx center = 0.0;

  double circumradius() const { return apothem / std::cos(M_PI / m); }
  bool contains(cx x, double slack = 0.0) const;
  /// Support function max over the gon of Re(x e^{-i theta}), center-relative.
  double support(double theta) const;
};

/// Conformal map g of the unit disc onto a centered regular m-gon
/// (Schwarz-Christoffel): g(zeta) = lambda * int_0^zeta (1 - t^m)^{-2/m} dt,
/// with lambda fixed by the apothem. Vertices sit at the m-th roots of unity
/// directions. Used both as an extremal analytic disc (upper bounds) and as
/// the metric of a polygonal target (lower bounds), so the polygon's
/// hyperbolic distance comes out in closed form up to quadrature.
class RegularPolygonMap {
 public:
  explicit RegularPolygonMap(RegularPolygon gon);

  const RegularPolygon& polygon() const { return gon_; }
  double scale() const { return lambda_; }  // = g'(0), the conformal radius

  cx map(cx zeta) const;    // defined for |zeta| < 1
  cx deriv(cx zeta) const;  // g'(zeta), nonvanishing on D
  /// Inverse by Newton iteration; the argument must lie in the open polygon.
  cx inverse(cx x) const;

  /// Hyperbolic distance of the polygon between interior points.
  double distance(cx x, cx y) const;
  /// Kobayashi-Royden density of the polygon at an interior point.
  double density(cx x) const;

 private:
  cx map_centered(cx zeta) const;  // before translation/rotation
  RegularPolygon gon_;
  double lambda_;
};

/// Convex polygon cut out by half-planes Re(zeta * a_i) <= b_i intersected
/// with a bounding square of half-width `bound`; vertices returned CCW with
/// near-duplicates merged. Empty result means an empty (or degenerate) cut.
std::vector<cx> clip_halfplanes(const std::vector<std::pair<cx, double>>& halfplanes,
                                double bound);

/// Detect whether a CCW vertex list is a regular polygon (equal radii from
/// the centroid, uniform angular spacing) within `tol` relative error.
std::optional<RegularPolygon> detect_regular_polygon(const std::vector<cx>& vertices,
                                                     double tol = 1e-9);

}  // namespace koblab
