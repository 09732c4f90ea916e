#pragma once

#include "koblab/types.hpp"

namespace koblab {

// Planar hyperbolic distances in the half-log normalization k_D(0,r) =
// arctanh r = (1/2) log((1+r)/(1-r)); the infinitesimal density on the unit
// disc is |dz| / (1 - |z|^2).

/// Poincare distance on the unit disc; throws std::domain_error if an
/// argument is on or outside the unit circle. Stable near the boundary:
/// k = log(|1 - conj(w) z| + |z - w|) - (1/2) log((1-|z|^2)(1-|w|^2)).
double poincare_distance(cx z, cx w);

/// Infinitesimal disc density 1/(1-|z|^2).
double poincare_density(cx z);

/// Distance in the disc D(center, radius).
double disc_distance(cx center, double radius, cx z, cx w);

/// Distance in the half-plane {Re w < bound}.
double halfplane_distance(double bound, cx z, cx w);

/// Densities matching the two targets above.
double disc_density(cx center, double radius, cx z);
double halfplane_density(double bound, cx z);

/// Mobius automorphism of D sending a -> 0: z -> (z - a) / (1 - conj(a) z).
cx mobius_to_zero(cx a, cx z);
/// Inverse of the above: z -> (z + a) / (1 + conj(a) z).
cx mobius_from_zero(cx a, cx z);

/// Point at hyperbolic-parameter fraction u in [0,1] along the disc geodesic
/// from a to b (u may exceed [0,1] to extend the geodesic).
cx disc_geodesic_point(cx a, cx b, double u);

/// Distance on the unit ball of C^N:
///   k = arctanh s,  s^2 = 1 - (1-|z|^2)(1-|w|^2)/|1 - <z,w>|^2.
double ball_distance(const Point& z, const Point& w);

/// Mobius involution of the ball swapping `a` and 0 (Rudin's phi_a).
Point ball_mobius(const Point& a, const Point& z);

/// Kobayashi-Royden norm of the ball at z in direction v:
///   sqrt(|v|^2/(1-|z|^2) + |<v,z>|^2/(1-|z|^2)^2).
double ball_royden_norm(const Point& z, const Point& v);

/// Max of per-factor distances; throws on an empty list.
double product_distance(const std::vector<double>& factor_distances);

}  // namespace koblab
