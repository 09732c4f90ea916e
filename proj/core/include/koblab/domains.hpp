#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "koblab/rng.hpp"
#include "koblab/types.hpp"

namespace koblab {

/// Affine functional supporting a convex domain: Re<z, normal> < offset on
/// the domain, with equality at the contact point when one is declared.
struct SupportFunctional {
  Point normal;                  // not necessarily unit
  double offset = 0.0;           // Re<contact, normal> when contact is present
  std::optional<Point> contact;  // boundary touch point

  double value(const Point& p) const { return hermitian(p, normal).real() - offset; }
};

/// Per-coordinate disc box |z_j - center_j| <= radius_j. Declared for hull
/// domains; membership includes it, so hulls are bounded by construction.
struct CoordBox {
  Point center;
  std::vector<double> radius;
};

enum class SegmentLocation { Interior, Boundary, Mixed };

/// Bounded convex domain: unit ball, unit polydisc, finite product, or an
/// intersection of supporting half-spaces (a convex polytope) with a box.
class DomainSpec {
 public:
  enum class Kind { Ball, Polydisc, Product, Hull };

  static DomainSpec ball(int n);
  static DomainSpec polydisc(int n);
  static DomainSpec product(std::vector<DomainSpec> factors);
  /// Throws std::invalid_argument if some functional is not strictly
  /// negative at `interior`, or if `interior` leaves the box.
  static DomainSpec hull(int n, std::vector<SupportFunctional> functionals,
                         Point interior, CoordBox box);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  const std::vector<DomainSpec>& factors() const { return factors_; }
  const std::vector<SupportFunctional>& functionals() const { return functionals_; }
  const CoordBox& box() const { return box_; }

  /// A point we know to be inside (origin for models, declared for hulls).
  Point anchor() const;
  /// Euclidean diameter (exact for models, box diagonal bound for hulls).
  double diameter() const;

  /// Signed membership margin: negative inside, zero on the boundary,
  /// positive outside; convex along affine lines for every variant.
  double margin(const Point& p) const;
  bool contains(const Point& p) const { return margin(p) < 0.0; }

  /// Euclidean distance to the boundary. Exact for models; for hulls the
  /// facet-plane minimum (exact for interior points of a polytope, still
  /// flagged as a lower bound in exported metadata).
  double boundary_distance(const Point& p) const;

  bool operator==(const DomainSpec& other) const;

  /// Offsets of coordinate slots when flattening products; for non-product
  /// domains this is {this} at offset 0.
  struct FlatFactor {
    const DomainSpec* dom;
    int offset;
  };
  std::vector<FlatFactor> flattened() const;

  bool is_model() const;          // ball / polydisc / product of models
  bool is_polydisc_like() const;  // polydisc or product of 1-D balls/polydiscs

 private:
  Kind kind_ = Kind::Ball;
  int dim_ = 1;
  std::vector<DomainSpec> factors_;
  std::vector<SupportFunctional> functionals_;
  Point interior_;
  CoordBox box_;
};

/// Supporting functional at a boundary point; throws if `bd_point` is not
/// within `tol_bd * diameter` of the boundary. Polydisc ties break to the
/// lowest coordinate index of modulus >= 1 - tol.
SupportFunctional supporting_functional_at(const DomainSpec& dom, const Point& bd_point,
                                           double tol_bd = 1e-9);

struct LineDisjointReport {
  bool disjoint;        // numeric certificate, not a proof
  double min_margin;    // minimized membership margin along the line
  cx argmin;            // line parameter attaining it
};

/// Does the complex affine line through p and q miss the open domain?
/// Decided by minimizing the membership margin over the line parameter:
/// multi-start 41x41 grid on a disc of radius 2 diam / |p-q|, then local
/// golden descent (the margin is convex, so descent certifies the min).
LineDisjointReport complex_line_disjoint(const DomainSpec& dom, const Point& p, const Point& q);

/// Classify the open segment between boundary-closure points p, q.
SegmentLocation segment_location(const DomainSpec& dom, const Point& p, const Point& q,
                                 double tol_bd = 1e-9, int samples = 257);

/// Push a point onto the boundary along the ray from the anchor through it.
Point project_to_boundary(const DomainSpec& dom, const Point& p, double tol = 1e-12);

/// Boundary point hit by the ray anchor + t * dir, t > 0.
Point boundary_ray_hit(const DomainSpec& dom, const Point& from, const Point& dir,
                       double tol = 1e-12);

/// Seeded sample point, uniformly-ish inside the domain (rejection from the
/// box for hulls, radius-corrected polar sampling for models).
Point random_interior_point(const DomainSpec& dom, Rng& rng, double shrink = 1.0);

/// The 64-facet circumscribed polytope around the unit ball of C^2 used by
/// hull experiments: 16 supporting hyperplanes touching each coordinate
/// circle plus 32 at mixed contacts (e^{ia}, e^{ib})/sqrt(2).
DomainSpec ball_hull_64();

}  // namespace koblab
