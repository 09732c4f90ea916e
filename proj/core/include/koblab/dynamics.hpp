#pragma once

#include <memory>
#include <string>

#include "koblab/geodesics.hpp"
#include "koblab/metric.hpp"

namespace koblab {

/// Holomorphic map between model-style domains, built from a closed set of
/// primitives. Construction samples 200 interior points and rejects maps
/// whose images leave the declared output domain.
class MapExpr {
 public:
  static MapExpr disc_mobius(cx a, double theta);
  /// Automorphism with boundary fixed points +-sigma, attracting at sigma;
  /// the orbit of 0 advances, from 0, to tanh(step/2) sigma.
  static MapExpr disc_hyperbolic(cx sigma, double step);
  /// Parabolic automorphism with Denjoy-Wolff point sigma (upper-half-plane
  /// translation by `step` conjugated back to the disc).
  static MapExpr disc_parabolic(cx sigma, double step);
  static MapExpr disc_power(int exponent);
  /// Coordinate-wise product of 1-D maps, acting on the polydisc.
  static MapExpr coord_map(std::vector<MapExpr> components);
  /// Mobius involution of the ball swapping `center` and 0.
  static MapExpr ball_automorphism(Point center);
  /// z -> M z as a self-map of `dom` (construction-checked).
  static MapExpr linear(std::vector<std::vector<cx>> matrix, DomainSpec dom);
  /// Stages applied first-to-last.
  static MapExpr compose(std::vector<MapExpr> stages);
  /// phi o f o rho for a complex geodesic phi with left inverse rho.
  static MapExpr conjugate(const ComplexGeodesic& geodesic, MapExpr inner_1d);
  /// Coordinate projection of a model domain into the disc.
  static MapExpr projection(const DomainSpec& dom, int index);

  const DomainSpec& input_domain() const { return impl_->in; }
  const DomainSpec& output_domain() const { return impl_->out; }
  const std::string& describe() const { return impl_->desc; }

  Point apply(const Point& z) const { return impl_->f(z); }

 private:
  struct Impl {
    DomainSpec in, out;
    std::function<Point(const Point&)> f;
    std::string desc;
  };
  explicit MapExpr(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  static MapExpr checked(Impl impl);
  std::shared_ptr<const Impl> impl_;
};

class map_escape_error : public std::runtime_error {
 public:
  explicit map_escape_error(const std::string& what) : std::runtime_error(what) {}
};

/// Evaluate F at z; throws map_escape_error if the image leaves the output
/// domain beyond the boundary tolerance.
Point evaluate(const MapExpr& F, const Point& z, double tol_bd = 1e-9);

/// Orbit of a self-map with per-step distances to the start and record
/// indices (strict prefix-max improvements; the first index is always a
/// record). Truncates gracefully when iterates reach the boundary.
struct OrbitRecord {
  Point z0;
  std::vector<Point> points;          // F^0(z0) .. F^n(z0), all strictly inside
  std::vector<double> dist_to_start;  // aligned with points, first entry 0
  std::vector<int> record_indices;
  bool truncated = false;
  std::string truncate_reason;
};

OrbitRecord iterate_orbit(const MapExpr& F, const Point& z0, int n_max,
                          const MetricOptions& opt = {});

/// Record indices of a distance profile (profile[0] corresponds to n = 1).
std::vector<int> record_indices_of(const std::vector<double>& profile);

/// Near-boundary orbit clusters merged across starts; empty when every
/// orbit stays eps-interior.
struct TargetSetEstimate {
  std::vector<Point> points;  // cluster centroids (not projected)
  std::vector<int> multiplicity;
  double eps = 0.0;
  double h_cluster = 0.0;
};
TargetSetEstimate target_set_estimate(const MapExpr& F, const std::vector<Point>& starts,
                                      int n_max, double eps, const MetricOptions& opt = {});

/// Sequential horosphere data: base point, escaping sequence, radius.
struct HorosphereSpec {
  DomainSpec dom;
  Point z0;
  std::vector<Point> sequence;
  double R = 1.0;
};

struct HorosphereEstimate {
  double limsup = 0.0;       // max over the examined tail
  bool member = false;       // limsup < (1/2) log R - tol
  bool monotone_tail = false;
  std::vector<double> tail_values;
};

/// Tail estimate of limsup_n [k(z, z_n) - k(z0, z_n)] over the last `tail`
/// entries; membership compares against (1/2) log R.
HorosphereEstimate horosphere_limsup(const HorosphereSpec& spec, const Point& z, int tail,
                                     double tol_horo = 1e-6, const MetricOptions& opt = {});

struct InvarianceReport {
  bool pass = false;
  bool inconclusive = false;  // orbit did not escape: fixed points likely
  double max_estimate = 0.0;
  std::vector<double> per_n;  // estimate for each n = 1..n_checked
  int n_checked = 0;
};

/// Checks that every orbit point lies in the zero-radius sequential
/// horosphere of the record subsequence: the tail estimate must stay below
/// tol for every n up to n_max - 2 * tail.
InvarianceReport horosphere_orbit_invariance_check(const MapExpr& F, const Point& z0, int n_max,
                                                   int tail, double tol_horo = 1e-6,
                                                   const MetricOptions& opt = {});

/// Record-limit data feeding the polydisc Julia inequality: q_m is the last
/// computed F^{n_k - m}(z0) with near-unimodular coordinates snapped to the
/// circle, sigma the limit phase of the driving coordinate, j0 that
/// coordinate, residual the gap between the last two surrogates.
struct JuliaData {
  Point q_m;
  cx sigma = 1.0;
  int j0 = 0;
  double residual = 0.0;
};
JuliaData julia_data_from_records(const MapExpr& F, const Point& z0, int n_max, int m,
                                  const MetricOptions& opt = {});

struct JuliaReport {
  bool pass = false;
  bool inconclusive = false;  // precondition failed (map has fixed points)
  double max_violation = 0.0; // max over the grid of LHS - RHS
  int grid = 0;
  std::string limit_note;     // empirical classification of the limit map
};

/// Evaluates |sigma - pi_j0(F^m(zeta q_m))|^2 / (1 - |pi_j0(...)|^2)
/// against |sigma - zeta|^2 / (1 - |zeta|^2) on a zeta grid.
JuliaReport julia_polydisc_check(const MapExpr& F, int m, const Point& q_m, cx sigma, int j0,
                                 int zeta_samples, double tol_julia = 1e-8);

struct RadialLimsup {
  double estimate = 0.0;  // max of |1 - f(r sigma)| / (1 - r) over the last grid entries
  bool diverged = false;
  std::vector<double> values;
};

/// Boundary dilation estimate of a disc-valued map along r -> 1 on the ray
/// r sigma; diverges for maps with boundary value away from 1.
RadialLimsup radial_limsup_estimate(const MapExpr& f, const Point& sigma,
                                    const std::vector<double>& r_grid = {});

struct SliceContainmentReport {
  bool pass = false;
  std::vector<bool> per_point;
};

/// Abate-Raissy slice containment: each cluster point must match xi on some
/// unimodular coordinate, or itself be unimodular where |xi_j| < 1.
SliceContainmentReport slice_containment_check(const std::vector<Point>& clusters,
                                               const Point& xi, double tol = 1e-4);

struct DenjoyWolffVerdict {
  enum class Kind { ConvergesTo, MultiplePoints, Inconclusive };
  Kind kind = Kind::Inconclusive;
  Point point;                 // for ConvergesTo
  std::vector<Point> cluster;  // for MultiplePoints
  std::string note;
};

/// ConvergesTo(p) when every orbit tail from every start settles within eps
/// of a common boundary point; MultiplePoints when well-separated clusters
/// persist; Inconclusive otherwise (bounded orbits included).
DenjoyWolffVerdict denjoy_wolff_verdict(const MapExpr& F, const std::vector<Point>& starts,
                                        int n_max, double eps, const MetricOptions& opt = {});

}  // namespace koblab
