#pragma once

#include <functional>
#include <iosfwd>

#include "koblab/domains.hpp"
#include "koblab/metric.hpp"

namespace koblab {

class not_implemented_error : public std::logic_error {
 public:
  explicit not_implemented_error(const std::string& what) : std::logic_error(what) {}
};

/// Parametrized curve in a domain with a certified geodesic-defect bound.
/// Segments live on [0,1]; rays on [0, inf) with unit Kobayashi speed.
struct GeodesicPath {
  enum class Kind { Segment, Ray };
  DomainSpec dom;
  std::function<Point(double)> sample;
  Kind kind = Kind::Segment;
  double defect = 0.0;
  double ray_horizon = 5.0;  // sampling window used for rays by default
};

/// Holomorphic isometry of the disc into the domain, with a left inverse.
struct ComplexGeodesic {
  DomainSpec dom;
  std::function<Point(cx)> phi;
  std::function<cx(const Point&)> rho;
};

/// Complex geodesic through two distinct points of a model domain
/// (ball, polydisc, products of model factors). Hull domains are not
/// supported and raise not_implemented_error.
ComplexGeodesic complex_geodesic_through(const DomainSpec& dom, const Point& z, const Point& w);

/// Geodesic segment from z to w, affinely parametrized on [0,1] with
/// constant Kobayashi speed. Models: exact complex-geodesic construction;
/// general domains: best analytic disc, defect = distance-bracket gap.
GeodesicPath geodesic_segment(const DomainSpec& dom, const Point& z, const Point& w,
                              const MetricOptions& opt = {});

/// The explicit bent bidisc geodesic joining (-r,0) to (r,0) through (0,r):
///   t in [0,1/2]: ( r(2t-1)/(1-2 r^2 t), 2tr )
///   t in (1/2,1]: ( r(2t-1)/(1+r^2(2t-2)), (2-2t) r ).
GeodesicPath bidisc_example_segment(double r);

/// Unit-speed geodesic ray from z0 landing at the boundary point p
/// (model domains only). Polydisc targets with several unimodular
/// coordinates drive the lowest index.
GeodesicPath geodesic_ray(const DomainSpec& dom, const Point& z0, const Point& p,
                          double tol_bd = 1e-9);

/// Max additivity violation |k(s,u) + k(u,t) - k(s,t)| over about `samples`
/// Chebyshev-spaced parameter triples. Exact distances on models, bracket
/// midpoints otherwise.
double check_geodesic(const GeodesicPath& path, int samples = 64,
                      const MetricOptions& opt = {});

/// Empirical modulus of continuity of geodesic rays from z0, tabulated on a
/// log mesh of parameter gaps. Diagnostic only.
struct EquicontinuityTable {
  std::vector<double> delta;
  std::vector<double> omega;          // max displacement over pairs with gap <= delta
  std::vector<double> per_ray_ratio;  // omega(delta_min)/delta_min per ray
  bool blowup_flag = false;
};
EquicontinuityTable equicontinuity_probe(const DomainSpec& dom, const Point& z0, int rays = 32,
                                         int mesh = 64);

/// CSV rows: t, Re/Im of each coordinate, boundary_distance, k to gamma(0).
void export_path_csv(const GeodesicPath& path, std::ostream& os, int samples = 129,
                     const MetricOptions& opt = {});

}  // namespace koblab
