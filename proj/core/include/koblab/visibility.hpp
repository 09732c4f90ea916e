#pragma once

#include <string>

#include "koblab/geodesics.hpp"

namespace koblab {

enum class VisibilityMode { Essential, Strong, Complex };

struct ApproachSample {
  int family = 0;
  int k = 0;
  double r_k = 0.0;     // boundary proximity parameter of the k-th endpoints
  double closest = 0.0; // closest Kobayashi approach to the base point
  double argmin_t = 0.0;
};

/// Probe verdict. The compact set is a closed Kobayashi ball around `base`;
/// its radius is the probe's output, not an input guess. "Escaping" needs
/// monotone growth over at least six proximity doublings and a final value
/// above 2.0; anything weaker stays Inconclusive.
struct VisibilityVerdict {
  enum class Outcome { FiniteRadius, Escaping, Inconclusive };
  Point p, q;
  VisibilityMode mode = VisibilityMode::Essential;
  Outcome outcome = Outcome::Inconclusive;
  double approach_radius = 0.0;  // meaningful for FiniteRadius
  Point base;
  std::vector<ApproachSample> evidence;
};

/// Min over a refined parameter grid of the Kobayashi distance from the
/// path to `base`; refined until the minimizer window is below 1e-4 in t
/// and the value window is below 1e-9.
double closest_approach(const GeodesicPath& path, const Point& base,
                        double* argmin_t = nullptr, const MetricOptions& opt = {});

/// Tests `families` sequences of geodesic segments with endpoints tending to
/// p and q, including bent product constructions that exploit boundary
/// discs; any escaping family refutes a uniform compact set.
VisibilityVerdict strong_visibility_probe(const DomainSpec& dom, const Point& p, const Point& q,
                                          double K_radius = 2.0, int families = 3,
                                          int sequence_len = 14, const MetricOptions& opt = {});

/// Searches per endpoint pair for some geodesic segment meeting a fixed
/// Kobayashi ball; finite when the search succeeds uniformly along the
/// sequences.
VisibilityVerdict essential_visibility_probe(const DomainSpec& dom, const Point& p, const Point& q,
                                             int sequence_len = 20, const MetricOptions& opt = {});

/// Complex geodesics through the endpoint sequences; verdict on the min over
/// a disc grid of the distance from the geodesic disc to the base point.
VisibilityVerdict complex_visibility_probe(const DomainSpec& dom, const Point& p, const Point& q,
                                           int sequence_len = 14, const MetricOptions& opt = {});

/// Boundary cluster points of a family of paths.
struct LimitSetEstimate {
  std::vector<Point> points;        // representatives, projected to the boundary
  std::vector<int> multiplicity;    // sample counts assigned to each representative
  std::vector<int> source;          // index of a witnessing path
  double eps_cluster = 0.0;
  double h_cluster = 0.0;
};

/// Clusters near-boundary path samples by farthest-point selection.
/// Defaults: eps = 1e-3 diam (boundary proximity), h = 1e-2 diam (resolution).
LimitSetEstimate limit_set_estimate(const std::vector<GeodesicPath>& paths,
                                    double eps_cluster = -1.0, double h_cluster = -1.0,
                                    int samples_per_path = 512);

enum class PairCase { Case1, Case2, Violation };

struct PairClassification {
  Point p, q;
  PairCase result = PairCase::Violation;
  std::string witness;  // human-readable evidence for the classification
};

/// The boundary-pair dichotomy: for each pair of distinct limit points,
/// either the open chord lies inside the domain (Case1), or the closed
/// chord lies in the boundary and its complex line misses the domain
/// (Case2); anything else is reported as a Violation with its witness.
std::vector<PairClassification> conjecture1_classify(const DomainSpec& dom,
                                                     const LimitSetEstimate& gamma);

}  // namespace koblab
