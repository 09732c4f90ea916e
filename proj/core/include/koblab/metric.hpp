#pragma once

#include <functional>
#include <optional>

#include "koblab/domains.hpp"
#include "koblab/poincare.hpp"
#include "koblab/types.hpp"

namespace koblab {

/// Two-sided distance estimate: lo is a holomorphic-contraction lower bound,
/// hi comes from an explicit analytic disc, so lo <= k <= hi always.
struct DistanceBracket {
  double lo = 0.0;
  double hi = 0.0;
  bool exact = false;
};

struct NormBracket {
  double lo = 0.0;
  double hi = 0.0;
  bool exact = false;
};

inline double bracket_mid(const DistanceBracket& b) { return 0.5 * (b.lo + b.hi); }

struct MetricOptions {
  long budget = kDefaultBudget;  // objective evaluations for the disc search
  uint64_t seed = 1;
  int contact_samples = 64;  // random supporting-functional contacts
  int poly_degree = 4;       // polynomial disc degree for the refiner
  int restarts = 3;
  double tol_exact = 1e-6;
};

/// Closed-form distance; throws std::invalid_argument for non-model domains.
double model_distance(const DomainSpec& dom, const Point& z, const Point& w);
/// Closed-form Kobayashi-Royden norm on models.
double model_royden_norm(const DomainSpec& dom, const Point& z, const Point& v);

/// Max over a family of holomorphic maps into computable planar targets
/// (half-planes and enclosing discs from supporting functionals, polygonal
/// enclosures of coordinate projections, model left inverses).
double caratheodory_lower_bound(const DomainSpec& dom, const Point& z, const Point& w,
                                const MetricOptions& opt = {});

/// Min over feasible analytic discs through z and w of the disc-parameter
/// distance; always an upper bound for the distance on convex domains.
double lempert_upper_bound(const DomainSpec& dom, const Point& z, const Point& w,
                           const MetricOptions& opt = {});

/// Exact on models; certified [lower, upper] bracket elsewhere.
DistanceBracket kobayashi_distance(const DomainSpec& dom, const Point& z, const Point& w,
                                   const MetricOptions& opt = {});

/// Exact on models; bracket elsewhere (flat-disc upper, functional lower).
NormBracket kobayashi_royden_norm(const DomainSpec& dom, const Point& z, const Point& v,
                                  const MetricOptions& opt = {});

/// Exact value on models, bracket midpoint otherwise.
double distance_value(const DomainSpec& dom, const Point& z, const Point& w,
                      const MetricOptions& opt = {});

/// Analytic disc D -> domain with two marked disc preimages; `bound` is the
/// Poincare distance of the preimages.
struct AnalyticDisc {
  std::function<Point(cx)> map;
  cx pre_z = 0.0;
  cx pre_w = 0.0;
  double bound = 0.0;
};

/// The winning disc behind lempert_upper_bound (used to build geodesic
/// segments on general domains). Falls back to the chord disc.
AnalyticDisc best_analytic_disc(const DomainSpec& dom, const Point& z, const Point& w,
                                const MetricOptions& opt = {});

/// Inscribed polygon (exact for hulls, ray-cast for other domains) of the
/// chord cross-section {zeta : z + zeta (w - z) in domain}, vertices CCW.
/// The points z, w sit at parameters 0 and 1.
std::vector<cx> chord_cross_section(const DomainSpec& dom, const Point& z, const Point& w);

}  // namespace koblab
