#include "koblab/visibility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace koblab {

namespace {

Point blend(const Point& a, const Point& b, double lambda) {
  return cx(1.0 - lambda) * a + cx(lambda) * b;
}

// Endpoint sequences approaching a boundary point radially from the anchor.
Point approach_point(const DomainSpec& dom, const Point& target, int k) {
  const double lambda = 1.0 - std::pow(2.0, -static_cast<double>(k));
  Point z = blend(dom.anchor(), target, lambda);
  if (!dom.contains(z)) z = blend(dom.anchor(), z, 0.999);
  return z;
}

struct FamilyTrace {
  std::vector<ApproachSample> samples;
  bool escaping = false;
  double radius = 0.0;  // max of the samples
};

FamilyTrace aggregate(const std::vector<ApproachSample>& samples, double K_radius) {
  FamilyTrace tr;
  tr.samples = samples;
  for (const auto& s : samples) tr.radius = std::max(tr.radius, s.closest);
  const size_t n = samples.size();
  if (n >= 7) {
    bool monotone = true;
    for (size_t i = n - 6; i < n; ++i)
      if (samples[i].closest <= samples[i - 1].closest) monotone = false;
    tr.escaping = monotone && samples.back().closest > std::max(2.0, K_radius);
  }
  return tr;
}

// Bent geodesic through a lifted midpoint: the driving coordinate traverses
// its geodesic while a slack coordinate rises to a peak at half the total
// distance and comes back. On product domains this is a genuine geodesic
// for the max distance, and its peak escapes with the endpoints.
std::optional<GeodesicPath> tent_segment(const DomainSpec& dom, const Point& z, const Point& w,
                                         const MetricOptions& opt) {
  if (!dom.is_polydisc_like()) return std::nullopt;
  const int n = dom.dim();
  const double total = model_distance(dom, z, w);
  if (total < 1e-9) return std::nullopt;
  const double half = 0.5 * total;
  int driver = -1, slack = -1;
  double dmax = -1.0, dmin = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const double dj = poincare_distance(z[j], w[j]);
    if (dj > dmax) {
      dmax = dj;
      driver = j;
    }
    if (dj < dmin) {
      dmin = dj;
      slack = j;
    }
  }
  if (driver == slack || dmin > half * (1.0 - 1e-9)) return std::nullopt;

  // Peak: from the slack-coordinate geodesic midpoint, push toward the
  // nearest boundary direction until the peak is `half` away from both ends.
  const cx mid = disc_geodesic_point(z[slack], w[slack], 0.5);
  const double room = half - 0.5 * dmin;
  cx dir = (std::abs(mid) > 1e-12) ? mid / std::abs(mid) : cx(1.0, 0.0);
  cx peak = mobius_from_zero(mid, std::tanh(room) * dir);
  // Keep k(z_s, peak) <= half and k(w_s, peak) <= half (triangle gives it,
  // up to rounding; nudge inward if needed).
  for (int guard = 0; guard < 60; ++guard) {
    if (poincare_distance(z[slack], peak) <= half + 1e-12 &&
        poincare_distance(w[slack], peak) <= half + 1e-12)
      break;
    peak = mobius_from_zero(mid, 0.95 * mobius_to_zero(mid, peak));
  }
  Point m = zero_point(n);
  for (int j = 0; j < n; ++j) {
    if (j == slack)
      m[j] = peak;
    else
      m[j] = disc_geodesic_point(z[j], w[j], 0.5);
  }
  GeodesicPath first = geodesic_segment(dom, z, m, opt);
  GeodesicPath second = geodesic_segment(dom, m, w, opt);
  GeodesicPath path;
  path.dom = dom;
  path.kind = GeodesicPath::Kind::Segment;
  auto f1 = first.sample, f2 = second.sample;
  path.sample = [f1, f2](double t) { return t <= 0.5 ? f1(2.0 * t) : f2(2.0 * t - 1.0); };
  path.defect = check_geodesic(path, 24, opt);
  return path;
}

}  // namespace

double closest_approach(const GeodesicPath& path, const Point& base, double* argmin_t,
                        const MetricOptions& opt) {
  if (!path.dom.contains(base))
    throw std::domain_error("closest_approach: base point outside the domain");
  const double b = (path.kind == GeodesicPath::Kind::Ray) ? path.ray_horizon : 1.0;
  auto f = [&](double t) { return distance_value(path.dom, path.sample(t), base, opt); };

  const int grid = 129;
  double best = std::numeric_limits<double>::infinity(), best_t = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = b * i / (grid - 1);
    const double v = f(t);
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  double lo = std::max(0.0, best_t - b / (grid - 1));
  double hi = std::min(b, best_t + b / (grid - 1));
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c1 = hi - gr * (hi - lo), c2 = lo + gr * (hi - lo);
  double f1 = f(c1), f2 = f(c2);
  for (int it = 0; it < 200; ++it) {
    if ((hi - lo) <= 1e-4 * std::max(1.0, b) && std::abs(f1 - f2) <= 1e-9) break;
    if (f1 < f2) {
      hi = c2;
      c2 = c1;
      f2 = f1;
      c1 = hi - gr * (hi - lo);
      f1 = f(c1);
    } else {
      lo = c1;
      c1 = c2;
      f1 = f2;
      c2 = lo + gr * (hi - lo);
      f2 = f(c2);
    }
  }
  const double tm = 0.5 * (lo + hi);
  const std::pair<double, double> finals[] = {{tm, f(tm)}, {c1, f1}, {c2, f2}};
  for (const auto& [t, v] : finals) {
    if (v < best) {
      best = v;
      best_t = t;
    }
  }
  if (argmin_t) *argmin_t = best_t;
  return best;
}

VisibilityVerdict strong_visibility_probe(const DomainSpec& dom, const Point& p, const Point& q,
                                          double K_radius, int families, int sequence_len,
                                          const MetricOptions& opt) {
  if (euclid_dist(p, q) < 1e-12)
    throw std::invalid_argument("strong_visibility_probe: p == q");
  VisibilityVerdict verdict;
  verdict.p = p;
  verdict.q = q;
  verdict.mode = VisibilityMode::Strong;
  verdict.base = dom.anchor();

  std::vector<FamilyTrace> traces;
  for (int fam = 0; fam < families; ++fam) {
    std::vector<ApproachSample> samples;
    for (int k = 1; k <= sequence_len; ++k) {
      const double r_k = 1.0 - std::pow(2.0, -static_cast<double>(k));
      Point zk = approach_point(dom, p, k);
      Point wk = approach_point(dom, q, k);
      if (fam == 2) {
        // Tangential variant: rotate each coordinate's phase by 2^-k.
        const double th = std::pow(2.0, -static_cast<double>(k));
        for (int j = 0; j < dom.dim(); ++j) zk[j] *= std::polar(1.0, th);
        if (!dom.contains(zk)) zk = blend(dom.anchor(), zk, 0.999);
      }
      std::optional<GeodesicPath> path;
      if (fam == 1) {
        path = tent_segment(dom, zk, wk, opt);
        if (!path) break;  // family unavailable on this domain/pair
      } else {
        path = geodesic_segment(dom, zk, wk, opt);
      }
      ApproachSample s;
      s.family = fam;
      s.k = k;
      s.r_k = r_k;
      s.closest = closest_approach(*path, verdict.base, &s.argmin_t, opt);
      samples.push_back(s);
    }
    if (!samples.empty()) traces.push_back(aggregate(samples, K_radius));
  }

  double radius = 0.0;
  bool escaping = false;
  for (const auto& tr : traces) {
    radius = std::max(radius, tr.radius);
    escaping = escaping || tr.escaping;
    for (const auto& s : tr.samples) verdict.evidence.push_back(s);
  }
  verdict.outcome = escaping ? VisibilityVerdict::Outcome::Escaping
                             : VisibilityVerdict::Outcome::FiniteRadius;
  verdict.approach_radius = radius;
  return verdict;
}

VisibilityVerdict essential_visibility_probe(const DomainSpec& dom, const Point& p, const Point& q,
                                             int sequence_len, const MetricOptions& opt) {
  if (euclid_dist(p, q) < 1e-12)
    throw std::invalid_argument("essential_visibility_probe: p == q");
  VisibilityVerdict verdict;
  verdict.p = p;
  verdict.q = q;
  verdict.mode = VisibilityMode::Essential;
  verdict.base = dom.anchor();

  std::vector<ApproachSample> best_per_k;
  for (int k = 1; k <= sequence_len; ++k) {
    const Point zk = approach_point(dom, p, k);
    const Point wk = approach_point(dom, q, k);
    double best = std::numeric_limits<double>::infinity();
    double best_t = 0.0;
    // Candidate search: the canonical segment plus bent variants; the probe
    // keeps the best (closest to the base) admissible geodesic.
    {
      GeodesicPath canonical = geodesic_segment(dom, zk, wk, opt);
      double t;
      const double v = closest_approach(canonical, verdict.base, &t, opt);
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
    if (auto tent = tent_segment(dom, zk, wk, opt)) {
      double t;
      const double v = closest_approach(*tent, verdict.base, &t, opt);
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
    ApproachSample s;
    s.family = 0;
    s.k = k;
    s.r_k = 1.0 - std::pow(2.0, -static_cast<double>(k));
    s.closest = best;
    s.argmin_t = best_t;
    best_per_k.push_back(s);
  }
  verdict.evidence = best_per_k;
  const FamilyTrace tr = aggregate(best_per_k, 2.0);
  verdict.approach_radius = tr.radius;
  verdict.outcome = tr.escaping ? VisibilityVerdict::Outcome::Escaping
                                : VisibilityVerdict::Outcome::FiniteRadius;
  return verdict;
}

VisibilityVerdict complex_visibility_probe(const DomainSpec& dom, const Point& p, const Point& q,
                                           int sequence_len, const MetricOptions& opt) {
  if (!dom.is_model())
    throw not_implemented_error("complex_visibility_probe: models only");
  if (euclid_dist(p, q) < 1e-12)
    throw std::invalid_argument("complex_visibility_probe: p == q");
  VisibilityVerdict verdict;
  verdict.p = p;
  verdict.q = q;
  verdict.mode = VisibilityMode::Complex;
  verdict.base = dom.anchor();

  std::vector<ApproachSample> samples;
  for (int k = 1; k <= sequence_len; ++k) {
    const Point zk = approach_point(dom, p, k);
    const Point wk = approach_point(dom, q, k);
    if (euclid_dist(zk, wk) < 1e-12) continue;  // degenerate pair, skip
    const ComplexGeodesic cg = complex_geodesic_through(dom, zk, wk);
    double best = std::numeric_limits<double>::infinity();
    for (int ir = 0; ir <= 16; ++ir) {
      for (int ia = 0; ia < 32; ++ia) {
        const double r = 0.995 * ir / 16.0;
        const cx zeta = std::polar(r, 2.0 * std::numbers::pi * ia / 32.0);
        best = std::min(best, distance_value(dom, cg.phi(zeta), verdict.base, opt));
        if (ir == 0) break;
      }
    }
    // The geodesic disc contains the whole hyperbolic segment between the
    // endpoint preimages; sample it, since the coarse grid cannot reach the
    // near-boundary preimages as the endpoints escape.
    const double total = model_distance(dom, zk, wk);
    for (int iu = 0; iu <= 64; ++iu) {
      const cx zeta = std::tanh(total * iu / 64.0);
      best = std::min(best, distance_value(dom, cg.phi(zeta), verdict.base, opt));
    }
    ApproachSample s;
    s.family = 0;
    s.k = k;
    s.r_k = 1.0 - std::pow(2.0, -static_cast<double>(k));
    s.closest = best;
    samples.push_back(s);
  }
  verdict.evidence = samples;
  const FamilyTrace tr = aggregate(samples, 2.0);
  verdict.approach_radius = tr.radius;
  verdict.outcome = tr.escaping ? VisibilityVerdict::Outcome::Escaping
                                : VisibilityVerdict::Outcome::FiniteRadius;
  return verdict;
}

LimitSetEstimate limit_set_estimate(const std::vector<GeodesicPath>& paths, double eps_cluster,
                                    double h_cluster, int samples_per_path) {
  LimitSetEstimate est;
  if (paths.empty()) return est;
  const DomainSpec& dom = paths.front().dom;
  const double diam = dom.diameter();
  est.eps_cluster = eps_cluster > 0.0 ? eps_cluster : 1e-3 * diam;
  est.h_cluster = h_cluster > 0.0 ? h_cluster : 1e-2 * diam;

  std::vector<Point> candidates;
  std::vector<int> cand_source;
  for (size_t pi = 0; pi < paths.size(); ++pi) {
    const auto& path = paths[pi];
    const double b = (path.kind == GeodesicPath::Kind::Ray) ? path.ray_horizon : 1.0;
    for (int i = 0; i < samples_per_path; ++i) {
      const double t = b * i / (samples_per_path - 1);
      const Point x = path.sample(t);
      if (dom.boundary_distance(x) <= est.eps_cluster) {
        candidates.push_back(x);
        cand_source.push_back(static_cast<int>(pi));
      }
    }
  }
  if (candidates.empty()) return est;

  // Farthest-point selection at resolution h, then nearest-rep assignment.
  std::vector<size_t> reps;
  reps.push_back(0);
  while (true) {
    double far = -1.0;
    size_t arg = 0;
    for (size_t i = 0; i < candidates.size(); ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (size_t r : reps) d = std::min(d, euclid_dist(candidates[i], candidates[r]));
      if (d > far) {
        far = d;
        arg = i;
      }
    }
    if (far <= est.h_cluster) break;
    reps.push_back(arg);
  }
  est.multiplicity.assign(reps.size(), 0);
  for (const auto& c : candidates) {
    double bd = std::numeric_limits<double>::infinity();
    size_t arg = 0;
    for (size_t r = 0; r < reps.size(); ++r) {
      const double d = euclid_dist(c, candidates[reps[r]]);
      if (d < bd) {
        bd = d;
        arg = r;
      }
    }
    est.multiplicity[arg] += 1;
  }
  for (size_t r : reps) {
    est.points.push_back(project_to_boundary(dom, candidates[r]));
    est.source.push_back(cand_source[r]);
  }
  return est;
}

std::vector<PairClassification> conjecture1_classify(const DomainSpec& dom,
                                                     const LimitSetEstimate& gamma) {
  if (gamma.points.empty())
    throw std::invalid_argument("conjecture1_classify: empty limit set");
  std::vector<PairClassification> out;
  for (size_t i = 0; i < gamma.points.size(); ++i) {
    for (size_t j = i + 1; j < gamma.points.size(); ++j) {
      const Point& p = gamma.points[i];
      const Point& q = gamma.points[j];
      if (euclid_dist(p, q) < 1e-9) continue;
      PairClassification pc;
      pc.p = p;
      pc.q = q;
      const SegmentLocation loc = segment_location(dom, p, q);
      std::ostringstream note;
      if (loc == SegmentLocation::Interior) {
        pc.result = PairCase::Case1;
        note << "open chord inside the domain";
      } else if (loc == SegmentLocation::Boundary) {
        const LineDisjointReport rep = complex_line_disjoint(dom, p, q);
        if (rep.disjoint) {
          pc.result = PairCase::Case2;
          note << "chord in the boundary; complex line margin " << rep.min_margin;
        } else {
          pc.result = PairCase::Violation;
          note << "chord in the boundary but the complex line enters the domain (margin "
               << rep.min_margin << " at parameter " << rep.argmin.real() << "+"
               << rep.argmin.imag() << "i)";
        }
      } else {
        pc.result = PairCase::Violation;
        note << "segment neither interior nor boundary (mixed), numerical trouble";
      }
      pc.witness = note.str();
      out.push_back(pc);
    }
  }
  return out;
}

}  // namespace koblab
