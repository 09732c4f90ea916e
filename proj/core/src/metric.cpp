#include "koblab/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "koblab/polygon_metric.hpp"
#include "koblab/rng.hpp"

namespace koblab {

namespace {

Point subpoint(const Point& p, int offset, int dim) {
  return Point(std::vector<cx>(p.z.begin() + offset, p.z.begin() + offset + dim));
}

void check_pair(const DomainSpec& dom, const Point& z, const Point& w, const char* who) {
  if (z.dim() != dom.dim() || w.dim() != dom.dim())
    throw dimension_mismatch(std::string(who) + ": dimension mismatch");
  if (!dom.contains(z) || !dom.contains(w))
    throw std::domain_error(std::string(who) + ": point outside the domain");
}

// Radius of a disc centered at <box-free structural center> enclosing the
// image of the domain under z -> <z, u>. Returns {center, radius}.
std::pair<cx, double> linear_image_disc(const DomainSpec& dom, const Point& u) {
  switch (dom.kind()) {
    case DomainSpec::Kind::Ball:
      return {cx(0.0), u.norm()};
    case DomainSpec::Kind::Polydisc: {
      double r = 0.0;
      for (const cx& c : u.z) r += std::abs(c);
      return {cx(0.0), r};
    }
    case DomainSpec::Kind::Product: {
      cx c = 0.0;
      double r = 0.0;
      for (const auto& leaf : dom.flattened()) {
        Point ul = subpoint(u, leaf.offset, leaf.dom->dim());
        auto [lc, lr] = linear_image_disc(*leaf.dom, ul);
        c += lc;
        r += lr;
      }
      return {c, r};
    }
    case DomainSpec::Kind::Hull: {
      cx c = hermitian(dom.box().center, u);
      double r = 0.0;
      for (int j = 0; j < dom.dim(); ++j)
        r += dom.box().radius[static_cast<size_t>(j)] * std::abs(u[j]);
      return {c, r};
    }
  }
  return {cx(0.0), 1.0};
}

// Polygonal enclosure of the j-th coordinate projection of a hull, built
// from the functionals whose normal is supported on coordinate j alone.
// Dropping the other functionals only enlarges the set, so the polygon is a
// valid holomorphic target for the projection map. Empty when unbounded.
std::vector<cx> hull_projection_polygon(const DomainSpec& dom, int j) {
  std::vector<std::pair<cx, double>> halfplanes;
  for (const auto& f : dom.functionals()) {
    bool pure = std::abs(f.normal[j]) > 1e-13;
    for (int i = 0; i < dom.dim() && pure; ++i)
      if (i != j && std::abs(f.normal[i]) > 1e-13) pure = false;
    if (pure) halfplanes.push_back({std::conj(f.normal[j]), f.offset});
  }
  if (halfplanes.size() < 3) return {};
  const double bound =
      std::abs(dom.box().center[j]) + dom.box().radius[static_cast<size_t>(j)] + 10.0;
  auto poly = clip_halfplanes(halfplanes, bound);
  for (const cx& v : poly)
    if (std::max(std::abs(v.real()), std::abs(v.imag())) > bound * 0.999) return {};
  return poly;
}

struct PlanarCandidate {
  double value = 0.0;
};

double functional_candidates(const DomainSpec& dom, const SupportFunctional& f,
                             const Point& z, const Point& w) {
  const double n = f.normal.norm();
  Point u = (1.0 / n) * f.normal;
  const double bound = f.offset / n;
  const cx lz = hermitian(z, u), lw = hermitian(w, u);
  double best = 0.0;
  if (lz.real() < bound && lw.real() < bound)
    best = std::max(best, halfplane_distance(bound, lz, lw));
  auto [c, r] = linear_image_disc(dom, u);
  if (std::abs(lz - c) < r && std::abs(lw - c) < r)
    best = std::max(best, disc_distance(c, r, lz, lw));
  return best;
}

}  // namespace

double model_distance(const DomainSpec& dom, const Point& z, const Point& w) {
  check_pair(dom, z, w, "model_distance");
  switch (dom.kind()) {
    case DomainSpec::Kind::Ball:
      return ball_distance(z, w);
    case DomainSpec::Kind::Polydisc: {
      double m = 0.0;
      for (int j = 0; j < dom.dim(); ++j) m = std::max(m, poincare_distance(z[j], w[j]));
      return m;
    }
    case DomainSpec::Kind::Product: {
      double m = 0.0;
      for (const auto& leaf : dom.flattened())
        m = std::max(m, model_distance(*leaf.dom, subpoint(z, leaf.offset, leaf.dom->dim()),
                                       subpoint(w, leaf.offset, leaf.dom->dim())));
      return m;
    }
    case DomainSpec::Kind::Hull:
      throw std::invalid_argument("model_distance: no closed form for hull domains");
  }
  return 0.0;
}

double model_royden_norm(const DomainSpec& dom, const Point& z, const Point& v) {
  if (v.norm2() == 0.0) throw std::invalid_argument("model_royden_norm: zero vector");
  switch (dom.kind()) {
    case DomainSpec::Kind::Ball:
      return ball_royden_norm(z, v);
    case DomainSpec::Kind::Polydisc: {
      double m = 0.0;
      for (int j = 0; j < dom.dim(); ++j)
        m = std::max(m, std::abs(v[j]) / (1.0 - std::norm(z[j])));
      return m;
    }
    case DomainSpec::Kind::Product: {
      double m = 0.0;
      for (const auto& leaf : dom.flattened()) {
        Point lv = subpoint(v, leaf.offset, leaf.dom->dim());
        if (lv.norm2() == 0.0) continue;
        m = std::max(m, model_royden_norm(*leaf.dom, subpoint(z, leaf.offset, leaf.dom->dim()), lv));
      }
      return m;
    }
    case DomainSpec::Kind::Hull:
      throw std::invalid_argument("model_royden_norm: no closed form for hull domains");
  }
  return 0.0;
}

double caratheodory_lower_bound(const DomainSpec& dom, const Point& z, const Point& w,
                                const MetricOptions& opt) {
  check_pair(dom, z, w, "caratheodory_lower_bound");
  if (euclid_dist(z, w) == 0.0) return 0.0;

  double best = 0.0;

  // Model left inverses: exact extremal maps onto the disc.
  if (dom.is_model()) {
    best = std::max(best, model_distance(dom, z, w));
  } else if (dom.kind() == DomainSpec::Kind::Product) {
    for (const auto& leaf : dom.flattened()) {
      if (!leaf.dom->is_model()) continue;
      best = std::max(best, model_distance(*leaf.dom, subpoint(z, leaf.offset, leaf.dom->dim()),
                                           subpoint(w, leaf.offset, leaf.dom->dim())));
    }
  }

  // Polygonal enclosures of coordinate projections (hulls): the projection
  // is holomorphic into the polygon, whose metric is computable when the
  // polygon is regular (Schwarz-Christoffel) and disc-boundable otherwise.
  if (dom.kind() == DomainSpec::Kind::Hull) {
    for (int j = 0; j < dom.dim(); ++j) {
      auto poly = hull_projection_polygon(dom, j);
      if (poly.size() < 3) continue;
      if (auto gon = detect_regular_polygon(poly)) {
        if (gon->contains(z[j]) && gon->contains(w[j])) {
          RegularPolygonMap map(*gon);
          best = std::max(best, map.distance(z[j], w[j]));
          continue;
        }
      }
      cx c = 0.0;
      for (const cx& v : poly) c += v;
      c /= static_cast<double>(poly.size());
      double r = 0.0;
      for (const cx& v : poly) r = std::max(r, std::abs(v - c));
      if (std::abs(z[j] - c) < r && std::abs(w[j] - c) < r)
        best = std::max(best, disc_distance(c, r, z[j], w[j]));
    }
  }

  // Supporting functionals: the two chord-boundary contacts, coordinate
  // directions, and seeded random contacts. Each yields a half-plane target
  // and an enclosing-disc target.
  std::vector<SupportFunctional> funcs;
  const Point d = w - z;
  if (d.norm() > 1e-13) {
    for (const Point& hit :
         {boundary_ray_hit(dom, z, cx(-1.0) * d), boundary_ray_hit(dom, w, d)}) {
      funcs.push_back(supporting_functional_at(dom, hit, 1e-6));
    }
  }
  for (int j = 0; j < dom.dim(); ++j) {
    const Point dir = unit_coord(dom.dim(), j);
    const Point hit = boundary_ray_hit(dom, dom.anchor(), dir);
    funcs.push_back(supporting_functional_at(dom, hit, 1e-6));
  }
  Rng rng(opt.seed);
  for (int i = 0; i < opt.contact_samples; ++i) {
    const Point dir = rng.unit_vector(dom.dim());
    const Point hit = boundary_ray_hit(dom, dom.anchor(), dir);
    funcs.push_back(supporting_functional_at(dom, hit, 1e-6));
  }
  if (dom.kind() == DomainSpec::Kind::Hull) {
    for (const auto& f : dom.functionals()) funcs.push_back(f);
  }
  for (const auto& f : funcs) best = std::max(best, functional_candidates(dom, f, z, w));
  return best;
}

std::vector<cx> chord_cross_section(const DomainSpec& dom, const Point& z, const Point& w) {
  const Point d = w - z;
  if (d.norm() < 1e-14) return {};
  if (dom.kind() == DomainSpec::Kind::Hull) {
    std::vector<std::pair<cx, double>> halfplanes;
    for (const auto& f : dom.functionals()) {
      const cx a = hermitian(d, f.normal);
      const double b = f.offset - hermitian(z, f.normal).real();
      halfplanes.push_back({a, b});
    }
    double bound = 2.0 * dom.diameter() / d.norm() + 2.0;
    auto poly = clip_halfplanes(halfplanes, bound);
    if (poly.size() < 3) return poly;
    // Box discs |z_j + zeta d_j - c_j| <= r_j are usually slack; when one
    // binds, clip by the disc's inscribed 64-gon to stay conservative.
    for (int j = 0; j < dom.dim(); ++j) {
      if (std::abs(d[j]) < 1e-14) continue;
      const cx dc = (dom.box().center[j] - z[j]) / d[j];
      const double dr = dom.box().radius[static_cast<size_t>(j)] / std::abs(d[j]);
      bool binding = false;
      for (const cx& v : poly)
        if (std::abs(v - dc) > dr * (1.0 - 1e-12)) binding = true;
      if (!binding) continue;
      std::vector<std::pair<cx, double>> all = halfplanes;
      const double ap = dr * std::cos(std::numbers::pi / 64.0);
      for (int i = 0; i < 64; ++i) {
        const double th = 2.0 * std::numbers::pi * i / 64.0;
        const cx a = std::polar(1.0, -th);
        all.push_back({a, ap + (dc * a).real()});
      }
      poly = clip_halfplanes(all, bound);
      break;
    }
    return poly;
  }
  // Ray-cast boundary samples of {zeta : z + zeta d in dom}; their convex
  // hull is inscribed in the true cross-section.
  auto at = [&](cx t) { return z + t * d; };
  const int m = 128;
  std::vector<cx> pts;
  pts.reserve(m);
  const cx c0(0.5, 0.0);
  if (dom.margin(at(c0)) >= 0.0) return {};
  for (int i = 0; i < m; ++i) {
    const double th = 2.0 * std::numbers::pi * i / m;
    const cx dir = std::polar(1.0, th);
    double lo = 0.0, hi = 1.0;
    while (dom.margin(at(c0 + hi * dir)) < 0.0) hi *= 2.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (dom.margin(at(c0 + mid * dir)) < 0.0 ? lo : hi) = mid;
    }
    pts.push_back(c0 + lo * dir);
  }
  return pts;
}

namespace {

AnalyticDisc make_ball_slice(const Point& z, const Point& w) {
  const Point wp = ball_mobius(z, w);
  const double t = wp.norm();
  const Point e = (1.0 / t) * wp;
  AnalyticDisc disc;
  disc.map = [z, e](cx zeta) { return ball_mobius(z, zeta * e); };
  disc.pre_z = 0.0;
  disc.pre_w = t;
  disc.bound = std::atanh(t);
  return disc;
}

// Product disc: the leaf with the largest distance is traversed extremally,
// the others follow interpolating maps of smaller derivative.
AnalyticDisc make_product_disc(const DomainSpec& dom, const Point& z, const Point& w) {
  auto leaves = dom.flattened();
  const int n = dom.dim();
  double total = model_distance(dom, z, w);
  const double t = std::tanh(total);
  struct LeafMap {
    int offset;
    int dim;
    std::function<Point(cx)> f;
  };
  std::vector<LeafMap> maps;
  for (const auto& leaf : leaves) {
    Point lz = subpoint(z, leaf.offset, leaf.dom->dim());
    Point lw = subpoint(w, leaf.offset, leaf.dom->dim());
    if (leaf.dom->kind() == DomainSpec::Kind::Ball && leaf.dom->dim() > 1) {
      const Point wp = ball_mobius(lz, lw);
      const double tj = wp.norm();
      if (tj < 1e-15) {
        maps.push_back({leaf.offset, leaf.dom->dim(), [lz](cx) { return lz; }});
      } else {
        const Point e = (1.0 / t) * wp;  // |e| = tanh(leaf distance) / t <= 1
        maps.push_back({leaf.offset, leaf.dom->dim(),
                        [lz, e](cx zeta) { return ball_mobius(lz, zeta * e); }});
      }
    } else {
      // 1-D leaves (disc): Mobius interpolation m_{z_j}(lambda zeta).
      for (int j = 0; j < leaf.dom->dim(); ++j) {
        const cx a = lz[j];
        const cx tau = mobius_to_zero(a, lw[j]);
        const cx lambda = (t > 0.0) ? tau / t : cx(0.0);
        const int col = leaf.offset + j;
        maps.push_back({col, 1, [a, lambda](cx zeta) {
                          return Point{mobius_from_zero(a, lambda * zeta)};
                        }});
      }
    }
  }
  AnalyticDisc disc;
  disc.map = [maps, n](cx zeta) {
    Point out = zero_point(n);
    for (const auto& lm : maps) {
      Point v = lm.f(zeta);
      for (int j = 0; j < lm.dim; ++j) out[lm.offset + j] = v[j];
    }
    return out;
  };
  disc.pre_z = 0.0;
  disc.pre_w = t;
  disc.bound = total;
  return disc;
}

double poly_edge_distance(const std::vector<cx>& poly, cx p) {
  // Distance from an interior point to the polygon boundary: min over edges.
  double best = std::numeric_limits<double>::infinity();
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const cx a = poly[i], b = poly[(i + 1) % n];
    const cx ab = b - a;
    const double len2 = std::norm(ab);
    double t = len2 > 0.0 ? std::clamp((std::conj(ab) * (p - a)).real() / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, std::abs(p - (a + t * ab)));
  }
  return best;
}

bool point_in_poly(const std::vector<cx>& poly, cx p, double slack = 0.0) {
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const cx a = poly[i], b = poly[(i + 1) % n];
    const cx ab = b - a;
    const double cross = ab.real() * (p - a).imag() - ab.imag() * (p - a).real();
    if (cross < slack * std::abs(ab)) return false;  // CCW polygon
  }
  return true;
}

// Best disc inside the chord cross-section polygon containing params 0, 1.
std::optional<AnalyticDisc> chord_disc_candidate(const std::vector<cx>& poly, const Point& z,
                                                 const Point& d) {
  if (poly.size() < 3) return std::nullopt;
  auto value_at = [&](cx c) -> double {
    const double r = poly_edge_distance(poly, c) * (1.0 - 1e-12);
    if (!point_in_poly(poly, c)) return std::numeric_limits<double>::infinity();
    if (std::abs(c) >= r || std::abs(c - 1.0) >= r)
      return std::numeric_limits<double>::infinity();
    return disc_distance(c, r, 0.0, 1.0);
  };
  cx best_c(0.5, 0.0);
  double best = value_at(best_c);
  for (int i = 0; i <= 24; ++i) {
    for (int j = -4; j <= 4; ++j) {
      const cx c(-0.25 + 1.5 * i / 24.0, 0.35 * j / 4.0);
      const double v = value_at(c);
      if (v < best) {
        best = v;
        best_c = c;
      }
    }
  }
  if (!std::isfinite(best)) return std::nullopt;
  double step = 0.15;
  for (int sweep = 0; sweep < 40 && step > 1e-12; ++sweep) {
    bool improved = false;
    for (cx dir : {cx(1, 0), cx(-1, 0), cx(0, 1), cx(0, -1)}) {
      const double v = value_at(best_c + step * dir);
      if (v < best) {
        best = v;
        best_c += step * dir;
        improved = true;
        break;
      }
    }
    if (!improved) step *= 0.5;
  }
  const double r = poly_edge_distance(poly, best_c) * (1.0 - 1e-12);
  AnalyticDisc disc;
  const cx c = best_c;
  disc.map = [z, d, c, r](cx zeta) { return z + (c + r * zeta) * d; };
  disc.pre_z = (cx(0.0) - c) / r;
  disc.pre_w = (cx(1.0) - c) / r;
  disc.bound = best;
  return disc;
}

// Schwarz-Christoffel disc filling a regular cross-section polygon exactly.
std::optional<AnalyticDisc> gon_disc_candidate(const std::vector<cx>& poly, const Point& z,
                                               const Point& d) {
  auto gon = detect_regular_polygon(poly);
  if (!gon) return std::nullopt;
  RegularPolygon shrunk = *gon;
  shrunk.apothem *= 1.0 - 1e-9;
  if (!shrunk.contains(0.0) || !shrunk.contains(1.0)) return std::nullopt;
  auto map = std::make_shared<RegularPolygonMap>(shrunk);
  AnalyticDisc disc;
  disc.pre_z = map->inverse(0.0);
  disc.pre_w = map->inverse(1.0);
  disc.bound = poincare_distance(disc.pre_z, disc.pre_w);
  disc.map = [z, d, map](cx zeta) { return z + map->map(zeta) * d; };
  return disc;
}

// Degree-d polynomial disc h(zeta) = z + sum c_k zeta^k with h(0) = z and
// h(t) = w; the linear coefficient absorbs the interpolation constraint.
// Feasibility is certified on a 256-point boundary grid with a derivative-
// bound safety margin, which by convexity certifies the whole closed disc.
struct PolySearch {
  const DomainSpec& dom;
  Point z, w;
  int degree;
  long evals = 0;
  long budget;

  std::vector<Point> coeffs;  // c_2 .. c_degree

  bool feasible(double t, std::vector<Point>* out_coeffs = nullptr) {
    ++evals;
    Point c1 = w - z;
    for (int k = 2; k <= degree; ++k)
      c1 = c1 - std::pow(t, k) * coeffs[static_cast<size_t>(k - 2)];
    c1 = (1.0 / t) * c1;
    double deriv_bound = c1.norm();
    for (int k = 2; k <= degree; ++k)
      deriv_bound += k * coeffs[static_cast<size_t>(k - 2)].norm();
    const double gap = deriv_bound * (std::numbers::pi / 256.0);
    for (int i = 0; i < 256; ++i) {
      const double th = 2.0 * std::numbers::pi * i / 256.0;
      const cx zeta = std::polar(1.0 - 1e-7, th);
      Point h = z + zeta * c1;
      cx p = zeta;
      for (int k = 2; k <= degree; ++k) {
        p *= zeta;
        h = h + p * coeffs[static_cast<size_t>(k - 2)];
      }
      if (!dom.contains(h) || dom.boundary_distance(h) <= gap) return false;
    }
    if (out_coeffs) {
      out_coeffs->clear();
      out_coeffs->push_back(c1);
      for (const auto& c : coeffs) out_coeffs->push_back(c);
    }
    return true;
  }

  // Smallest feasible t by bisection between t_lo (infeasible or target) and 1.
  double min_feasible_t(double t_hint) {
    double hi = t_hint;
    if (!feasible(hi)) {
      while (hi < 1.0 - 1e-9 && !feasible(hi)) hi = 0.5 * (hi + 1.0);
      if (!feasible(hi)) return 2.0;  // no feasible disc in this direction
    }
    double lo = hi * 0.5;
    while (lo > 1e-6 && feasible(lo)) {
      hi = lo;
      lo *= 0.5;
    }
    for (int it = 0; it < 40 && evals < budget; ++it) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? hi : lo) = mid;
    }
    return hi;
  }
};

std::optional<AnalyticDisc> polynomial_disc_candidate(const DomainSpec& dom, const Point& z,
                                                      const Point& w, const MetricOptions& opt,
                                                      double t_hint) {
  PolySearch search{dom, z, w, std::max(1, opt.poly_degree), 0, std::max(100L, opt.budget), {}};
  const int ncoef = std::max(0, search.degree - 1);
  search.coeffs.assign(static_cast<size_t>(ncoef), zero_point(dom.dim()));

  double best_t = search.min_feasible_t(std::min(0.999, t_hint));
  if (best_t > 1.0) return std::nullopt;
  std::vector<Point> best_coeffs = search.coeffs;

  Rng rng(opt.seed);
  const double scale0 = 0.25 * euclid_dist(z, w);
  for (int restart = 0; restart < opt.restarts && search.evals < search.budget; ++restart) {
    search.coeffs.assign(static_cast<size_t>(ncoef), zero_point(dom.dim()));
    double scale = scale0;
    double cur_t = best_t;
    while (search.evals < search.budget && scale > 1e-6 * scale0) {
      bool improved = false;
      for (int ci = 0; ci < ncoef && search.evals < search.budget; ++ci) {
        for (int j = 0; j < dom.dim(); ++j) {
          for (cx delta : {cx(scale, 0), cx(-scale, 0), cx(0, scale), cx(0, -scale)}) {
            search.coeffs[static_cast<size_t>(ci)][j] += delta;
            const double t = search.min_feasible_t(cur_t);
            if (t < cur_t - 1e-12) {
              cur_t = t;
              improved = true;
            } else {
              search.coeffs[static_cast<size_t>(ci)][j] -= delta;
            }
            if (search.evals >= search.budget) break;
          }
        }
      }
      if (cur_t < best_t) {
        best_t = cur_t;
        best_coeffs = search.coeffs;
      }
      if (!improved) scale *= 0.5;
    }
  }

  // Rebuild the winning disc.
  search.coeffs = best_coeffs;
  std::vector<Point> full;
  if (!search.feasible(best_t, &full)) return std::nullopt;
  AnalyticDisc disc;
  const Point base = z;
  disc.map = [base, full](cx zeta) {
    Point h = base;
    cx p = 1.0;
    for (const auto& c : full) {
      p *= zeta;
      h = h + p * c;
    }
    return h;
  };
  disc.pre_z = 0.0;
  disc.pre_w = best_t;
  disc.bound = std::atanh(best_t);
  return disc;
}

AnalyticDisc fallback_chord_disc(const DomainSpec& dom, const Point& z, const Point& w) {
  // Thin disc around the straight segment; always feasible by convexity.
  const Point d = w - z;
  auto at = [&](cx t) { return z + t * d; };
  double r = 0.45;
  auto ok = [&](double rr) {
    for (int i = 0; i < 64; ++i) {
      const double th = 2.0 * std::numbers::pi * i / 64.0;
      if (!dom.contains(at(cx(0.5, 0.0) + rr * std::polar(1.0, th)))) return false;
    }
    return true;
  };
  while (r > 1e-9 && !ok(r + 0.5)) r *= 0.5;
  const double R = r + 0.5;
  AnalyticDisc disc;
  const cx c(0.5, 0.0);
  disc.map = [z, d, c, R](cx zeta) { return z + (c + R * zeta) * d; };
  disc.pre_z = (cx(0.0) - c) / R;
  disc.pre_w = (cx(1.0) - c) / R;
  disc.bound = poincare_distance(disc.pre_z, disc.pre_w);
  return disc;
}

AnalyticDisc best_disc_impl(const DomainSpec& dom, const Point& z, const Point& w,
                            const MetricOptions& opt) {
  check_pair(dom, z, w, "lempert_upper_bound");
  if (euclid_dist(z, w) == 0.0) {
    AnalyticDisc disc;
    disc.map = [z](cx) { return z; };
    disc.bound = 0.0;
    return disc;
  }

  std::optional<AnalyticDisc> best;
  auto consider = [&](std::optional<AnalyticDisc> cand) {
    if (cand && (!best || cand->bound < best->bound)) best = std::move(cand);
  };

  if (dom.kind() == DomainSpec::Kind::Ball) {
    consider(make_ball_slice(z, w));
  } else if (dom.is_model()) {
    consider(make_product_disc(dom, z, w));
  }

  auto poly = chord_cross_section(dom, z, w);
  if (poly.size() >= 3) {
    const Point d = w - z;
    consider(gon_disc_candidate(poly, z, d));
    consider(chord_disc_candidate(poly, z, d));
  }
  if (!dom.is_model()) {
    const double hint = best ? std::tanh(best->bound) : 0.9;
    consider(polynomial_disc_candidate(dom, z, w, opt, hint));
  }
  if (!best) best = fallback_chord_disc(dom, z, w);
  return *best;
}

}  // namespace

double lempert_upper_bound(const DomainSpec& dom, const Point& z, const Point& w,
                           const MetricOptions& opt) {
  return best_disc_impl(dom, z, w, opt).bound;
}

AnalyticDisc best_analytic_disc(const DomainSpec& dom, const Point& z, const Point& w,
                                const MetricOptions& opt) {
  return best_disc_impl(dom, z, w, opt);
}

DistanceBracket kobayashi_distance(const DomainSpec& dom, const Point& z, const Point& w,
                                   const MetricOptions& opt) {
  check_pair(dom, z, w, "kobayashi_distance");
  DistanceBracket b;
  if (dom.is_model()) {
    const double v = model_distance(dom, z, w);
    b.lo = b.hi = v;
    b.exact = true;
    return b;
  }
  if (dom.kind() == DomainSpec::Kind::Product) {
    // Max-combine per-factor brackets (distance on a product is the max of
    // the factor distances).
    double lo = 0.0, hi = 0.0;
    bool exact = true;
    int off = 0;
    for (const auto& f : dom.factors()) {
      const DistanceBracket fb = kobayashi_distance(f, subpoint(z, off, f.dim()),
                                                    subpoint(w, off, f.dim()), opt);
      lo = std::max(lo, fb.lo);
      hi = std::max(hi, fb.hi);
      exact = exact && fb.exact;
      off += f.dim();
    }
    b.lo = lo;
    b.hi = std::max(hi, lo);
    b.exact = exact || (b.hi - b.lo <= opt.tol_exact);
    return b;
  }
  // Canonical argument order keeps the bracket symmetric in (z, w).
  const Point *a = &z, *c = &w;
  for (int j = 0; j < dom.dim(); ++j) {
    if (z[j].real() != w[j].real()) {
      if (z[j].real() > w[j].real()) std::swap(a, c);
      break;
    }
    if (z[j].imag() != w[j].imag()) {
      if (z[j].imag() > w[j].imag()) std::swap(a, c);
      break;
    }
  }
  b.lo = caratheodory_lower_bound(dom, *a, *c, opt);
  b.hi = std::max(lempert_upper_bound(dom, *a, *c, opt), b.lo);
  b.exact = (b.hi - b.lo) <= opt.tol_exact;
  return b;
}

NormBracket kobayashi_royden_norm(const DomainSpec& dom, const Point& z, const Point& v,
                                  const MetricOptions& opt) {
  if (z.dim() != dom.dim() || v.dim() != dom.dim())
    throw dimension_mismatch("kobayashi_royden_norm: dimension mismatch");
  if (!dom.contains(z)) throw std::domain_error("kobayashi_royden_norm: point outside");
  if (v.norm2() == 0.0) throw std::invalid_argument("kobayashi_royden_norm: zero vector");
  NormBracket b;
  if (dom.is_model()) {
    b.lo = b.hi = model_royden_norm(dom, z, v);
    b.exact = true;
    return b;
  }

  // Upper: flat disc along v, radius = inscribed radius of the cross-section.
  const Point vhat = (1.0 / v.norm()) * v;
  auto poly = chord_cross_section(dom, z, z + vhat);  // param plane of z + zeta vhat
  double rho = 0.0;
  if (poly.size() >= 3) rho = poly_edge_distance(poly, 0.0);
  if (rho <= 0.0) rho = dom.boundary_distance(z);  // radius bound via euclidean distance
  b.hi = v.norm() / rho;

  // Lower: densities of planar targets through supporting functionals.
  double lo = 0.0;
  std::vector<SupportFunctional> funcs;
  const Point hit = boundary_ray_hit(dom, z, vhat);
  funcs.push_back(supporting_functional_at(dom, hit, 1e-6));
  Rng rng(opt.seed);
  for (int i = 0; i < opt.contact_samples / 2; ++i) {
    const Point dir = rng.unit_vector(dom.dim());
    funcs.push_back(supporting_functional_at(dom, boundary_ray_hit(dom, dom.anchor(), dir), 1e-6));
  }
  if (dom.kind() == DomainSpec::Kind::Hull)
    for (const auto& f : dom.functionals()) funcs.push_back(f);
  for (const auto& f : funcs) {
    const double n = f.normal.norm();
    const Point u = (1.0 / n) * f.normal;
    const cx lz = hermitian(z, u);
    const double lv = std::abs(hermitian(v, u));
    if (lv == 0.0) continue;
    const double bound = f.offset / n;
    if (lz.real() < bound) lo = std::max(lo, lv * halfplane_density(bound, lz));
    auto [c, r] = linear_image_disc(dom, u);
    if (std::abs(lz - c) < r) lo = std::max(lo, lv * disc_density(c, r, lz));
  }
  if (dom.kind() == DomainSpec::Kind::Hull) {
    for (int j = 0; j < dom.dim(); ++j) {
      if (std::abs(v[j]) == 0.0) continue;
      auto proj = hull_projection_polygon(dom, j);
      if (proj.size() < 3) continue;
      if (auto gon = detect_regular_polygon(proj)) {
        if (gon->contains(z[j])) {
          RegularPolygonMap map(*gon);
          lo = std::max(lo, std::abs(v[j]) * map.density(z[j]));
        }
      }
    }
  }
  b.lo = std::min(lo, b.hi);
  b.exact = (b.hi - b.lo) <= opt.tol_exact;
  return b;
}

double distance_value(const DomainSpec& dom, const Point& z, const Point& w,
                      const MetricOptions& opt) {
  if (dom.is_model()) return model_distance(dom, z, w);
  return bracket_mid(kobayashi_distance(dom, z, w, opt));
}

}  // namespace koblab
