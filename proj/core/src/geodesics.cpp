#include "koblab/geodesics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace koblab {

namespace {

Point subpoint(const Point& p, int offset, int dim) {
  return Point(std::vector<cx>(p.z.begin() + offset, p.z.begin() + offset + dim));
}

cx normalize_unit(cx v) {
  const double a = std::abs(v);
  if (a == 0.0) throw std::invalid_argument("normalize_unit: zero");
  return v / a;
}

std::vector<double> chebyshev_lobatto(int n, double a, double b) {
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = std::cos(std::numbers::pi * i / (n - 1));  // [-1,1], decreasing
    out[static_cast<size_t>(n - 1 - i)] = a + 0.5 * (b - a) * (x + 1.0);
  }
  return out;
}

// Atomic slices of a model domain: polydiscs split into 1-D disc
// coordinates, higher-dimensional balls stay whole.
struct ModelUnit {
  int offset;
  int dim;
  bool is_ball;  // dim >= 2 ball; otherwise a disc coordinate
};

std::vector<ModelUnit> model_units(const DomainSpec& dom) {
  std::vector<ModelUnit> units;
  for (const auto& leaf : dom.flattened()) {
    if (leaf.dom->kind() == DomainSpec::Kind::Polydisc && leaf.dom->dim() > 1) {
      for (int j = 0; j < leaf.dom->dim(); ++j) units.push_back({leaf.offset + j, 1, false});
    } else if (leaf.dom->dim() == 1) {
      units.push_back({leaf.offset, 1, false});
    } else {
      units.push_back({leaf.offset, leaf.dom->dim(), true});
    }
  }
  return units;
}

double unit_distance(const ModelUnit& u, const Point& z, const Point& w) {
  if (!u.is_ball) return poincare_distance(z[u.offset], w[u.offset]);
  return ball_distance(subpoint(z, u.offset, u.dim), subpoint(w, u.offset, u.dim));
}

}  // namespace

ComplexGeodesic complex_geodesic_through(const DomainSpec& dom, const Point& z, const Point& w) {
  if (z.dim() != dom.dim() || w.dim() != dom.dim())
    throw dimension_mismatch("complex_geodesic_through: dimension mismatch");
  if (!dom.contains(z) || !dom.contains(w))
    throw std::domain_error("complex_geodesic_through: point outside the domain");
  if (euclid_dist(z, w) == 0.0)
    throw std::invalid_argument("complex_geodesic_through: z == w");
  if (!dom.is_model())
    throw not_implemented_error("complex_geodesic_through: hull domains are not supported");

  ComplexGeodesic cg;
  cg.dom = dom;

  if (dom.dim() == 1) {
    const cx a = z[0];
    const cx tau = mobius_to_zero(a, w[0]);
    const cx phase = normalize_unit(tau);
    cg.phi = [a, phase](cx zeta) { return Point{mobius_from_zero(a, phase * zeta)}; };
    cg.rho = [a, phase](const Point& x) { return mobius_to_zero(a, x[0]) / phase; };
    return cg;
  }

  if (dom.kind() == DomainSpec::Kind::Ball) {
    const Point wp = ball_mobius(z, w);
    const double t = wp.norm();
    const Point e = (1.0 / t) * wp;
    cg.phi = [z, e](cx zeta) { return ball_mobius(z, zeta * e); };
    cg.rho = [z, e](const Point& x) { return hermitian(ball_mobius(z, x), e); };
    return cg;
  }

  // Polydiscs and products of model factors: the unit (disc coordinate or
  // ball factor) of maximal distance is an extremal slice, the remaining
  // units interpolate with smaller derivative.
  const auto units = model_units(dom);
  double total = 0.0;
  int driver = 0;
  for (size_t i = 0; i < units.size(); ++i) {
    const double d = unit_distance(units[i], z, w);
    if (d > total + 1e-15) {
      total = d;
      driver = static_cast<int>(i);
    }
  }
  const double t = std::tanh(total);
  const int n = dom.dim();

  struct LeafMap {
    int offset;
    int dim;
    std::function<Point(cx)> f;
  };
  std::vector<LeafMap> maps;
  std::function<cx(const Point&)> rho;

  for (size_t i = 0; i < units.size(); ++i) {
    const ModelUnit& u = units[i];
    const bool is_driver = static_cast<int>(i) == driver;
    if (!u.is_ball) {
      const cx a = z[u.offset];
      const cx tau = mobius_to_zero(a, w[u.offset]);
      const cx lambda = tau / t;  // |lambda| = tanh(unit)/t <= 1, = 1 for the driver
      maps.push_back({u.offset, 1, [a, lambda](cx zeta) {
                        return Point{mobius_from_zero(a, lambda * zeta)};
                      }});
      if (is_driver) {
        const cx phase = normalize_unit(lambda);
        const int col = u.offset;
        rho = [a, phase, col](const Point& x) { return mobius_to_zero(a, x[col]) / phase; };
      }
    } else {
      const Point lz = subpoint(z, u.offset, u.dim);
      const Point lw = subpoint(w, u.offset, u.dim);
      const Point wp = ball_mobius(lz, lw);
      const double tj = wp.norm();
      if (tj < 1e-15) {
        maps.push_back({u.offset, u.dim, [lz](cx) { return lz; }});
      } else {
        const Point e = (1.0 / t) * wp;  // |e| = tanh(unit)/t
        maps.push_back({u.offset, u.dim,
                        [lz, e](cx zeta) { return ball_mobius(lz, zeta * e); }});
        if (is_driver) {
          const Point eu = (1.0 / tj) * wp;
          const int off = u.offset;
          const int ld = u.dim;
          rho = [lz, eu, off, ld](const Point& x) {
            return hermitian(ball_mobius(lz, subpoint(x, off, ld)), eu);
          };
        }
      }
    }
  }
  cg.phi = [maps, n](cx zeta) {
    Point out = zero_point(n);
    for (const auto& lm : maps) {
      Point v = lm.f(zeta);
      for (int j = 0; j < lm.dim; ++j) out[lm.offset + j] = v[j];
    }
    return out;
  };
  cg.rho = rho;
  return cg;
}

GeodesicPath geodesic_segment(const DomainSpec& dom, const Point& z, const Point& w,
                              const MetricOptions& opt) {
  if (!dom.contains(z) || !dom.contains(w))
    throw std::domain_error("geodesic_segment: point outside the domain");
  GeodesicPath path;
  path.dom = dom;
  path.kind = GeodesicPath::Kind::Segment;
  if (euclid_dist(z, w) == 0.0) {
    path.sample = [z](double) { return z; };
    path.defect = 0.0;
    return path;
  }
  if (dom.is_model()) {
    ComplexGeodesic cg = complex_geodesic_through(dom, z, w);
    const double total = model_distance(dom, z, w);
    auto phi = cg.phi;
    path.sample = [phi, total](double u) { return phi(cx(std::tanh(u * total), 0.0)); };
    path.defect = check_geodesic(path, 24);
    return path;
  }
  const AnalyticDisc disc = best_analytic_disc(dom, z, w, opt);
  const DistanceBracket b = kobayashi_distance(dom, z, w, opt);
  const cx pz = disc.pre_z, pw = disc.pre_w;
  auto map = disc.map;
  path.sample = [map, pz, pw](double u) { return map(disc_geodesic_point(pz, pw, u)); };
  path.defect = b.hi - b.lo;
  return path;
}

GeodesicPath bidisc_example_segment(double r) {
  if (!(r > 0.0 && r < 1.0))
    throw std::invalid_argument("bidisc_example_segment: r must lie in (0,1)");
  GeodesicPath path;
  path.dom = DomainSpec::polydisc(2);
  path.kind = GeodesicPath::Kind::Segment;
  path.sample = [r](double t) -> Point {
    if (t <= 0.5) {
      const double x = r * (2.0 * t - 1.0) / (1.0 - 2.0 * r * r * t);
      return Point{cx(x, 0.0), cx(2.0 * t * r, 0.0)};
    }
    const double x = r * (2.0 * t - 1.0) / (1.0 + r * r * (2.0 * t - 2.0));
    return Point{cx(x, 0.0), cx((2.0 - 2.0 * t) * r, 0.0)};
  };
  path.defect = check_geodesic(path, 24);
  return path;
}

GeodesicPath geodesic_ray(const DomainSpec& dom, const Point& z0, const Point& p,
                          double tol_bd) {
  if (!dom.contains(z0)) throw std::domain_error("geodesic_ray: z0 outside the domain");
  const double tol = tol_bd * dom.diameter();
  if (std::abs(dom.margin(p)) > std::max(tol, 1e-7))
    throw std::domain_error("geodesic_ray: p is not a boundary point");
  if (!dom.is_model())
    throw not_implemented_error("geodesic_ray: hull domains are not supported");

  GeodesicPath path;
  path.dom = dom;
  path.kind = GeodesicPath::Kind::Ray;

  if (dom.kind() == DomainSpec::Kind::Ball) {
    const Point pp = ball_mobius(z0, p);
    const Point e = (1.0 / pp.norm()) * pp;
    path.sample = [z0, e](double t) { return ball_mobius(z0, std::tanh(t) * e); };
    return path;
  }

  // Product / polydisc: boundary units follow unit-speed rays, interior
  // units traverse their geodesic to p and stop there.
  struct LeafRay {
    int offset;
    int dim;
    std::function<Point(double)> f;
  };
  std::vector<LeafRay> rays;
  bool any_boundary = false;
  for (const ModelUnit& u : model_units(dom)) {
    if (!u.is_ball) {
      const cx a = z0[u.offset];
      const cx b = p[u.offset];
      const bool on_bd = std::abs(b) >= 1.0 - std::max(tol_bd * 2.0, 1e-7);
      if (on_bd) {
        any_boundary = true;
        const cx e = normalize_unit(mobius_to_zero(a, b / std::abs(b)));
        rays.push_back({u.offset, 1, [a, e](double t) {
                          return Point{mobius_from_zero(a, std::tanh(t) * e)};
                        }});
      } else {
        const double L = poincare_distance(a, b);
        rays.push_back({u.offset, 1, [a, b, L](double t) {
                          if (L == 0.0) return Point{a};
                          return Point{disc_geodesic_point(a, b, std::min(t / L, 1.0))};
                        }});
      }
    } else {
      const Point lz = subpoint(z0, u.offset, u.dim);
      Point lp = subpoint(p, u.offset, u.dim);
      const bool on_bd = lp.norm() >= 1.0 - std::max(tol_bd * 2.0, 1e-7);
      if (on_bd) {
        any_boundary = true;
        lp = (1.0 / lp.norm()) * lp;
        const Point pp = ball_mobius(lz, lp);
        const Point e = (1.0 / pp.norm()) * pp;
        rays.push_back({u.offset, u.dim, [lz, e](double t) {
                          return ball_mobius(lz, std::tanh(t) * e);
                        }});
      } else {
        const Point pp = ball_mobius(lz, lp);
        const double L = ball_distance(lz, lp);
        const Point e = (L > 0.0) ? (1.0 / pp.norm()) * pp : pp;
        rays.push_back({u.offset, u.dim, [lz, e, L](double t) {
                          if (L == 0.0) return lz;
                          return ball_mobius(lz, std::tanh(std::min(t, L)) * e);
                        }});
      }
    }
  }
  if (!any_boundary) throw std::domain_error("geodesic_ray: no coordinate reaches the boundary");
  const int n = dom.dim();
  path.sample = [rays, n](double t) {
    Point out = zero_point(n);
    for (const auto& lr : rays) {
      Point v = lr.f(t);
      for (int j = 0; j < lr.dim; ++j) out[lr.offset + j] = v[j];
    }
    return out;
  };
  return path;
}

double check_geodesic(const GeodesicPath& path, int samples, const MetricOptions& opt) {
  const double a = 0.0;
  const double b = (path.kind == GeodesicPath::Kind::Ray) ? path.ray_horizon : 1.0;
  int g = 5;
  while (g * (g - 1) * (g - 2) / 6 < samples && g < 64) ++g;
  const auto nodes = chebyshev_lobatto(g, a, b);
  std::vector<Point> pts;
  pts.reserve(nodes.size());
  for (double t : nodes) pts.push_back(path.sample(t));

  // Pair distances once; triples read from the table.
  std::vector<std::vector<double>> dist(static_cast<size_t>(g),
                                        std::vector<double>(static_cast<size_t>(g), 0.0));
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j) {
      const double d = distance_value(path.dom, pts[static_cast<size_t>(i)],
                                      pts[static_cast<size_t>(j)], opt);
      dist[static_cast<size_t>(i)][static_cast<size_t>(j)] = d;
      dist[static_cast<size_t>(j)][static_cast<size_t>(i)] = d;
    }

  const long total = static_cast<long>(g) * (g - 1) * (g - 2) / 6;
  const long stride = std::max(1L, total / std::max(1, samples));
  double defect = 0.0;
  long index = 0;
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j)
      for (int k = j + 1; k < g; ++k, ++index) {
        if (index % stride != 0) continue;
        const double v = dist[static_cast<size_t>(i)][static_cast<size_t>(j)] +
                         dist[static_cast<size_t>(j)][static_cast<size_t>(k)] -
                         dist[static_cast<size_t>(i)][static_cast<size_t>(k)];
        defect = std::max(defect, std::abs(v));
      }
  return defect;
}

EquicontinuityTable equicontinuity_probe(const DomainSpec& dom, const Point& z0, int rays,
                                         int mesh) {
  EquicontinuityTable table;
  Rng rng(0x9E3779B9ULL);  // fixed stream: the probe is deterministic
  std::vector<GeodesicPath> paths;
  for (int i = 0; i < rays; ++i) {
    const Point dir = rng.unit_vector(dom.dim());
    const Point target = boundary_ray_hit(dom, dom.anchor(), dir);
    try {
      paths.push_back(geodesic_ray(dom, z0, target));
    } catch (const std::exception&) {
      continue;  // skip unreachable targets
    }
  }
  // Compactified parameter u = tanh t in [0, u_max]; displacement pairs per ray.
  const double u_max = std::tanh(8.0);
  int levels = 1;
  while ((1 << levels) < mesh) ++levels;
  table.delta.resize(static_cast<size_t>(levels));
  table.omega.assign(static_cast<size_t>(levels), 0.0);
  for (int l = 0; l < levels; ++l) table.delta[static_cast<size_t>(l)] = u_max / (1 << l);

  for (const auto& path : paths) {
    std::vector<Point> samples;
    samples.reserve(static_cast<size_t>(mesh) + 1);
    for (int i = 0; i <= mesh; ++i) {
      const double u = u_max * i / mesh;
      samples.push_back(path.sample(std::atanh(std::min(u, 0.999999999))));
    }
    double ray_min_omega = 0.0;
    for (int i = 0; i <= mesh; ++i)
      for (int j = i + 1; j <= mesh; ++j) {
        const double gap = u_max * (j - i) / mesh;
        const double disp = euclid_dist(samples[static_cast<size_t>(i)],
                                        samples[static_cast<size_t>(j)]);
        for (int l = 0; l < levels; ++l)
          if (gap <= table.delta[static_cast<size_t>(l)])
            table.omega[static_cast<size_t>(l)] =
                std::max(table.omega[static_cast<size_t>(l)], disp);
        if (j == i + 1) ray_min_omega = std::max(ray_min_omega, disp);
      }
    table.per_ray_ratio.push_back(ray_min_omega / (u_max / mesh));
  }
  double worst = 0.0;
  for (double r : table.per_ray_ratio) worst = std::max(worst, r);
  table.blowup_flag = worst > 50.0;
  return table;
}

void export_path_csv(const GeodesicPath& path, std::ostream& os, int samples,
                     const MetricOptions& opt) {
  os << "t";
  const int n = path.dom.dim();
  for (int j = 0; j < n; ++j) os << ",re_z" << (j + 1) << ",im_z" << (j + 1);
  os << ",boundary_distance,k_to_start\n";
  const double b = (path.kind == GeodesicPath::Kind::Ray) ? path.ray_horizon : 1.0;
  const Point start = path.sample(0.0);
  char buf[64];
  for (int i = 0; i < samples; ++i) {
    const double t = b * i / (samples - 1);
    const Point p = path.sample(t);
    std::snprintf(buf, sizeof buf, "%.17g", t);
    os << buf;
    for (int j = 0; j < n; ++j) {
      std::snprintf(buf, sizeof buf, ",%.17g,%.17g", p[j].real(), p[j].imag());
      os << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g", path.dom.boundary_distance(p));
    os << buf;
    std::snprintf(buf, sizeof buf, ",%.17g", distance_value(path.dom, start, p, opt));
    os << buf << "\n";
  }
}

}  // namespace koblab
