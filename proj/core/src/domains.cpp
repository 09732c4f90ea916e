#include "koblab/domains.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace koblab {

namespace {

void check_dim(const DomainSpec& dom, const Point& p, const char* who) {
  if (p.dim() != dom.dim()) throw dimension_mismatch(std::string(who) + ": dimension mismatch");
  if (!p.finite()) throw std::invalid_argument(std::string(who) + ": non-finite coordinate");
}

}  // namespace

DomainSpec DomainSpec::ball(int n) {
  if (n < 1) throw std::invalid_argument("ball: dimension must be >= 1");
  DomainSpec d;
  d.kind_ = Kind::Ball;
  d.dim_ = n;
  return d;
}

DomainSpec DomainSpec::polydisc(int n) {
  if (n < 1) throw std::invalid_argument("polydisc: dimension must be >= 1");
  DomainSpec d;
  d.kind_ = Kind::Polydisc;
  d.dim_ = n;
  return d;
}

DomainSpec DomainSpec::product(std::vector<DomainSpec> factors) {
  if (factors.empty()) throw std::invalid_argument("product: no factors");
  DomainSpec d;
  d.kind_ = Kind::Product;
  d.dim_ = 0;
  for (const auto& f : factors) d.dim_ += f.dim();
  d.factors_ = std::move(factors);
  return d;
}

DomainSpec DomainSpec::hull(int n, std::vector<SupportFunctional> functionals,
                            Point interior, CoordBox box) {
  if (n < 1) throw std::invalid_argument("hull: dimension must be >= 1");
  if (functionals.empty()) throw std::invalid_argument("hull: no functionals");
  if (interior.dim() != n || box.center.dim() != n ||
      static_cast<int>(box.radius.size()) != n)
    throw dimension_mismatch("hull: dimension mismatch in interior point or box");
  for (const auto& f : functionals) {
    if (f.normal.dim() != n) throw dimension_mismatch("hull: functional dimension mismatch");
    if (f.normal.norm() < 1e-14) throw std::invalid_argument("hull: zero normal");
    if (f.value(interior) >= 0.0)
      throw std::invalid_argument("hull: declared interior point violates a functional");
    if (f.contact) {
      const double at_contact = f.value(*f.contact);
      if (std::abs(at_contact) > 1e-9 * (1.0 + std::abs(f.offset)))
        throw std::invalid_argument("hull: functional does not vanish at its contact point");
    }
  }
  for (int j = 0; j < n; ++j) {
    if (box.radius[static_cast<size_t>(j)] <= 0.0)
      throw std::invalid_argument("hull: box radius must be positive");
    if (std::abs(interior[j] - box.center[j]) >= box.radius[static_cast<size_t>(j)])
      throw std::invalid_argument("hull: declared interior point outside the box");
  }
  DomainSpec d;
  d.kind_ = Kind::Hull;
  d.dim_ = n;
  d.functionals_ = std::move(functionals);
  d.interior_ = std::move(interior);
  d.box_ = std::move(box);
  return d;
}

Point DomainSpec::anchor() const {
  if (kind_ == Kind::Hull) return interior_;
  return zero_point(dim_);
}

double DomainSpec::diameter() const {
  switch (kind_) {
    case Kind::Ball:
      return 2.0;
    case Kind::Polydisc:
      return 2.0 * std::sqrt(static_cast<double>(dim_));
    case Kind::Product: {
      double s = 0.0;
      for (const auto& f : factors_) s += f.diameter() * f.diameter();
      return std::sqrt(s);
    }
    case Kind::Hull: {
      double s = 0.0;
      for (double r : box_.radius) s += 4.0 * r * r;
      return std::sqrt(s);
    }
  }
  return 2.0;
}

double DomainSpec::margin(const Point& p) const {
  check_dim(*this, p, "margin");
  switch (kind_) {
    case Kind::Ball:
      return p.norm() - 1.0;
    case Kind::Polydisc: {
      double m = -1.0;
      for (const cx& c : p.z) m = std::max(m, std::abs(c) - 1.0);
      return m;
    }
    case Kind::Product: {
      double m = -1.0;
      int off = 0;
      for (const auto& f : factors_) {
        Point sub(std::vector<cx>(p.z.begin() + off, p.z.begin() + off + f.dim()));
        m = std::max(m, f.margin(sub));
        off += f.dim();
      }
      return m;
    }
    case Kind::Hull: {
      double m = -std::numeric_limits<double>::infinity();
      for (const auto& f : functionals_) m = std::max(m, f.value(p) / f.normal.norm());
      for (int j = 0; j < dim_; ++j)
        m = std::max(m, std::abs(p[j] - box_.center[j]) - box_.radius[static_cast<size_t>(j)]);
      return m;
    }
  }
  return 0.0;
}

double DomainSpec::boundary_distance(const Point& p) const {
  check_dim(*this, p, "boundary_distance");
  if (!contains(p)) throw std::domain_error("boundary_distance: point outside the domain");
  switch (kind_) {
    case Kind::Ball:
      return 1.0 - p.norm();
    case Kind::Polydisc: {
      double m = 2.0;
      for (const cx& c : p.z) m = std::min(m, 1.0 - std::abs(c));
      return m;
    }
    case Kind::Product: {
      double m = std::numeric_limits<double>::infinity();
      int off = 0;
      for (const auto& f : factors_) {
        Point sub(std::vector<cx>(p.z.begin() + off, p.z.begin() + off + f.dim()));
        m = std::min(m, f.boundary_distance(sub));
        off += f.dim();
      }
      return m;
    }
    case Kind::Hull: {
      double m = std::numeric_limits<double>::infinity();
      for (const auto& f : functionals_) m = std::min(m, -f.value(p) / f.normal.norm());
      for (int j = 0; j < dim_; ++j)
        m = std::min(m, box_.radius[static_cast<size_t>(j)] - std::abs(p[j] - box_.center[j]));
      return m;
    }
  }
  return 0.0;
}

bool DomainSpec::operator==(const DomainSpec& other) const {
  if (kind_ != other.kind_ || dim_ != other.dim_) return false;
  if (kind_ == Kind::Product) {
    if (factors_.size() != other.factors_.size()) return false;
    for (size_t i = 0; i < factors_.size(); ++i)
      if (!(factors_[i] == other.factors_[i])) return false;
  }
  if (kind_ == Kind::Hull) {
    if (functionals_.size() != other.functionals_.size()) return false;
    for (size_t i = 0; i < functionals_.size(); ++i) {
      if (euclid_dist(functionals_[i].normal, other.functionals_[i].normal) > 1e-12) return false;
      if (std::abs(functionals_[i].offset - other.functionals_[i].offset) > 1e-12) return false;
    }
  }
  return true;
}

std::vector<DomainSpec::FlatFactor> DomainSpec::flattened() const {
  std::vector<FlatFactor> out;
  if (kind_ == Kind::Product) {
    int off = 0;
    for (const auto& f : factors_) {
      for (const auto& sub : f.flattened()) out.push_back({sub.dom, off + sub.offset});
      off += f.dim();
    }
  } else {
    out.push_back({this, 0});
  }
  return out;
}

bool DomainSpec::is_model() const {
  switch (kind_) {
    case Kind::Ball:
    case Kind::Polydisc:
      return true;
    case Kind::Product:
      return std::all_of(factors_.begin(), factors_.end(),
                         [](const DomainSpec& f) { return f.is_model(); });
    case Kind::Hull:
      return false;
  }
  return false;
}

bool DomainSpec::is_polydisc_like() const {
  if (kind_ == Kind::Polydisc) return true;
  if (kind_ == Kind::Ball) return dim_ == 1;
  if (kind_ != Kind::Product) return false;
  return std::all_of(factors_.begin(), factors_.end(),
                     [](const DomainSpec& f) { return f.is_polydisc_like(); });
}

SupportFunctional supporting_functional_at(const DomainSpec& dom, const Point& bd_point,
                                           double tol_bd) {
  if (bd_point.dim() != dom.dim())
    throw dimension_mismatch("supporting_functional_at: dimension mismatch");
  const double tol = tol_bd * dom.diameter();
  if (std::abs(dom.margin(bd_point)) > tol)
    throw std::domain_error("supporting_functional_at: point not on the boundary");

  switch (dom.kind()) {
    case DomainSpec::Kind::Ball: {
      SupportFunctional f;
      f.normal = bd_point;
      f.offset = hermitian(bd_point, bd_point).real();
      f.contact = bd_point;
      return f;
    }
    case DomainSpec::Kind::Polydisc: {
      for (int j = 0; j < dom.dim(); ++j) {
        if (std::abs(bd_point[j]) >= 1.0 - tol) {
          const cx phase = bd_point[j] / std::abs(bd_point[j]);
          SupportFunctional f;
          f.normal = unit_coord(dom.dim(), j, phase);
          f.offset = std::abs(bd_point[j]);
          f.contact = bd_point;
          return f;
        }
      }
      throw std::domain_error("supporting_functional_at: no polydisc coordinate at modulus 1");
    }
    case DomainSpec::Kind::Product: {
      int off = 0;
      for (const auto& fac : dom.factors()) {
        Point sub(std::vector<cx>(bd_point.z.begin() + off, bd_point.z.begin() + off + fac.dim()));
        if (std::abs(fac.margin(sub)) <= tol_bd * fac.diameter()) {
          SupportFunctional inner = supporting_functional_at(fac, sub, tol_bd);
          SupportFunctional f;
          f.normal = zero_point(dom.dim());
          for (int j = 0; j < fac.dim(); ++j) f.normal[off + j] = inner.normal[j];
          f.offset = inner.offset;
          f.contact = bd_point;
          return f;
        }
        off += fac.dim();
      }
      throw std::domain_error("supporting_functional_at: no factor achieves the boundary");
    }
    case DomainSpec::Kind::Hull: {
      double best = -std::numeric_limits<double>::infinity();
      const SupportFunctional* arg = nullptr;
      for (const auto& f : dom.functionals()) {
        const double v = f.value(bd_point) / f.normal.norm();
        if (v > best) {
          best = v;
          arg = &f;
        }
      }
      SupportFunctional f = *arg;
      f.contact = bd_point;
      f.offset = hermitian(bd_point, f.normal).real();
      return f;
    }
  }
  throw std::logic_error("supporting_functional_at: unreachable");
}

LineDisjointReport complex_line_disjoint(const DomainSpec& dom, const Point& p, const Point& q) {
  if (p.dim() != dom.dim() || q.dim() != dom.dim())
    throw dimension_mismatch("complex_line_disjoint: dimension mismatch");
  const Point dir = p - q;
  const double len = dir.norm();
  if (len < 1e-14) throw std::invalid_argument("complex_line_disjoint: p == q");

  auto at = [&](cx t) { return q + t * dir; };
  auto f = [&](cx t) { return dom.margin(at(t)); };

  const double R = 2.0 * dom.diameter() / len;
  double best = std::numeric_limits<double>::infinity();
  cx best_t = 0.0;
  for (int i = 0; i < 41; ++i) {
    for (int j = 0; j < 41; ++j) {
      const cx t(-R + 2.0 * R * i / 40.0, -R + 2.0 * R * j / 40.0);
      const double v = f(t);
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
  }
  // Coordinate golden descent; the margin is convex along lines, so the
  // local refinement reaches the global minimum of the grid cell.
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double step = 2.0 * R / 40.0;
  for (int sweep = 0; sweep < 60 && step > 1e-13 * (1.0 + R); ++sweep) {
    for (cx axis : {cx(1.0, 0.0), cx(0.0, 1.0)}) {
      double a = -step, b = step;
      double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
      double f1 = f(best_t + c1 * axis), f2 = f(best_t + c2 * axis);
      for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
          b = c2;
          c2 = c1;
          f2 = f1;
          c1 = b - gr * (b - a);
          f1 = f(best_t + c1 * axis);
        } else {
          a = c1;
          c1 = c2;
          f1 = f2;
          c2 = a + gr * (b - a);
          f2 = f(best_t + c2 * axis);
        }
      }
      const double mid = 0.5 * (a + b);
      const double fm = f(best_t + mid * axis);
      if (fm < best) {
        best = fm;
        best_t += mid * axis;
      }
    }
    step *= 0.5;
  }
  LineDisjointReport rep;
  rep.min_margin = best;
  rep.argmin = best_t;
  rep.disjoint = best >= -1e-9 * dom.diameter();
  return rep;
}

SegmentLocation segment_location(const DomainSpec& dom, const Point& p, const Point& q,
                                 double tol_bd, int samples) {
  const double tol = tol_bd * dom.diameter();
  bool all_interior = true;
  bool all_boundary = true;
  for (int i = 1; i < samples - 1; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const Point x = (cx(1.0 - t)) * p + cx(t) * q;
    const double m = dom.margin(x);
    if (m >= 0.0) all_interior = false;
    if (std::abs(m) > tol) all_boundary = false;
  }
  if (all_interior) return SegmentLocation::Interior;
  if (all_boundary) return SegmentLocation::Boundary;
  return SegmentLocation::Mixed;
}

Point boundary_ray_hit(const DomainSpec& dom, const Point& from, const Point& dir,
                       double tol) {
  if (dom.margin(from) >= 0.0)
    throw std::domain_error("boundary_ray_hit: ray origin not inside the domain");
  double lo = 0.0, hi = 1.0;
  while (dom.margin(from + cx(hi) * dir) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e9) throw std::runtime_error("boundary_ray_hit: ray never exits (unbounded?)");
  }
  for (int it = 0; it < 200 && (hi - lo) > tol * std::max(1.0, lo); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (dom.margin(from + cx(mid) * dir) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return from + cx(0.5 * (lo + hi)) * dir;
}

Point project_to_boundary(const DomainSpec& dom, const Point& p, double tol) {
  const Point a = dom.anchor();
  const Point d = p - a;
  if (d.norm() < 1e-14)
    throw std::invalid_argument("project_to_boundary: point coincides with the anchor");
  if (dom.margin(p) >= 0.0) {
    // Outside or on the boundary already: bisect between anchor and p.
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dom.margin(a + cx(mid) * d) < 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return a + cx(0.5 * (lo + hi)) * d;
  }
  return boundary_ray_hit(dom, p, d, tol);
}

Point random_interior_point(const DomainSpec& dom, Rng& rng, double shrink) {
  switch (dom.kind()) {
    case DomainSpec::Kind::Ball: {
      Point u = rng.unit_vector(dom.dim());
      const double r = shrink * std::pow(rng.uniform(), 1.0 / (2.0 * dom.dim()));
      return cx(r) * u;
    }
    case DomainSpec::Kind::Polydisc: {
      Point p = zero_point(dom.dim());
      for (int j = 0; j < dom.dim(); ++j) {
        const double r = shrink * std::sqrt(rng.uniform());
        p[j] = r * rng.unit_complex();
      }
      return p;
    }
    case DomainSpec::Kind::Product: {
      Point p = zero_point(dom.dim());
      int off = 0;
      for (const auto& f : dom.factors()) {
        Point sub = random_interior_point(f, rng, shrink);
        for (int j = 0; j < f.dim(); ++j) p[off + j] = sub[j];
        off += f.dim();
      }
      return p;
    }
    case DomainSpec::Kind::Hull: {
      for (int tries = 0; tries < 100000; ++tries) {
        Point p = dom.box().center;
        for (int j = 0; j < dom.dim(); ++j) {
          const double r =
              dom.box().radius[static_cast<size_t>(j)] * std::sqrt(rng.uniform()) * shrink;
          p[j] += r * rng.unit_complex();
        }
        if (dom.margin(p) < -1e-12) return p;
      }
      // Extremely thin hull: fall back to a blend toward the anchor.
      Point p = dom.anchor();
      return p;
    }
  }
  return dom.anchor();
}

DomainSpec ball_hull_64() {
  std::vector<SupportFunctional> fs;
  auto add_contact = [&](cx a, cx b) {
    SupportFunctional f;
    f.normal = Point{a, b};
    f.offset = 1.0;
    f.contact = Point{a, b};
    fs.push_back(f);
  };
  for (int j = 0; j < 16; ++j) {
    const double t = 2.0 * M_PI * j / 16.0;
    add_contact(cx(std::cos(t), std::sin(t)), 0.0);
  }
  for (int j = 0; j < 16; ++j) {
    const double t = 2.0 * M_PI * j / 16.0;
    add_contact(0.0, cx(std::cos(t), std::sin(t)));
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double ta = 2.0 * M_PI * a / 8.0, tb = 2.0 * M_PI * b / 4.0;
      add_contact(s * cx(std::cos(ta), std::sin(ta)), s * cx(std::cos(tb), std::sin(tb)));
    }
  }
  CoordBox box;
  box.center = Point{cx(0.0), cx(0.0)};
  box.radius = {3.0, 3.0};
  return DomainSpec::hull(2, std::move(fs), Point{cx(0.0), cx(0.0)}, box);
}

}  // namespace koblab
