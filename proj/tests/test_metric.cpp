#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "koblab/metric.hpp"
#include "koblab/polygon_metric.hpp"
#include "oracles.hpp"

using namespace koblab;

namespace {
Point pt(double a, double b) { return Point{cx(a), cx(b)}; }
const double kAtanh075 = 0.9729550745276566;
}  // namespace

TEST_CASE("poincare_distance: frozen values against the quadrature oracle") {
  CHECK(poincare_distance(0.0, 0.0) == 0.0);
  CHECK(poincare_distance(0.0, 0.75) == doctest::Approx(kAtanh075).epsilon(1e-14));
  CHECK(poincare_distance(0.0, 0.75) ==
        doctest::Approx(oracles::disc_radial_length(0.75)).epsilon(1e-10));
  // Symmetric real pair: the geodesic is the diameter, lengths add.
  CHECK(poincare_distance(-0.9, 0.9) ==
        doctest::Approx(2.0 * oracles::disc_radial_length(0.9)).epsilon(1e-10));
  CHECK(poincare_distance(-0.9, 0.9) == doctest::Approx(2.944438979166441).epsilon(1e-14));
  CHECK_THROWS_AS(poincare_distance(1.0, 0.0), std::domain_error);
}

TEST_CASE("product_distance") {
  CHECK(product_distance({kAtanh075, 0.0}) == kAtanh075);
  CHECK(product_distance({0.0, 0.0}) == 0.0);
  CHECK(product_distance({0.2, 0.3, 0.1}) == 0.3);
  CHECK_THROWS_AS(product_distance({}), std::invalid_argument);
}

TEST_CASE("ball_distance: radial case and metric axioms") {
  CHECK(ball_distance(pt(0, 0), pt(0, 0)) == 0.0);
  CHECK(ball_distance(pt(0, 0), pt(0.75, 0)) ==
        doctest::Approx(poincare_distance(0.0, 0.75)).epsilon(1e-14));
  Rng rng(7);
  const DomainSpec B2 = DomainSpec::ball(2);
  for (int i = 0; i < 200; ++i) {
    const Point z = random_interior_point(B2, rng);
    const Point w = random_interior_point(B2, rng);
    const Point u = random_interior_point(B2, rng);
    CHECK(ball_distance(z, w) == doctest::Approx(ball_distance(w, z)).epsilon(1e-12));
    CHECK(ball_distance(z, w) <= ball_distance(z, u) + ball_distance(u, w) + 1e-12);
  }
  // Cross-check one generic pair against the disc-optimization machinery.
  const Point a = pt(0.5, 0), b = pt(0, 0.5);
  const double closed = ball_distance(a, b);
  CHECK(caratheodory_lower_bound(B2, a, b) <= closed + 1e-12);
  CHECK(lempert_upper_bound(B2, a, b) + 1e-12 >= closed);
  CHECK(lempert_upper_bound(B2, a, b) == doctest::Approx(closed).epsilon(1e-9));
}

TEST_CASE("caratheodory_lower_bound: tight on aligned model pairs") {
  const double r = 0.6;
  CHECK(caratheodory_lower_bound(DomainSpec::polydisc(2), pt(0, 0), pt(r, 0)) ==
        doctest::Approx(std::atanh(r)).epsilon(1e-12));
  CHECK(caratheodory_lower_bound(DomainSpec::ball(2), pt(0, 0), pt(r, 0)) ==
        doctest::Approx(std::atanh(r)).epsilon(1e-12));
  CHECK(caratheodory_lower_bound(DomainSpec::ball(2), pt(0.3, 0.1), pt(0.3, 0.1)) == 0.0);
}

TEST_CASE("lempert_upper_bound: flat discs are found") {
  CHECK(lempert_upper_bound(DomainSpec::polydisc(2), pt(0, 0), pt(0.75, 0)) <=
        kAtanh075 + 1e-6);
  CHECK(lempert_upper_bound(DomainSpec::ball(2), pt(0, 0), pt(0.75, 0)) <= kAtanh075 + 1e-6);
  CHECK(lempert_upper_bound(DomainSpec::ball(2), pt(0.2, 0.1), pt(0.2, 0.1)) == 0.0);
}

TEST_CASE("kobayashi_distance: models exact") {
  const DomainSpec D3 = DomainSpec::polydisc(3);
  const DistanceBracket b =
      kobayashi_distance(D3, Point{cx(0), cx(0), cx(0)}, Point{cx(0.5), cx(0.5), cx(0)});
  CHECK(b.exact);
  CHECK(b.lo == doctest::Approx(std::atanh(0.5)).epsilon(1e-14));
  CHECK(b.hi == b.lo);
  const DistanceBracket z = kobayashi_distance(DomainSpec::ball(2), pt(0, 0), pt(0, 0));
  CHECK(z.exact);
  CHECK(z.lo == 0.0);
}

TEST_CASE("kobayashi_distance: hull bracket pinches and brackets the truth") {
  const DomainSpec hull = ball_hull_64();
  MetricOptions opt;
  opt.budget = 10000;
  const DistanceBracket b = kobayashi_distance(hull, pt(0, 0), pt(0.75, 0), opt);
  CHECK(b.lo <= b.hi);
  CHECK(b.hi - b.lo <= 1e-3);
  // Independent truth: the z1-slice of the hull is the regular 16-gon of
  // apothem 1 whose facet normals sit at angles 2 pi j / 16 (vertices at
  // pi/16 + 2 pi j / 16); on a product-like polytope that slice is
  // holomorphically retracted, so its polygon metric is the hull distance.
  RegularPolygon gon;
  gon.m = 16;
  gon.apothem = 1.0;
  gon.vertex_phase = M_PI / 16.0;
  const RegularPolygonMap map(gon);
  const double truth = map.distance(0.0, 0.75);
  CHECK(b.lo <= truth + 1e-9);
  CHECK(truth <= b.hi + 1e-9);
  // Schwarz bounds per inscribed/circumscribed discs.
  CHECK(truth > std::atanh(0.75 / gon.circumradius()) - 1e-12);
  CHECK(truth < kAtanh075 + 1e-12);
}

TEST_CASE("kobayashi_royden_norm: closed forms and difference quotient") {
  const DomainSpec D1 = DomainSpec::ball(1);
  NormBracket n = kobayashi_royden_norm(D1, Point{cx(0)}, Point{cx(1)});
  CHECK(n.exact);
  CHECK(n.lo == doctest::Approx(1.0));
  n = kobayashi_royden_norm(DomainSpec::polydisc(2), pt(0, 0), pt(1, 1));
  CHECK(n.lo == doctest::Approx(1.0));
  n = kobayashi_royden_norm(D1, Point{cx(0.5)}, Point{cx(1)});
  CHECK(n.lo == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  // Difference quotient of the distance reproduces the norm.
  const double h = 1e-6;
  const double dq = poincare_distance(0.5, 0.5 + h) / h;
  CHECK(n.lo == doctest::Approx(dq).epsilon(1e-5));
  CHECK_THROWS_AS(kobayashi_royden_norm(D1, Point{cx(0.5)}, Point{cx(0)}),
                  std::invalid_argument);
}

TEST_CASE("property: bracket sandwich on seeded model pairs") {
  for (const DomainSpec& dom : {DomainSpec::ball(2), DomainSpec::polydisc(2)}) {
    Rng rng(42);
    MetricOptions opt;
    opt.budget = 500;
    for (int i = 0; i < 25; ++i) {
      const Point z = random_interior_point(dom, rng, 0.95);
      const Point w = random_interior_point(dom, rng, 0.95);
      const double closed = model_distance(dom, z, w);
      opt.seed = Rng::child_seed(42, i);
      CHECK(caratheodory_lower_bound(dom, z, w, opt) <= closed + 1e-9);
      CHECK(closed <= lempert_upper_bound(dom, z, w, opt) + 1e-9);
      // The model-extremal candidates make both sides agree with the
      // closed form to within numerical noise.
      CHECK(std::abs(caratheodory_lower_bound(dom, z, w, opt) - closed) <= 1e-9);
      CHECK(std::abs(lempert_upper_bound(dom, z, w, opt) - closed) <= 1e-9);
    }
  }
}

TEST_CASE("property: symmetry of the general bracket") {
  const DomainSpec hull = ball_hull_64();
  Rng rng(9);
  MetricOptions opt;
  opt.budget = 300;
  for (int i = 0; i < 5; ++i) {
    const Point z = random_interior_point(hull, rng, 0.5);
    const Point w = random_interior_point(hull, rng, 0.5);
    const DistanceBracket a = kobayashi_distance(hull, z, w, opt);
    const DistanceBracket b = kobayashi_distance(hull, w, z, opt);
    CHECK(a.lo == b.lo);  // canonicalized order: identical brackets
    CHECK(a.hi == b.hi);
  }
}

TEST_CASE("property: triangle inequality on models") {
  Rng rng(11);
  const DomainSpec dom = DomainSpec::polydisc(2);
  for (int i = 0; i < 300; ++i) {
    const Point z = random_interior_point(dom, rng);
    const Point w = random_interior_point(dom, rng);
    const Point u = random_interior_point(dom, rng);
    CHECK(model_distance(dom, z, w) <=
          model_distance(dom, z, u) + model_distance(dom, u, w) + 1e-12);
  }
}

TEST_CASE("property: norm integrates to distance along a model geodesic") {
  // gamma(u) joins 0 to 0.75 radially in the bidisc's first coordinate.
  const DomainSpec dom = DomainSpec::polydisc(2);
  const double total = std::atanh(0.75);
  auto gamma = [&](double u) { return pt(std::tanh(u * total), 0.0); };
  auto integrand = [&](double u) {
    const double h = 1e-6;
    const Point a = gamma(u - h), b = gamma(u + h);
    Point v = cx(1.0 / (2.0 * h)) * (b - a);
    return model_royden_norm(dom, gamma(u), v);
  };
  const double len = oracles::simpson(integrand, 1e-5, 1.0 - 1e-5, 1000);
  const double dist = model_distance(dom, gamma(1e-5), gamma(1.0 - 1e-5));
  CHECK(len == doctest::Approx(dist).epsilon(1e-6));
}

TEST_CASE("regular polygon metric: square constants and disc limit") {
  RegularPolygon sq{4, 1.0, 0.0, cx(0.0)};
  const RegularPolygonMap smap(sq);
  CHECK(sq.circumradius() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  // Conformal radius of the apothem-1 square: 1 / (cos(pi/4) * I4) with
  // I4 = B(1/4, 1/2)/4 = 1.3110287771460599 (lemniscatic).
  CHECK(smap.scale() ==
        doctest::Approx(1.0 / (std::cos(M_PI / 4) * 1.3110287771460599)).epsilon(1e-10));
  // Inverse round-trip.
  for (double x : {0.1, 0.5, 0.9, -0.7}) {
    CHECK(std::abs(smap.map(smap.inverse(cx(x, 0.2))) - cx(x, 0.2)) < 1e-11);
  }
  // Large m approaches the disc metric from below.
  RegularPolygon g64{64, 1.0, 0.0, cx(0.0)};
  const RegularPolygonMap map64(g64);
  const double k = map64.distance(0.0, 0.5);
  CHECK(k < std::atanh(0.5));
  CHECK(k > std::atanh(0.5 / g64.circumradius()) - 1e-12);
  CHECK(std::abs(k - std::atanh(0.5)) < 1e-3);
}

TEST_CASE("regular polygon metric: distance matches the density integral") {
  RegularPolygon gon{16, 1.0, M_PI / 16.0, cx(0.0)};
  const RegularPolygonMap map(gon);
  auto integrand = [&](double x) { return map.density(cx(x, 0.0)); };
  const double len = oracles::simpson(integrand, 0.0, 0.75, 2000);
  CHECK(map.distance(0.0, 0.75) == doctest::Approx(len).epsilon(1e-8));
}

TEST_CASE("regular polygon detection") {
  std::vector<cx> verts;
  const cx c(0.3, -0.2);
  for (int j = 0; j < 12; ++j)
    verts.push_back(c + std::polar(2.5, 0.7 + 2.0 * M_PI * j / 12.0));
  auto gon = detect_regular_polygon(verts);
  REQUIRE(gon.has_value());
  CHECK(gon->m == 12);
  CHECK(std::abs(gon->center - c) < 1e-12);
  CHECK(gon->apothem == doctest::Approx(2.5 * std::cos(M_PI / 12)).epsilon(1e-12));
  // A rectangle is not regular.
  std::vector<cx> rect = {cx(2, 1), cx(-2, 1), cx(-2, -1), cx(2, -1)};
  CHECK_FALSE(detect_regular_polygon(rect).has_value());
}
