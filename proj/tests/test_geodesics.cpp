#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "koblab/geodesics.hpp"
#include "oracles.hpp"

using namespace koblab;

namespace {
Point pt(double a, double b) { return Point{cx(a), cx(b)}; }
}  // namespace

TEST_CASE("complex_geodesic_through: left inverse and isometry grids") {
  struct Case {
    DomainSpec dom;
    Point z, w;
  };
  const std::vector<Case> cases = {
      {DomainSpec::polydisc(2), pt(-0.9, 0), pt(0.9, 0)},
      {DomainSpec::ball(2), pt(0, 0), pt(0.9, 0)},
      {DomainSpec::ball(1), Point{cx(0.2, 0.1)}, Point{cx(-0.4, 0.3)}},
      {DomainSpec::product({DomainSpec::ball(2), DomainSpec::polydisc(1)}),
       Point{cx(0.1), cx(0.0), cx(0.2)}, Point{cx(0.4), cx(0.2), cx(-0.1)}},
  };
  for (const auto& c : cases) {
    const ComplexGeodesic cg = complex_geodesic_through(c.dom, c.z, c.w);
    // rho o phi = id on a 100-point grid.
    for (int i = 0; i < 100; ++i) {
      const cx zeta = std::polar(0.95 * (i % 10) / 10.0, 2.0 * M_PI * (i / 10) / 10.0);
      CHECK(std::abs(cg.rho(cg.phi(zeta)) - zeta) < 1e-10);
    }
    // Isometry between the disc and the domain on sampled pairs.
    for (int i = 0; i < 20; ++i) {
      const cx a = std::polar(0.045 * i, 0.37 * i);
      const cx b = std::polar(0.9 - 0.04 * i, 1.1 * i);
      CHECK(model_distance(c.dom, cg.phi(a), cg.phi(b)) ==
            doctest::Approx(poincare_distance(a, b)).epsilon(1e-8));
    }
    // z and w lie on the disc image.
    CHECK(euclid_dist(cg.phi(cg.rho(c.z)), c.z) < 1e-9);
    CHECK(euclid_dist(cg.phi(cg.rho(c.w)), c.w) < 1e-9);
  }
  CHECK_THROWS_AS(complex_geodesic_through(ball_hull_64(), pt(0, 0), pt(0.5, 0)),
                  not_implemented_error);
}

TEST_CASE("geodesic_segment: endpoint distances on models") {
  const GeodesicPath g1 = geodesic_segment(DomainSpec::polydisc(2), pt(-0.9, 0), pt(0.9, 0));
  CHECK(model_distance(g1.dom, g1.sample(0.0), g1.sample(1.0)) ==
        doctest::Approx(2.0 * std::atanh(0.9)).epsilon(1e-12));
  CHECK(g1.defect <= 1e-8);

  const GeodesicPath g2 = geodesic_segment(DomainSpec::ball(2), pt(0, 0), pt(0.75, 0));
  CHECK(model_distance(g2.dom, g2.sample(0.0), g2.sample(1.0)) ==
        doctest::Approx(std::atanh(0.75)).epsilon(1e-12));

  const GeodesicPath g3 = geodesic_segment(DomainSpec::ball(2), pt(0.3, 0.2), pt(0.3, 0.2));
  CHECK(g3.defect == 0.0);
  CHECK(euclid_dist(g3.sample(0.7), pt(0.3, 0.2)) == 0.0);
}

TEST_CASE("geodesic_segment on a hull carries the bracket gap as defect") {
  const DomainSpec hull = ball_hull_64();
  MetricOptions opt;
  opt.budget = 500;
  const GeodesicPath g = geodesic_segment(hull, pt(0, 0), pt(0.75, 0), opt);
  CHECK(g.defect <= 1e-3);
  CHECK(euclid_dist(g.sample(0.0), pt(0, 0)) < 1e-9);
  CHECK(euclid_dist(g.sample(1.0), pt(0.75, 0)) < 1e-9);
  for (double u : {0.25, 0.5, 0.75}) CHECK(hull.contains(g.sample(u)));
}

TEST_CASE("bidisc_example_segment: endpoints, midpoint, arc law") {
  const double r = 0.9;
  const GeodesicPath g = bidisc_example_segment(r);
  CHECK(g.sample(0.0)[0] == cx(-r));
  CHECK(g.sample(0.0)[1] == cx(0.0));
  CHECK(g.sample(1.0)[0] == cx(r));
  CHECK(std::abs(g.sample(0.5)[0]) < 1e-15);
  CHECK(g.sample(0.5)[1] == cx(r));
  // k(gamma(0), gamma(t)) = arctanh(2rt) on the first branch.
  for (int i = 1; i <= 50; ++i) {
    const double t = 0.5 * i / 50.0;
    CHECK(model_distance(g.dom, g.sample(0.0), g.sample(t)) ==
          doctest::Approx(std::atanh(2.0 * r * t)).epsilon(1e-10));
  }
  CHECK(model_distance(g.dom, g.sample(0.0), g.sample(0.25)) ==
        doctest::Approx(std::atanh(0.45)).epsilon(1e-12));
  CHECK_THROWS_AS(bidisc_example_segment(1.0), std::invalid_argument);
  CHECK_THROWS_AS(bidisc_example_segment(0.0), std::invalid_argument);
  // r -> 0: the curve collapses toward the origin chord.
  const GeodesicPath tiny = bidisc_example_segment(1e-4);
  CHECK(std::abs(tiny.sample(0.5)[1]) <= 1e-4);
}

TEST_CASE("geodesic_ray: unit speed and landing") {
  const GeodesicPath r1 = geodesic_ray(DomainSpec::ball(1), Point{cx(0)}, Point{cx(1)});
  for (double t : {0.5, 1.0, 3.0})
    CHECK(r1.sample(t)[0].real() == doctest::Approx(std::tanh(t)).epsilon(1e-12));

  const GeodesicPath r2 = geodesic_ray(DomainSpec::ball(2), pt(0, 0), pt(1, 0));
  CHECK(r2.sample(2.0)[0].real() == doctest::Approx(std::tanh(2.0)).epsilon(1e-12));
  CHECK(std::abs(r2.sample(2.0)[1]) < 1e-12);

  const GeodesicPath r3 = geodesic_ray(DomainSpec::polydisc(2), pt(0, 0), pt(1, 0));
  for (double t : {0.5, 2.0, 5.0}) {
    CHECK(r3.sample(t)[0].real() == doctest::Approx(std::tanh(t)).epsilon(1e-12));
    CHECK(std::abs(r3.sample(t)[1]) < 1e-12);
    CHECK(model_distance(r3.dom, r3.sample(0.0), r3.sample(t)) ==
          doctest::Approx(t).epsilon(1e-10));
  }
  // Landing: the ray approaches its target.
  CHECK(euclid_dist(r3.sample(12.0), pt(1, 0)) < 1e-9);
  CHECK_THROWS_AS(geodesic_ray(DomainSpec::ball(2), pt(0, 0), pt(0.5, 0)), std::domain_error);
}

TEST_CASE("check_geodesic: true geodesics vs a euclidean chord") {
  CHECK(check_geodesic(bidisc_example_segment(0.9), 64) <= 1e-9);
  // Euclidean chord between 0.9i and -0.9 in the disc is far from geodesic.
  GeodesicPath chord;
  chord.dom = DomainSpec::ball(1);
  chord.kind = GeodesicPath::Kind::Segment;
  chord.sample = [](double t) {
    return Point{cx(-0.9 * (1.0 - t), 0.9 * t)};
  };
  CHECK(check_geodesic(chord, 64) > 0.01);
  GeodesicPath constant;
  constant.dom = DomainSpec::ball(1);
  constant.sample = [](double) { return Point{cx(0.1, 0.1)}; };
  CHECK(check_geodesic(constant, 64) == 0.0);
}

TEST_CASE("property: defect invariant under monotone reparametrization") {
  const GeodesicPath g = geodesic_segment(DomainSpec::polydisc(2), pt(-0.7, 0.2), pt(0.5, -0.1));
  GeodesicPath repar = g;
  auto inner = g.sample;
  repar.sample = [inner](double t) { return inner(t * t * (3.0 - 2.0 * t)); };  // smoothstep
  CHECK(std::abs(check_geodesic(g, 64) - check_geodesic(repar, 64)) <= 1e-9);
}

TEST_CASE("equicontinuity_probe: ball modulus is linear in the gap") {
  const EquicontinuityTable t = equicontinuity_probe(DomainSpec::ball(2), pt(0, 0), 16, 32);
  REQUIRE(t.delta.size() >= 3);
  // omega(delta) <= C delta with a modest constant on the ball.
  for (size_t i = 0; i + 1 < t.delta.size(); ++i) {
    CHECK(t.omega[i] <= 4.0 * t.delta[i]);
    CHECK(t.omega[i + 1] <= t.omega[i] + 1e-12);  // monotone in delta
  }
  CHECK_FALSE(t.blowup_flag);
  // Single ray: the table is that ray's own modulus.
  const EquicontinuityTable one = equicontinuity_probe(DomainSpec::ball(2), pt(0, 0), 1, 32);
  CHECK(one.per_ray_ratio.size() == 1);
}

TEST_CASE("export_path_csv emits parsable rows") {
  std::ostringstream os;
  export_path_csv(bidisc_example_segment(0.5), os, 33);
  const std::string text = os.str();
  CHECK(text.find("t,re_z1,im_z1,re_z2,im_z2,boundary_distance,k_to_start") == 0);
  size_t rows = 0;
  for (char c : text)
    if (c == '\n') ++rows;
  CHECK(rows == 34);  // header + 33 samples
}
