// Acceptance suite: one criterion per entry, one PASS/FAIL line each.
// Every tolerance is pinned in code; the binary exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "koblab/domains.hpp"
#include "koblab/dynamics.hpp"
#include "koblab/geodesics.hpp"
#include "koblab/metric.hpp"
#include "koblab/visibility.hpp"
#include "oracles.hpp"

using namespace koblab;

namespace {

struct Criterion {
  const char* name;
  std::function<bool(std::string&)> run;
};

Point pt(double a, double b) { return Point{cx(a), cx(b)}; }
Point d1(double a) { return Point{cx(a)}; }

bool check(bool cond, std::string& why, const std::string& msg) {
  if (!cond && why.empty()) why = msg;
  return cond;
}

// 1. Product max-formula on 200 seeded pairs in D^3, agreement to 1e-12.
bool crit_product_max(std::string& why) {
  const DomainSpec D3 = DomainSpec::polydisc(3);
  Rng rng(2024);
  bool ok = true;
  for (int i = 0; i < 200; ++i) {
    const Point z = random_interior_point(D3, rng, 0.98);
    const Point w = random_interior_point(D3, rng, 0.98);
    double coord_max = 0.0;
    for (int j = 0; j < 3; ++j)
      coord_max = std::max(coord_max, poincare_distance(z[j], w[j]));
    const DistanceBracket b = kobayashi_distance(D3, z, w);
    ok &= check(b.exact, why, "bracket not exact on the polydisc");
    ok &= check(std::abs(b.hi - coord_max) <= 1e-12, why,
                "product distance deviates from the coordinate max");
  }
  return ok;
}

// 2. Bent bidisc geodesics: exact endpoints, defect <= 1e-9 over 64
//    Chebyshev triples, arc law k(gamma(0), gamma(t)) = arctanh(2rt).
bool crit_bidisc_geodesics(std::string& why) {
  bool ok = true;
  for (double r : {0.5, 0.9, 0.99}) {
    const GeodesicPath g = bidisc_example_segment(r);
    ok &= check(g.sample(0.0)[0] == cx(-r) && g.sample(0.0)[1] == cx(0.0), why,
                "left endpoint not exact");
    ok &= check(g.sample(1.0)[0] == cx(r) && g.sample(1.0)[1] == cx(0.0), why,
                "right endpoint not exact");
    ok &= check(check_geodesic(g, 64) <= 1e-9, why, "defect above 1e-9");
    for (int i = 0; i <= 64; ++i) {
      const double t = 0.5 * i / 64.0;
      const double k = model_distance(g.dom, g.sample(0.0), g.sample(t));
      ok &= check(std::abs(k - std::atanh(2.0 * r * t)) <= 1e-10, why,
                  "arc law arctanh(2rt) violated");
    }
  }
  return ok;
}

// 3. Escape of the bent family: closest approach matches the crossing
//    oracle to 1e-6 for r = 1 - 10^-j, strictly increasing, > 2.0 by j = 4.
bool crit_escape(std::string& why) {
  bool ok = true;
  const Point base = pt(0, 0);
  double prev = -1.0;
  for (int j = 1; j <= 6; ++j) {
    const double r = 1.0 - std::pow(10.0, -j);
    const double v = closest_approach(bidisc_example_segment(r), base);
    ok &= check(std::abs(v - oracles::tent_crossing_value(r)) <= 1e-6, why,
                "closest approach misses the crossing oracle at j=" + std::to_string(j));
    ok &= check(v > prev, why, "closest approach not strictly increasing");
    if (j == 4) ok &= check(v > 2.0, why, "approach does not exceed 2.0 at r = 1-1e-4");
    prev = v;
  }
  return ok;
}

// 4. Essential visibility of ((-1,0),(1,0)): a geodesic with approach <= 1.0
//    exists for every k <= 20.
bool crit_essential(std::string& why) {
  const auto v =
      essential_visibility_probe(DomainSpec::polydisc(2), pt(-1, 0), pt(1, 0), 20);
  bool ok = check(v.outcome == VisibilityVerdict::Outcome::FiniteRadius, why,
                  "essential probe did not return a finite radius");
  ok &= check(v.evidence.size() == 20, why, "probe did not cover k = 1..20");
  for (const auto& s : v.evidence)
    ok &= check(s.closest <= 1.0, why,
                "no geodesic with approach <= 1.0 at k=" + std::to_string(s.k));
  return ok;
}

// 5. Bracket engine: sandwich on 50 seeded pairs per model at budget 1e4,
//    and gap <= 1e-3 on the 64-facet circumscribed hull pair (0, 0.75 e1).
bool crit_bracket(std::string& why) {
  bool ok = true;
  MetricOptions opt;
  opt.budget = 10000;
  for (const DomainSpec& dom : {DomainSpec::ball(2), DomainSpec::polydisc(2)}) {
    Rng rng(4242);
    for (int i = 0; i < 50; ++i) {
      const Point z = random_interior_point(dom, rng, 0.95);
      const Point w = random_interior_point(dom, rng, 0.95);
      const double closed = model_distance(dom, z, w);
      opt.seed = Rng::child_seed(4242, static_cast<uint64_t>(i));
      const double lo = caratheodory_lower_bound(dom, z, w, opt);
      const double hi = lempert_upper_bound(dom, z, w, opt);
      ok &= check(lo <= closed + 1e-12, why, "lower bound exceeds the closed form");
      ok &= check(closed <= hi + 1e-12, why, "upper bound below the closed form");
    }
  }
  const DistanceBracket b = kobayashi_distance(ball_hull_64(), pt(0, 0), pt(0.75, 0), opt);
  ok &= check(b.hi - b.lo <= 1e-3, why, "hull bracket gap above 1e-3");
  ok &= check(b.lo <= b.hi, why, "bracket ordering violated");
  return ok;
}

// 6. Record sequences: exact prefix-max invariant on 100 random profiles
//    plus the hyperbolic orbit with records 1..n.
bool crit_records(std::string& why) {
  bool ok = true;
  Rng rng(606);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> profile;
    const int len = rng.uniform_int(1, 80);
    for (int i = 0; i < len; ++i) profile.push_back(rng.uniform(0.0, 5.0));
    const auto recs = record_indices_of(profile);
    ok &= check(recs == oracles::records_rescan(profile), why,
                "record extraction disagrees with the rescan oracle");
    for (int nk : recs)
      for (int m = 1; m <= nk; ++m)
        ok &= check(profile[m - 1] <= profile[nk - 1], why, "prefix-max violated");
  }
  const MapExpr hyp = MapExpr::disc_hyperbolic(1.0, 0.1);
  const OrbitRecord orbit = iterate_orbit(hyp, d1(0.0), 100);
  ok &= check(orbit.record_indices.size() == 100, why, "hyperbolic records missing");
  for (int n = 1; n <= 100; ++n)
    ok &= check(orbit.record_indices[n - 1] == n, why, "hyperbolic records not 1..n");
  return ok;
}

// 7. Horosphere invariance for hyperbolic/parabolic automorphisms and their
//    polydisc products: estimates <= 1e-6 for n <= 200 with tail 50.
bool crit_horosphere(std::string& why) {
  const MapExpr hyp = MapExpr::disc_hyperbolic(1.0, 0.1);
  const MapExpr par = MapExpr::disc_parabolic(1.0, 0.5);
  const std::vector<std::pair<const char*, MapExpr>> maps = {
      {"hyperbolic", hyp},
      {"parabolic", par},
      {"hyp x par", MapExpr::coord_map({hyp, par})},
      {"par x hyp", MapExpr::coord_map({par, hyp})},
      {"hyp x hyp", MapExpr::coord_map({hyp, MapExpr::disc_hyperbolic(-1.0, 0.07)})},
  };
  bool ok = true;
  for (const auto& [name, F] : maps) {
    const Point z0 = zero_point(F.input_domain().dim());
    const InvarianceReport rep = horosphere_orbit_invariance_check(F, z0, 300, 50);
    ok &= check(!rep.inconclusive, why, std::string(name) + ": inconclusive");
    ok &= check(rep.n_checked >= 200, why, std::string(name) + ": fewer than 200 n checked");
    ok &= check(rep.pass && rep.max_estimate <= 1e-6, why,
                std::string(name) + ": estimate above 1e-6");
  }
  return ok;
}

// 8. Julia inequality for F = hyperbolic x (z/2) on D^2, m in {1,2,5},
//    33 x 33 zeta grid, tolerance 1e-8.
bool crit_julia(std::string& why) {
  const MapExpr F = MapExpr::coord_map({MapExpr::disc_hyperbolic(1.0, 0.3),
                                        MapExpr::linear({{cx(0.5)}}, DomainSpec::ball(1))});
  bool ok = true;
  for (int m : {1, 2, 5}) {
    const JuliaData data = julia_data_from_records(F, pt(0, 0), 200, m);
    const JuliaReport rep = julia_polydisc_check(F, m, data.q_m, data.sigma, data.j0, 33, 1e-8);
    ok &= check(!rep.inconclusive, why, "julia check inconclusive at m=" + std::to_string(m));
    ok &= check(rep.pass, why, "LHS exceeds RHS + 1e-8 at m=" + std::to_string(m));
  }
  return ok;
}

// 9. Denjoy-Wolff on the ball: 5 fixed-point-free automorphisms, 10 starts
//    each, ConvergesTo a common point within 1e-6 at n_max = 500.
bool crit_dw_ball(std::string& why) {
  const DomainSpec B2 = DomainSpec::ball(2);
  auto automorphism = [&](double c, double alpha, double beta) {
    const MapExpr phi = MapExpr::ball_automorphism(pt(-c, 0));
    const MapExpr neg = MapExpr::linear({{cx(-1), cx(0)}, {cx(0), cx(-1)}}, B2);
    const MapExpr psi = MapExpr::compose({phi, neg});
    const cx ca(std::cos(alpha), std::sin(alpha)), cb(std::cos(beta), std::sin(beta));
    // Unitary mixing rotation: conjugation moves the attracting point.
    const MapExpr U = MapExpr::linear(
        {{ca * std::cos(beta), -ca * std::sin(beta)}, {cb * std::sin(beta), cb * std::cos(beta)}},
        B2);
    const MapExpr Uinv = MapExpr::linear({{std::conj(ca) * std::cos(beta),
                                           std::conj(cb) * std::sin(beta)},
                                          {-std::conj(ca) * std::sin(beta),
                                           std::conj(cb) * std::cos(beta)}},
                                         B2);
    return MapExpr::compose({Uinv, psi, U});
  };
  const std::vector<MapExpr> maps = {
      automorphism(0.20, 0.0, 0.0),  automorphism(0.25, 0.5, 0.3),
      automorphism(0.30, 1.2, 0.9),  automorphism(0.35, -0.7, 1.4),
      automorphism(0.40, 2.1, -0.6),
  };
  bool ok = true;
  for (size_t i = 0; i < maps.size(); ++i) {
    Rng rng(Rng::child_seed(909, i));
    std::vector<Point> starts;
    for (int s = 0; s < 10; ++s) starts.push_back(random_interior_point(B2, rng, 0.8));
    const auto dw = denjoy_wolff_verdict(maps[i], starts, 500, 1e-6);
    ok &= check(dw.kind == DenjoyWolffVerdict::Kind::ConvergesTo, why,
                "map " + std::to_string(i) + " did not converge to a single point");
  }
  return ok;
}

// 10. Slice containment of target clusters for 5 product maps on D^2.
bool crit_slice(std::string& why) {
  const std::vector<MapExpr> maps = {
      MapExpr::coord_map({MapExpr::disc_hyperbolic(1.0, 0.2), MapExpr::disc_mobius(0.0, 2.39996)}),
      MapExpr::coord_map({MapExpr::disc_hyperbolic(1.0, 0.3), MapExpr::disc_mobius(0.0, M_PI / 3)}),
      MapExpr::coord_map({MapExpr::disc_hyperbolic(1.0, 0.25),
                          MapExpr::disc_hyperbolic(cx(0, 1), 0.15)}),
      MapExpr::coord_map({MapExpr::disc_hyperbolic(1.0, 0.2),
                          MapExpr::linear({{cx(0.5)}}, DomainSpec::ball(1))}),
      MapExpr::coord_map({MapExpr::linear({{cx(0.6)}}, DomainSpec::ball(1)),
                          MapExpr::disc_hyperbolic(-1.0, 0.3)}),
  };
  bool ok = true;
  for (size_t i = 0; i < maps.size(); ++i) {
    const MapExpr& F = maps[i];
    Rng rng(Rng::child_seed(1010, i));
    std::vector<Point> starts = {pt(0, 0.3)};
    for (int s = 0; s < 2; ++s) starts.push_back(random_interior_point(F.input_domain(), rng, 0.6));
    const auto target = target_set_estimate(F, starts, 400, 1e-5);
    ok &= check(!target.points.empty(), why,
                "map " + std::to_string(i) + ": empty target estimate");
    // xi: the terminal orbit point with near-unimodular coordinates snapped.
    const OrbitRecord orbit = iterate_orbit(F, starts.front(), 400);
    Point xi = orbit.points.back();
    for (int j = 0; j < 2; ++j)
      if (std::abs(xi[j]) >= 1.0 - 1e-6) xi[j] /= std::abs(xi[j]);
    const auto rep = slice_containment_check(target.points, xi, 1e-4);
    ok &= check(rep.pass, why, "map " + std::to_string(i) + ": slice containment failed");
  }
  return ok;
}

// 11. Chord/line dichotomy on the bent bidisc family: zero violations.
bool crit_conjecture1(std::string& why) {
  std::vector<GeodesicPath> fam;
  for (int k = 1; k <= 20; ++k)
    fam.push_back(bidisc_example_segment(1.0 - std::pow(2.0, -k)));
  const LimitSetEstimate gamma = limit_set_estimate(fam);
  bool ok = check(!gamma.points.empty(), why, "empty limit-set estimate");
  if (!ok) return false;
  const auto classes = conjecture1_classify(DomainSpec::polydisc(2), gamma);
  int violations = 0;
  for (const auto& c : classes)
    if (c.result == PairCase::Violation) ++violations;
  ok &= check(violations == 0, why,
              std::to_string(violations) + " violations among " +
                  std::to_string(classes.size()) + " pairs");
  return ok;
}

// 12. Holomorphic contraction for every map in the suite on 100 seeded
//     model pairs: k(F z, F w) <= k(z, w) + 1e-9.
bool crit_contraction(std::string& why) {
  const DomainSpec B2 = DomainSpec::ball(2);
  const ComplexGeodesic cg =
      complex_geodesic_through(DomainSpec::polydisc(2), pt(-0.5, 0.1), pt(0.5, 0.2));
  const std::vector<MapExpr> maps = {
      MapExpr::disc_mobius(cx(0.3, 0.1), 0.7),
      MapExpr::disc_hyperbolic(1.0, 0.2),
      MapExpr::disc_parabolic(cx(0, 1), 0.6),
      MapExpr::disc_power(3),
      MapExpr::coord_map({MapExpr::disc_hyperbolic(1.0, 0.15), MapExpr::disc_parabolic(1.0, 0.4)}),
      MapExpr::ball_automorphism(pt(0.2, -0.1)),
      MapExpr::linear({{cx(0.4), cx(0.2)}, {cx(-0.1), cx(0.5)}}, B2),
      MapExpr::compose({MapExpr::ball_automorphism(pt(-0.3, 0)),
                        MapExpr::linear({{cx(-1), cx(0)}, {cx(0), cx(-1)}}, B2)}),
      MapExpr::conjugate(cg, MapExpr::disc_parabolic(1.0, 1.0)),
      MapExpr::projection(DomainSpec::polydisc(2), 1),
  };
  bool ok = true;
  for (size_t i = 0; i < maps.size(); ++i) {
    const MapExpr& F = maps[i];
    Rng rng(Rng::child_seed(1212, i));
    for (int trial = 0; trial < 100; ++trial) {
      const Point z = random_interior_point(F.input_domain(), rng, 0.97);
      const Point w = random_interior_point(F.input_domain(), rng, 0.97);
      const double before = model_distance(F.input_domain(), z, w);
      const double after = model_distance(F.output_domain(), F.apply(z), F.apply(w));
      ok &= check(after <= before + 1e-9, why,
                  "map " + std::to_string(i) + " expands the distance");
    }
  }
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"product max-formula (200 pairs, 1e-12)", crit_product_max},
      {"bent bidisc geodesics (endpoints, defect, arc law)", crit_bidisc_geodesics},
      {"bent-family escape vs crossing oracle (1e-6)", crit_escape},
      {"essential visibility of (-1,0),(1,0) on the bidisc", crit_essential},
      {"bracket engine sandwich + hull gap 1e-3 at budget 1e4", crit_bracket},
      {"record sequences: exact prefix-max", crit_records},
      {"horosphere invariance (n<=200, tail 50, 1e-6)", crit_horosphere},
      {"polydisc Julia inequality (33x33 grid, 1e-8)", crit_julia},
      {"Denjoy-Wolff on the ball (5 automorphisms x 10 starts)", crit_dw_ball},
      {"slice containment of target clusters (tol 1e-4)", crit_slice},
      {"chord/line dichotomy: zero violations", crit_conjecture1},
      {"holomorphic contraction across the map suite (1e-9)", crit_contraction},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string why;
    bool ok = false;
    try {
      ok = criteria[i].run(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%2zu/12] %s  %s (%.2fs)%s%s\n", i + 1, ok ? "PASS" : "FAIL",
                criteria[i].name, secs, why.empty() ? "" : " -- ", why.c_str());
    if (!ok) ++failures;
  }
  if (failures) std::printf("%d criterion(s) FAILED\n", failures);
  else std::printf("all 12 criteria passed\n");
  return failures;
}
