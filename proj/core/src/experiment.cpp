#include "koblab/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "koblab/csv.hpp"
#include "koblab/geodesics.hpp"
#include "koblab/parallel.hpp"
#include "koblab/visibility.hpp"

namespace koblab {

namespace {

const ordered_json& require(const ordered_json& j, const std::string& key,
                            const std::string& path) {
  if (!j.is_object()) throw config_error(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw config_error(path + "/" + key, "missing required key");
  return *it;
}

double as_double(const ordered_json& j, const std::string& path) {
  if (!j.is_number()) throw config_error(path, "expected a number");
  return j.get<double>();
}

long as_long(const ordered_json& j, const std::string& path) {
  if (!j.is_number_integer()) throw config_error(path, "expected an integer");
  return j.get<long>();
}

std::string as_string(const ordered_json& j, const std::string& path) {
  if (!j.is_string()) throw config_error(path, "expected a string");
  return j.get<std::string>();
}

cx complex_from_json(const ordered_json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw config_error(path, "expected a complex scalar as [re, im]");
  return cx(j[0].get<double>(), j[1].get<double>());
}

ordered_json complex_to_json(cx c) { return ordered_json::array({c.real(), c.imag()}); }

}  // namespace

ordered_json point_to_json(const Point& p) {
  ordered_json arr = ordered_json::array();
  for (const cx& c : p.z) arr.push_back(complex_to_json(c));
  return arr;
}

Point point_from_json(const ordered_json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw config_error(path, "expected a non-empty point array");
  Point p;
  for (size_t i = 0; i < j.size(); ++i)
    p.z.push_back(complex_from_json(j[i], path + "/" + std::to_string(i)));
  if (!p.finite()) throw config_error(path, "point has non-finite coordinates");
  return p;
}

ordered_json domain_to_json(const DomainSpec& dom) {
  ordered_json j;
  switch (dom.kind()) {
    case DomainSpec::Kind::Ball:
      j["type"] = "ball";
      j["dim"] = dom.dim();
      break;
    case DomainSpec::Kind::Polydisc:
      j["type"] = "polydisc";
      j["dim"] = dom.dim();
      break;
    case DomainSpec::Kind::Product: {
      j["type"] = "product";
      j["dim"] = dom.dim();
      ordered_json fs = ordered_json::array();
      for (const auto& f : dom.factors()) fs.push_back(domain_to_json(f));
      j["factors"] = fs;
      break;
    }
    case DomainSpec::Kind::Hull: {
      j["type"] = "hull";
      j["dim"] = dom.dim();
      ordered_json fs = ordered_json::array();
      for (const auto& f : dom.functionals()) {
        ordered_json fj;
        fj["normal"] = point_to_json(f.normal);
        fj["offset"] = f.offset;
        if (f.contact) fj["contact"] = point_to_json(*f.contact);
        fs.push_back(fj);
      }
      j["functionals"] = fs;
      j["interior"] = point_to_json(dom.anchor());
      ordered_json box;
      box["center"] = point_to_json(dom.box().center);
      box["radius"] = dom.box().radius;
      j["box"] = box;
      j["boundary_distance_semantics"] = "facet-plane minimum (lower bound)";
      break;
    }
  }
  return j;
}

DomainSpec domain_from_json(const ordered_json& j, const std::string& path) {
  const std::string type = as_string(require(j, "type", path), path + "/type");
  if (type == "ball") return DomainSpec::ball(static_cast<int>(as_long(require(j, "dim", path), path + "/dim")));
  if (type == "polydisc")
    return DomainSpec::polydisc(static_cast<int>(as_long(require(j, "dim", path), path + "/dim")));
  if (type == "product") {
    const ordered_json& fs = require(j, "factors", path);
    if (!fs.is_array() || fs.empty()) throw config_error(path + "/factors", "expected factors");
    std::vector<DomainSpec> factors;
    for (size_t i = 0; i < fs.size(); ++i)
      factors.push_back(domain_from_json(fs[i], path + "/factors/" + std::to_string(i)));
    return DomainSpec::product(std::move(factors));
  }
  if (type == "hull") {
    const int n = static_cast<int>(as_long(require(j, "dim", path), path + "/dim"));
    if (j.contains("preset") && j["preset"] == "ball_hull_64") return ball_hull_64();
    const ordered_json& fs = require(j, "functionals", path);
    std::vector<SupportFunctional> funcs;
    for (size_t i = 0; i < fs.size(); ++i) {
      const std::string fp = path + "/functionals/" + std::to_string(i);
      SupportFunctional f;
      f.normal = point_from_json(require(fs[i], "normal", fp), fp + "/normal");
      f.offset = as_double(require(fs[i], "offset", fp), fp + "/offset");
      if (fs[i].contains("contact"))
        f.contact = point_from_json(fs[i]["contact"], fp + "/contact");
      funcs.push_back(std::move(f));
    }
    const Point interior = point_from_json(require(j, "interior", path), path + "/interior");
    const ordered_json& bj = require(j, "box", path);
    CoordBox box;
    box.center = point_from_json(require(bj, "center", path + "/box"), path + "/box/center");
    const ordered_json& rj = require(bj, "radius", path + "/box");
    if (!rj.is_array() || static_cast<int>(rj.size()) != n)
      throw config_error(path + "/box/radius", "expected one radius per coordinate");
    for (const auto& r : rj) box.radius.push_back(r.get<double>());
    try {
      return DomainSpec::hull(n, std::move(funcs), interior, box);
    } catch (const std::exception& e) {
      throw config_error(path, e.what());
    }
  }
  if (type == "ball_hull_64") return ball_hull_64();
  throw config_error(path + "/type", "unknown domain type '" + type + "'");
}

ordered_json bracket_to_json(const DistanceBracket& b) {
  ordered_json j;
  j["lo"] = b.lo;
  j["hi"] = b.hi;
  j["exact"] = b.exact;
  return j;
}

MapExpr map_from_json(const ordered_json& j, const DomainSpec& ambient, const std::string& path) {
  const std::string op = as_string(require(j, "op", path), path + "/op");
  try {
    if (op == "disc_mobius")
      return MapExpr::disc_mobius(complex_from_json(require(j, "a", path), path + "/a"),
                                  as_double(require(j, "theta", path), path + "/theta"));
    if (op == "disc_hyperbolic")
      return MapExpr::disc_hyperbolic(complex_from_json(require(j, "sigma", path), path + "/sigma"),
                                      as_double(require(j, "step", path), path + "/step"));
    if (op == "disc_parabolic")
      return MapExpr::disc_parabolic(complex_from_json(require(j, "sigma", path), path + "/sigma"),
                                     as_double(require(j, "step", path), path + "/step"));
    if (op == "disc_power")
      return MapExpr::disc_power(
          static_cast<int>(as_long(require(j, "exponent", path), path + "/exponent")));
    if (op == "coord_map") {
      const ordered_json& cs = require(j, "components", path);
      std::vector<MapExpr> comps;
      const DomainSpec disc = DomainSpec::ball(1);
      for (size_t i = 0; i < cs.size(); ++i)
        comps.push_back(map_from_json(cs[i], disc, path + "/components/" + std::to_string(i)));
      return MapExpr::coord_map(std::move(comps));
    }
    if (op == "ball_automorphism")
      return MapExpr::ball_automorphism(
          point_from_json(require(j, "center", path), path + "/center"));
    if (op == "linear") {
      const ordered_json& mj = require(j, "matrix", path);
      std::vector<std::vector<cx>> matrix;
      for (size_t r = 0; r < mj.size(); ++r) {
        std::vector<cx> row;
        for (size_t c = 0; c < mj[r].size(); ++c)
          row.push_back(complex_from_json(mj[r][c], path + "/matrix"));
        matrix.push_back(std::move(row));
      }
      const DomainSpec dom =
          j.contains("domain") ? domain_from_json(j["domain"], path + "/domain") : ambient;
      return MapExpr::linear(std::move(matrix), dom);
    }
    if (op == "compose") {
      const ordered_json& sj = require(j, "stages", path);
      std::vector<MapExpr> stages;
      for (size_t i = 0; i < sj.size(); ++i)
        stages.push_back(map_from_json(sj[i], ambient, path + "/stages/" + std::to_string(i)));
      return MapExpr::compose(std::move(stages));
    }
    if (op == "conjugate") {
      const ordered_json& tj = require(j, "through", path);
      const Point z = point_from_json(require(tj, "z", path + "/through"), path + "/through/z");
      const Point w = point_from_json(require(tj, "w", path + "/through"), path + "/through/w");
      const ComplexGeodesic cg = complex_geodesic_through(ambient, z, w);
      return MapExpr::conjugate(
          cg, map_from_json(require(j, "inner", path), DomainSpec::ball(1), path + "/inner"));
    }
    if (op == "projection")
      return MapExpr::projection(
          ambient, static_cast<int>(as_long(require(j, "index", path), path + "/index")));
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(path, e.what());
  }
  throw config_error(path + "/op", "unknown map op '" + op + "'");
}

namespace {

struct Context {
  DomainSpec domain;
  ordered_json params;
  uint64_t seed = 0;
  long budget = kDefaultBudget;
  Tolerances tol;
  MetricOptions metric;
  int jobs = 1;
  std::filesystem::path out_dir;
};

void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << text;
}

Point param_point(const Context& ctx, const std::string& key) {
  return point_from_json(require(ctx.params, key, "/parameters"), "/parameters/" + key);
}

void check_in_domain(const Context& ctx, const Point& p, const std::string& key) {
  if (p.dim() != ctx.domain.dim())
    throw config_error("/parameters/" + key, "point dimension does not match the domain");
  if (!ctx.domain.contains(p))
    throw config_error("/parameters/" + key, "point is not inside the domain");
}

// ---- kind: distance ------------------------------------------------------
ordered_json run_distance(const Context& ctx, int& exit_code) {
  const ordered_json& pairs = require(ctx.params, "pairs", "/parameters");
  if (!pairs.is_array() || pairs.empty())
    throw config_error("/parameters/pairs", "expected a non-empty array of [z, w] pairs");
  std::vector<std::pair<Point, Point>> zw;
  for (size_t i = 0; i < pairs.size(); ++i) {
    const std::string p = "/parameters/pairs/" + std::to_string(i);
    if (!pairs[i].is_array() || pairs[i].size() != 2)
      throw config_error(p, "expected [z, w]");
    Point z = point_from_json(pairs[i][0], p + "/0");
    Point w = point_from_json(pairs[i][1], p + "/1");
    if (!ctx.domain.contains(z) || !ctx.domain.contains(w))
      throw config_error(p, "pair is not inside the domain");
    zw.emplace_back(std::move(z), std::move(w));
  }
  std::vector<DistanceBracket> brackets(zw.size());
  parallel_for(static_cast<int>(zw.size()), ctx.jobs, [&](int i) {
    MetricOptions opt = ctx.metric;
    opt.seed = Rng::child_seed(ctx.seed, static_cast<uint64_t>(i));
    brackets[static_cast<size_t>(i)] =
        kobayashi_distance(ctx.domain, zw[static_cast<size_t>(i)].first,
                           zw[static_cast<size_t>(i)].second, opt);
  });
  ordered_json out = ordered_json::array();
  std::ostringstream csv;
  csv_row(csv, {"pair", "lo", "hi", "exact"});
  for (size_t i = 0; i < brackets.size(); ++i) {
    out.push_back(bracket_to_json(brackets[i]));
    csv_row(csv, {std::to_string(i), csv_num(brackets[i].lo), csv_num(brackets[i].hi),
                  brackets[i].exact ? "true" : "false"});
  }
  write_text(ctx.out_dir / "distances.csv", csv.str());
  exit_code = 0;
  ordered_json res;
  res["brackets"] = out;
  if (brackets.size() == 1) res["bracket"] = bracket_to_json(brackets[0]);
  return res;
}

// ---- kind: geodesic ------------------------------------------------------
ordered_json run_geodesic(const Context& ctx, int& exit_code) {
  const std::string variant =
      as_string(require(ctx.params, "variant", "/parameters"), "/parameters/variant");
  GeodesicPath path;
  if (variant == "segment") {
    const Point z = param_point(ctx, "z"), w = param_point(ctx, "w");
    check_in_domain(ctx, z, "z");
    check_in_domain(ctx, w, "w");
    path = geodesic_segment(ctx.domain, z, w, ctx.metric);
  } else if (variant == "ray") {
    const Point z0 = param_point(ctx, "z0"), p = param_point(ctx, "p");
    check_in_domain(ctx, z0, "z0");
    path = geodesic_ray(ctx.domain, z0, p, ctx.tol.boundary);
  } else if (variant == "bidisc_example") {
    const double r = as_double(require(ctx.params, "r", "/parameters"), "/parameters/r");
    path = bidisc_example_segment(r);
  } else {
    throw config_error("/parameters/variant", "unknown variant '" + variant + "'");
  }
  const int samples = ctx.params.contains("samples")
                          ? static_cast<int>(ctx.params["samples"].get<long>())
                          : 64;
  const double defect = check_geodesic(path, samples, ctx.metric);
  std::ostringstream csv;
  export_path_csv(path, csv, 129, ctx.metric);
  write_text(ctx.out_dir / "path.csv", csv.str());
  ordered_json res;
  res["variant"] = variant;
  res["defect"] = defect;
  res["construction_defect"] = path.defect;
  res["kind"] = path.kind == GeodesicPath::Kind::Ray ? "ray" : "segment";
  exit_code = 0;
  return res;
}

// ---- kind: visibility ----------------------------------------------------
ordered_json run_visibility(const Context& ctx, int& exit_code) {
  const std::string mode =
      as_string(require(ctx.params, "mode", "/parameters"), "/parameters/mode");
  const Point p = param_point(ctx, "p"), q = param_point(ctx, "q");
  const int families = ctx.params.contains("families")
                           ? static_cast<int>(ctx.params["families"].get<long>())
                           : 3;
  const int len = ctx.params.contains("sequence_len")
                      ? static_cast<int>(ctx.params["sequence_len"].get<long>())
                      : 14;
  VisibilityVerdict v;
  if (mode == "strong") {
    const double K = ctx.params.contains("K_radius") ? ctx.params["K_radius"].get<double>() : 2.0;
    v = strong_visibility_probe(ctx.domain, p, q, K, families, len, ctx.metric);
  } else if (mode == "essential") {
    v = essential_visibility_probe(ctx.domain, p, q, len, ctx.metric);
  } else if (mode == "complex") {
    v = complex_visibility_probe(ctx.domain, p, q, len, ctx.metric);
  } else {
    throw config_error("/parameters/mode", "unknown mode '" + mode + "'");
  }
  std::ostringstream csv;
  csv_row(csv, {"family", "k", "r_k", "closest_approach", "argmin_t"});
  for (const auto& s : v.evidence)
    csv_row(csv, {std::to_string(s.family), std::to_string(s.k), csv_num(s.r_k),
                  csv_num(s.closest), csv_num(s.argmin_t)});
  write_text(ctx.out_dir / "evidence.csv", csv.str());
  ordered_json res;
  res["mode"] = mode;
  res["p"] = point_to_json(p);
  res["q"] = point_to_json(q);
  switch (v.outcome) {
    case VisibilityVerdict::Outcome::FiniteRadius:
      res["verdict"] = "finite";
      res["approach_radius"] = v.approach_radius;
      break;
    case VisibilityVerdict::Outcome::Escaping:
      res["verdict"] = "escaping";
      res["approach_radius"] = "escaping";
      break;
    case VisibilityVerdict::Outcome::Inconclusive:
      res["verdict"] = "inconclusive";
      break;
  }
  res["base"] = point_to_json(v.base);
  exit_code = 0;
  return res;
}

std::vector<GeodesicPath> family_paths(const Context& ctx) {
  const ordered_json& fam = require(ctx.params, "family", "/parameters");
  const std::string type = as_string(require(fam, "type", "/parameters/family"),
                                     "/parameters/family/type");
  std::vector<GeodesicPath> paths;
  if (type == "bidisc_example") {
    if (fam.contains("r_list")) {
      for (const auto& r : fam["r_list"]) paths.push_back(bidisc_example_segment(r.get<double>()));
    } else {
      const int k_max = static_cast<int>(as_long(require(fam, "k_max", "/parameters/family"),
                                                 "/parameters/family/k_max"));
      for (int k = 1; k <= k_max; ++k)
        paths.push_back(bidisc_example_segment(1.0 - std::pow(2.0, -k)));
    }
  } else if (type == "segments") {
    const ordered_json& pairs = require(fam, "pairs", "/parameters/family");
    for (size_t i = 0; i < pairs.size(); ++i) {
      const std::string p = "/parameters/family/pairs/" + std::to_string(i);
      paths.push_back(geodesic_segment(ctx.domain, point_from_json(pairs[i][0], p + "/0"),
                                       point_from_json(pairs[i][1], p + "/1"), ctx.metric));
    }
  } else {
    throw config_error("/parameters/family/type", "unknown family type '" + type + "'");
  }
  return paths;
}

// ---- kind: limit-set -----------------------------------------------------
ordered_json run_limit_set(const Context& ctx, int& exit_code, LimitSetEstimate* out_est) {
  auto paths = family_paths(ctx);
  const LimitSetEstimate est = limit_set_estimate(paths);
  std::ostringstream csv;
  csv_row(csv, {"cluster", "multiplicity", "source_path", "coords..."});
  ordered_json pts = ordered_json::array();
  for (size_t i = 0; i < est.points.size(); ++i) {
    std::vector<std::string> row = {std::to_string(i), std::to_string(est.multiplicity[i]),
                                    std::to_string(est.source[i])};
    for (const cx& c : est.points[i].z) {
      row.push_back(csv_num(c.real()));
      row.push_back(csv_num(c.imag()));
    }
    csv_row(csv, row);
    pts.push_back(point_to_json(est.points[i]));
  }
  write_text(ctx.out_dir / "clusters.csv", csv.str());
  ordered_json res;
  res["points"] = pts;
  res["multiplicity"] = est.multiplicity;
  res["eps_cluster"] = est.eps_cluster;
  res["h_cluster"] = est.h_cluster;
  if (out_est) *out_est = est;
  exit_code = 0;
  return res;
}

// ---- kind: conjecture1 ---------------------------------------------------
ordered_json run_conjecture1(const Context& ctx, int& exit_code) {
  LimitSetEstimate gamma;
  if (ctx.params.contains("points")) {
    const ordered_json& pj = ctx.params["points"];
    for (size_t i = 0; i < pj.size(); ++i) {
      gamma.points.push_back(point_from_json(pj[i], "/parameters/points/" + std::to_string(i)));
      gamma.multiplicity.push_back(1);
      gamma.source.push_back(-1);
    }
  } else {
    int dummy = 0;
    run_limit_set(ctx, dummy, &gamma);
  }
  const auto classes = conjecture1_classify(ctx.domain, gamma);
  int violations = 0;
  ordered_json cj = ordered_json::array();
  std::ostringstream csv;
  csv_row(csv, {"case", "witness", "p...", "q..."});
  for (const auto& c : classes) {
    ordered_json e;
    e["p"] = point_to_json(c.p);
    e["q"] = point_to_json(c.q);
    e["case"] = c.result == PairCase::Case1 ? "interior_chord"
                : c.result == PairCase::Case2 ? "boundary_chord_line_disjoint"
                                              : "violation";
    e["witness"] = c.witness;
    cj.push_back(e);
    if (c.result == PairCase::Violation) ++violations;
    std::vector<std::string> row = {e["case"].get<std::string>(), c.witness};
    for (const cx& v : c.p.z) {
      row.push_back(csv_num(v.real()));
      row.push_back(csv_num(v.imag()));
    }
    for (const cx& v : c.q.z) {
      row.push_back(csv_num(v.real()));
      row.push_back(csv_num(v.imag()));
    }
    csv_row(csv, row);
  }
  write_text(ctx.out_dir / "classifications.csv", csv.str());
  ordered_json res;
  res["pairs"] = cj;
  res["violations"] = violations;
  exit_code = violations > 0 ? 2 : 0;
  return res;
}

// ---- kind: iterate -------------------------------------------------------
ordered_json run_iterate(const Context& ctx, int& exit_code) {
  const MapExpr F = map_from_json(require(ctx.params, "map", "/parameters"), ctx.domain,
                                  "/parameters/map");
  std::vector<Point> starts;
  if (ctx.params.contains("starts")) {
    const ordered_json& sj = ctx.params["starts"];
    for (size_t i = 0; i < sj.size(); ++i)
      starts.push_back(point_from_json(sj[i], "/parameters/starts/" + std::to_string(i)));
  } else {
    starts.push_back(param_point(ctx, "z0"));
  }
  for (const auto& s : starts)
    if (!F.input_domain().contains(s))
      throw config_error("/parameters/starts", "start outside the map domain");
  const int n_max = static_cast<int>(as_long(require(ctx.params, "n_max", "/parameters"),
                                             "/parameters/n_max"));
  const double eps = ctx.params.contains("eps") ? ctx.params["eps"].get<double>() : 1e-5;

  std::vector<OrbitRecord> orbits(starts.size());
  parallel_for(static_cast<int>(starts.size()), ctx.jobs, [&](int i) {
    orbits[static_cast<size_t>(i)] = iterate_orbit(F, starts[static_cast<size_t>(i)], n_max,
                                                   ctx.metric);
  });
  for (size_t s = 0; s < orbits.size(); ++s) {
    std::ostringstream csv;
    std::vector<std::string> head = {"n"};
    for (int j = 0; j < F.input_domain().dim(); ++j) {
      head.push_back("re_z" + std::to_string(j + 1));
      head.push_back("im_z" + std::to_string(j + 1));
    }
    head.push_back("dist_to_start");
    head.push_back("is_record");
    head.push_back("boundary_distance");
    csv_row(csv, head);
    const auto& orbit = orbits[s];
    for (size_t n = 0; n < orbit.points.size(); ++n) {
      std::vector<std::string> row = {std::to_string(n)};
      for (const cx& c : orbit.points[n].z) {
        row.push_back(csv_num(c.real()));
        row.push_back(csv_num(c.imag()));
      }
      row.push_back(csv_num(orbit.dist_to_start[n]));
      const bool rec = std::find(orbit.record_indices.begin(), orbit.record_indices.end(),
                                 static_cast<int>(n)) != orbit.record_indices.end();
      row.push_back(rec ? "1" : "0");
      row.push_back(csv_num(F.input_domain().boundary_distance(orbit.points[n])));
      csv_row(csv, row);
    }
    write_text(ctx.out_dir / ("orbit_" + std::to_string(s) + ".csv"), csv.str());
  }
  const TargetSetEstimate target = target_set_estimate(F, starts, n_max, eps, ctx.metric);
  ordered_json res;
  ordered_json rj = ordered_json::array();
  for (const auto& orbit : orbits) {
    ordered_json oj;
    oj["length"] = orbit.points.size() - 1;
    oj["records"] = orbit.record_indices;
    oj["truncated"] = orbit.truncated;
    if (orbit.truncated) oj["truncate_reason"] = orbit.truncate_reason;
    rj.push_back(oj);
  }
  res["orbits"] = rj;
  ordered_json tj = ordered_json::array();
  for (const auto& p : target.points) tj.push_back(point_to_json(p));
  res["target_clusters"] = tj;
  res["target_eps"] = eps;
  exit_code = 0;
  return res;
}

// ---- kind: horosphere ----------------------------------------------------
ordered_json run_horosphere(const Context& ctx, int& exit_code) {
  ordered_json res;
  if (ctx.params.contains("map")) {
    const MapExpr F = map_from_json(ctx.params["map"], ctx.domain, "/parameters/map");
    const Point z0 = param_point(ctx, "z0");
    check_in_domain(ctx, z0, "z0");
    const int n_max = static_cast<int>(as_long(require(ctx.params, "n_max", "/parameters"),
                                               "/parameters/n_max"));
    const int tail = static_cast<int>(as_long(require(ctx.params, "tail", "/parameters"),
                                              "/parameters/tail"));
    const InvarianceReport rep =
        horosphere_orbit_invariance_check(F, z0, n_max, tail, ctx.tol.horosphere, ctx.metric);
    std::ostringstream csv;
    csv_row(csv, {"n", "estimate"});
    for (size_t i = 0; i < rep.per_n.size(); ++i)
      csv_row(csv, {std::to_string(i + 1), csv_num(rep.per_n[i])});
    write_text(ctx.out_dir / "invariance.csv", csv.str());
    res["check"] = "orbit_invariance";
    res["pass"] = rep.pass;
    res["inconclusive"] = rep.inconclusive;
    res["max_estimate"] = rep.max_estimate;
    res["n_checked"] = rep.n_checked;
    exit_code = rep.inconclusive ? 0 : (rep.pass ? 0 : 2);
    return res;
  }
  HorosphereSpec spec;
  spec.dom = ctx.domain;
  spec.z0 = param_point(ctx, "z0");
  const ordered_json& seq = require(ctx.params, "sequence", "/parameters");
  for (size_t i = 0; i < seq.size(); ++i)
    spec.sequence.push_back(point_from_json(seq[i], "/parameters/sequence/" + std::to_string(i)));
  spec.R = as_double(require(ctx.params, "R", "/parameters"), "/parameters/R");
  const Point z = param_point(ctx, "z");
  const int tail = static_cast<int>(as_long(require(ctx.params, "tail", "/parameters"),
                                            "/parameters/tail"));
  const HorosphereEstimate est = horosphere_limsup(spec, z, tail, ctx.tol.horosphere, ctx.metric);
  res["check"] = "membership";
  res["limsup_estimate"] = est.limsup;
  res["member"] = est.member;
  res["threshold"] = 0.5 * std::log(spec.R);
  res["monotone_tail"] = est.monotone_tail;
  res["tail_values"] = est.tail_values;
  exit_code = 0;
  return res;
}

// ---- kind: julia ---------------------------------------------------------
ordered_json run_julia(const Context& ctx, int& exit_code) {
  const MapExpr F = map_from_json(require(ctx.params, "map", "/parameters"), ctx.domain,
                                  "/parameters/map");
  std::vector<int> m_list;
  if (ctx.params.contains("m_list"))
    for (const auto& m : ctx.params["m_list"]) m_list.push_back(static_cast<int>(m.get<long>()));
  else
    m_list = {1, 2, 5};
  const int grid = ctx.params.contains("grid") ? static_cast<int>(ctx.params["grid"].get<long>())
                                               : 33;
  const int n_max = ctx.params.contains("n_max")
                        ? static_cast<int>(ctx.params["n_max"].get<long>())
                        : 200;
  ordered_json checks = ordered_json::array();
  bool all_pass = true;
  bool any_conclusive = false;
  std::ostringstream csv;
  csv_row(csv, {"m", "pass", "max_violation", "residual", "j0"});
  for (int m : m_list) {
    const JuliaData data = julia_data_from_records(F, zero_point(ctx.domain.dim()), n_max, m,
                                                   ctx.metric);
    const JuliaReport rep =
        julia_polydisc_check(F, m, data.q_m, data.sigma, data.j0, grid, ctx.tol.julia);
    ordered_json cj;
    cj["m"] = m;
    cj["q_m"] = point_to_json(data.q_m);
    cj["sigma"] = complex_to_json(data.sigma);
    cj["j0"] = data.j0;
    cj["residual"] = data.residual;
    cj["pass"] = rep.pass;
    cj["inconclusive"] = rep.inconclusive;
    cj["max_violation"] = rep.max_violation;
    cj["limit_note"] = rep.limit_note;
    checks.push_back(cj);
    if (!rep.inconclusive) {
      any_conclusive = true;
      all_pass = all_pass && rep.pass;
    }
    csv_row(csv, {std::to_string(m), rep.pass ? "1" : "0", csv_num(rep.max_violation),
                  csv_num(data.residual), std::to_string(data.j0)});
  }
  write_text(ctx.out_dir / "julia.csv", csv.str());
  ordered_json res;
  res["checks"] = checks;
  res["pass"] = all_pass && any_conclusive;
  exit_code = (any_conclusive && !all_pass) ? 2 : 0;
  return res;
}

// ---- kind: dw-verdict ----------------------------------------------------
ordered_json run_dw(const Context& ctx, int& exit_code) {
  const MapExpr F = map_from_json(require(ctx.params, "map", "/parameters"), ctx.domain,
                                  "/parameters/map");
  std::vector<Point> starts;
  if (ctx.params.contains("starts")) {
    const ordered_json& sj = ctx.params["starts"];
    for (size_t i = 0; i < sj.size(); ++i)
      starts.push_back(point_from_json(sj[i], "/parameters/starts/" + std::to_string(i)));
  } else {
    const int count = ctx.params.contains("start_count")
                          ? static_cast<int>(ctx.params["start_count"].get<long>())
                          : 10;
    Rng rng(ctx.seed);
    for (int i = 0; i < count; ++i)
      starts.push_back(random_interior_point(ctx.domain, rng, 0.8));
  }
  const int n_max = ctx.params.contains("n_max")
                        ? static_cast<int>(ctx.params["n_max"].get<long>())
                        : 500;
  const double eps = ctx.params.contains("eps") ? ctx.params["eps"].get<double>() : 1e-6;
  const DenjoyWolffVerdict v = denjoy_wolff_verdict(F, starts, n_max, eps, ctx.metric);
  ordered_json res;
  switch (v.kind) {
    case DenjoyWolffVerdict::Kind::ConvergesTo:
      res["verdict"] = "converges_to";
      res["point"] = point_to_json(v.point);
      break;
    case DenjoyWolffVerdict::Kind::MultiplePoints: {
      res["verdict"] = "multiple_points";
      ordered_json cl = ordered_json::array();
      for (const auto& p : v.cluster) cl.push_back(point_to_json(p));
      res["cluster"] = cl;
      break;
    }
    case DenjoyWolffVerdict::Kind::Inconclusive:
      res["verdict"] = "inconclusive";
      res["note"] = v.note;
      break;
  }
  res["eps"] = eps;
  res["n_max"] = n_max;
  exit_code = 0;
  return res;
}

}  // namespace

ExperimentResult run_experiment(const ordered_json& config,
                                const std::filesystem::path& out_dir,
                                const RunOptions& options) {
  if (!config.is_object()) throw config_error("/", "config must be a JSON object");
  const std::string schema = as_string(require(config, "schema", "/"), "/schema");
  if (schema != "v1") throw config_error("/schema", "unsupported schema '" + schema + "'");
  const std::string kind = as_string(require(config, "kind", "/"), "/kind");

  Context ctx;
  ctx.domain = domain_from_json(require(config, "domain", "/"), "/domain");
  ctx.params = require(config, "parameters", "/");
  const ordered_json& seed_json = require(config, "seed", "/");
  if (!seed_json.is_number_integer())
    throw config_error("/seed", "seed is required (no implicit entropy)");
  ctx.seed = options.seed_override.value_or(seed_json.get<uint64_t>());
  ctx.budget = config.contains("budget") ? config["budget"].get<long>() : kDefaultBudget;
  if (options.budget_override) ctx.budget = *options.budget_override;
  if (config.contains("tolerances")) {
    const ordered_json& tj = config["tolerances"];
    if (tj.contains("boundary")) ctx.tol.boundary = tj["boundary"].get<double>();
    if (tj.contains("exact")) ctx.tol.exact = tj["exact"].get<double>();
    if (tj.contains("horosphere")) ctx.tol.horosphere = tj["horosphere"].get<double>();
    if (tj.contains("julia")) ctx.tol.julia = tj["julia"].get<double>();
  }
  ctx.metric.budget = ctx.budget;
  ctx.metric.seed = ctx.seed;
  ctx.metric.tol_exact = ctx.tol.exact;
  ctx.jobs = options.jobs;
  ctx.out_dir = out_dir;

  std::filesystem::create_directories(out_dir);

  // Echo of the effective config, for reproducibility.
  ordered_json echo = config;
  echo["seed"] = ctx.seed;
  echo["budget"] = ctx.budget;
  write_text(out_dir / "config.json", echo.dump(2) + "\n");

  int exit_code = 0;
  ordered_json result;
  if (kind == "distance")
    result = run_distance(ctx, exit_code);
  else if (kind == "geodesic")
    result = run_geodesic(ctx, exit_code);
  else if (kind == "visibility")
    result = run_visibility(ctx, exit_code);
  else if (kind == "limit-set")
    result = run_limit_set(ctx, exit_code, nullptr);
  else if (kind == "conjecture1")
    result = run_conjecture1(ctx, exit_code);
  else if (kind == "iterate")
    result = run_iterate(ctx, exit_code);
  else if (kind == "horosphere")
    result = run_horosphere(ctx, exit_code);
  else if (kind == "julia")
    result = run_julia(ctx, exit_code);
  else if (kind == "dw-verdict")
    result = run_dw(ctx, exit_code);
  else
    throw config_error("/kind", "unknown experiment kind '" + kind + "'");

  ordered_json envelope;
  envelope["schema"] = "v1";
  envelope["kind"] = kind;
  ordered_json meta;
  meta["seed"] = ctx.seed;
  meta["budget"] = ctx.budget;
  ordered_json tol;
  tol["boundary"] = ctx.tol.boundary;
  tol["exact"] = ctx.tol.exact;
  tol["horosphere"] = ctx.tol.horosphere;
  tol["julia"] = ctx.tol.julia;
  meta["tolerances"] = tol;
  meta["domain"] = domain_to_json(ctx.domain);
  envelope["meta"] = meta;
  envelope["result"] = result;
  envelope["status"] = exit_code == 0 ? "ok" : "fail";
  write_text(out_dir / "result.json", envelope.dump(2) + "\n");

  ExperimentResult out;
  out.exit_code = exit_code;
  out.result = envelope;
  return out;
}

}  // namespace koblab
