#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "koblab/experiment.hpp"

using namespace koblab;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("koblab_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ordered_json base_config(const std::string& kind) {
  ordered_json j;
  j["schema"] = "v1";
  j["kind"] = kind;
  j["seed"] = 7;
  j["domain"] = {{"type", "polydisc"}, {"dim", 2}};
  j["parameters"] = ordered_json::object();
  return j;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(is), {});
}

}  // namespace

TEST_CASE("distance experiment: documented example value") {
  ordered_json cfg = base_config("distance");
  cfg["parameters"]["pairs"] = ordered_json::array(
      {ordered_json::array({point_to_json(Point{cx(0), cx(0)}),
                            point_to_json(Point{cx(0.75), cx(0)})})});
  const fs::path out = temp_dir("distance");
  const auto res = run_experiment(cfg, out);
  CHECK(res.exit_code == 0);
  const auto& b = res.result["result"]["bracket"];
  CHECK(b["lo"].get<double>() == doctest::Approx(0.97296).epsilon(1e-5));
  CHECK(b["hi"].get<double>() == b["lo"].get<double>());
  CHECK(b["exact"].get<bool>());
  CHECK(fs::exists(out / "distances.csv"));
  CHECK(fs::exists(out / "config.json"));
}

TEST_CASE("determinism: identical config gives byte-identical result JSON") {
  ordered_json cfg = base_config("visibility");
  cfg["parameters"]["mode"] = "strong";
  cfg["parameters"]["p"] = point_to_json(Point{cx(-1), cx(0)});
  cfg["parameters"]["q"] = point_to_json(Point{cx(1), cx(0)});
  cfg["parameters"]["sequence_len"] = 12;
  const fs::path out1 = temp_dir("det1"), out2 = temp_dir("det2");
  const auto r1 = run_experiment(cfg, out1);
  const auto r2 = run_experiment(cfg, out2);
  CHECK(r1.exit_code == 0);
  CHECK(r1.result["result"]["verdict"] == "escaping");  // not strongly visible, exit 0
  CHECK(slurp(out1 / "result.json") == slurp(out2 / "result.json"));
  CHECK(slurp(out1 / "evidence.csv") == slurp(out2 / "evidence.csv"));
}

TEST_CASE("malformed configs report the offending JSON path") {
  ordered_json cfg = base_config("distance");  // no pairs
  try {
    run_experiment(cfg, temp_dir("bad1"));
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(e.path() == "/parameters/pairs");
  }
  cfg = base_config("geodesic");
  cfg["parameters"]["variant"] = "segment";
  cfg["parameters"]["z"] = point_to_json(Point{cx(0), cx(0)});
  cfg["parameters"]["w"] = ordered_json::array({1.5});  // not a point
  try {
    run_experiment(cfg, temp_dir("bad2"));
    FAIL("expected config_error");
  } catch (const config_error& e) {
    CHECK(e.path().find("/parameters/w") == 0);
  }
  cfg = base_config("distance");
  cfg.erase("seed");
  CHECK_THROWS_AS(run_experiment(cfg, temp_dir("bad3")), config_error);
}

TEST_CASE("iterate experiment: elliptic rotation has an empty target table") {
  ordered_json cfg = base_config("iterate");
  cfg["domain"] = {{"type", "ball"}, {"dim", 1}};
  cfg["parameters"]["map"] = {{"op", "disc_mobius"},
                              {"a", ordered_json::array({0.0, 0.0})},
                              {"theta", 1.0}};
  cfg["parameters"]["z0"] = point_to_json(Point{cx(0.3)});
  cfg["parameters"]["n_max"] = 200;
  const fs::path out = temp_dir("iterate");
  const auto res = run_experiment(cfg, out);
  CHECK(res.exit_code == 0);
  CHECK(res.result["result"]["target_clusters"].empty());
  CHECK(fs::exists(out / "orbit_0.csv"));
}

TEST_CASE("conjecture1 experiment on the bent family exits 0") {
  ordered_json cfg = base_config("conjecture1");
  cfg["parameters"]["family"] = {{"type", "bidisc_example"}, {"k_max", 8}};
  const auto res = run_experiment(cfg, temp_dir("conj"));
  CHECK(res.exit_code == 0);
  CHECK(res.result["result"]["violations"].get<int>() == 0);
}

TEST_CASE("julia experiment passes on the hyperbolic product") {
  ordered_json cfg = base_config("julia");
  cfg["parameters"]["map"] = {
      {"op", "coord_map"},
      {"components",
       ordered_json::array(
           {{{"op", "disc_hyperbolic"}, {"sigma", ordered_json::array({1.0, 0.0})}, {"step", 0.3}},
            {{"op", "linear"},
             {"matrix", ordered_json::array({ordered_json::array(
                            {ordered_json::array({0.5, 0.0})})})},
             {"domain", {{"type", "ball"}, {"dim", 1}}}}})}};
  cfg["parameters"]["m_list"] = ordered_json::array({1, 2});
  cfg["parameters"]["grid"] = 17;
  const auto res = run_experiment(cfg, temp_dir("julia"));
  CHECK(res.exit_code == 0);
  CHECK(res.result["result"]["pass"].get<bool>());
}

TEST_CASE("domain JSON round-trip") {
  for (const DomainSpec& dom :
       {DomainSpec::ball(3), DomainSpec::polydisc(2),
        DomainSpec::product({DomainSpec::ball(2), DomainSpec::polydisc(1)}), ball_hull_64()}) {
    const ordered_json j = domain_to_json(dom);
    const DomainSpec back = domain_from_json(j, "/domain");
    CHECK(back == dom);
    CHECK(back.dim() == dom.dim());
  }
}

#ifdef KOBLAB_CLI_PATH
TEST_CASE("CLI binary: runs a distance experiment end to end") {
  const fs::path dir = temp_dir("cli");
  ordered_json cfg = base_config("distance");
  cfg["parameters"]["pairs"] = ordered_json::array(
      {ordered_json::array({point_to_json(Point{cx(0), cx(0)}),
                            point_to_json(Point{cx(0.5), cx(0)})})});
  {
    std::ofstream os(dir / "cfg.json");
    os << cfg.dump(2);
  }
  const std::string cmd = std::string(KOBLAB_CLI_PATH) + " distance --config " +
                          (dir / "cfg.json").string() + " --out " + (dir / "out").string() +
                          " --quiet";
  const int rc = std::system(cmd.c_str());
  CHECK(rc == 0);
  CHECK(fs::exists(dir / "out" / "result.json"));
  // Mismatched subcommand is a usage error.
  const std::string bad = std::string(KOBLAB_CLI_PATH) + " julia --config " +
                          (dir / "cfg.json").string() + " --out " + (dir / "out2").string() +
                          " 2>/dev/null";
  CHECK(std::system(bad.c_str()) != 0);
}
#endif
