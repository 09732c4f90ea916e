#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "koblab/domains.hpp"
#include "koblab/dynamics.hpp"
#include "koblab/metric.hpp"

namespace koblab {

using ordered_json = nlohmann::ordered_json;

/// Config error carrying the JSON path of the offending key.
class config_error : public std::runtime_error {
 public:
  config_error(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// JSON codecs for the external interfaces: complex scalars as [re, im],
// points as arrays of pairs, domains as tagged objects.
ordered_json point_to_json(const Point& p);
Point point_from_json(const ordered_json& j, const std::string& path);
ordered_json domain_to_json(const DomainSpec& dom);
DomainSpec domain_from_json(const ordered_json& j, const std::string& path);
ordered_json bracket_to_json(const DistanceBracket& b);
/// Map expressions; `ambient` supplies the domain for ops that need one
/// (linear without an explicit domain, projection, conjugate).
MapExpr map_from_json(const ordered_json& j, const DomainSpec& ambient, const std::string& path);

struct RunOptions {
  int jobs = 1;
  bool quiet = false;
  std::optional<uint64_t> seed_override;
  std::optional<long> budget_override;
};

struct ExperimentResult {
  int exit_code = 0;  // 0 ok, 2 violation/fail verdicts, 1 errors (thrown)
  ordered_json result;
};

/// Runs one declarative experiment: validates the config, dispatches on
/// `kind`, writes config echo, result JSON and CSV evidence into out_dir.
/// Known kinds: distance, geodesic, visibility, limit-set, conjecture1,
/// iterate, horosphere, julia, dw-verdict.
ExperimentResult run_experiment(const ordered_json& config,
                                const std::filesystem::path& out_dir,
                                const RunOptions& options = {});

}  // namespace koblab
