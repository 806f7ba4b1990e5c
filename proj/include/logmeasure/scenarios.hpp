#pragma once

// Canned reproduction experiments shared by `logmeasure repro` and the
// acceptance binary.

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace logmeasure {

struct CheckLine {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ScenarioReport {
  std::string name;
  std::string claim;  // one-line statement being reproduced
  std::vector<CheckLine> checks;
  nlohmann::ordered_json data = nlohmann::ordered_json::object();
  double seconds = 0.0;

  bool passed() const;
  nlohmann::ordered_json to_json() const;
};

const std::vector<std::string>& scenario_names();

/// Runs one scenario; CSV side outputs go to out_dir when given. Throws
/// BadParams for an unknown name.
ScenarioReport run_scenario(const std::string& name, const std::optional<std::string>& out_dir = std::nullopt);

}  // namespace logmeasure
