#ifndef TSQM_SCENARIO_IO_HPP
#define TSQM_SCENARIO_IO_HPP

#include <string>

#include <nlohmann/json.hpp>

#include "tsqm/scenarios.hpp"

namespace tsqm {

// Configuration / schema problems carry the JSON-pointer path of the
// offending element.
class ConfigError : public std::runtime_error {
public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

private:
  std::string pointer_;
};

// Structural + physics validation without execution. Throws ConfigError.
void validate_config(const nlohmann::json& config);

// Run the configured scenario. Overrides (seed/trials/--set) are applied by
// the caller before this point; the resolved config is echoed in the result.
ScenarioResult run_config(const nlohmann::json& config);

// Serialize a result to the stable report layout with top-level keys
// config_echo / scalars / distributions / assertions / seeds / versions.
// Complex numbers are [re, im]; doubles round-trip exactly.
nlohmann::json result_to_json(const ScenarioResult& result, const nlohmann::json& config_echo);

// Human-readable summary derived only from the result JSON.
std::string render_summary(const nlohmann::json& result_json);

}  // namespace tsqm

#endif  // TSQM_SCENARIO_IO_HPP
