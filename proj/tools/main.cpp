#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "tsqm/scenario_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  json config;
  try {
    in >> config;
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config is not valid JSON: " + std::string(e.what()));
  }
  return config;
}

// Apply a dotted-path override like params.g0=0.002; the value is parsed as
// JSON when possible and kept as a string otherwise.
void apply_override(json& config, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw std::runtime_error("override '" + spec + "' is not of the form key=value");
  }
  const std::string path = spec.substr(0, eq);
  const std::string raw = spec.substr(eq + 1);
  json value;
  try {
    value = json::parse(raw);
  } catch (const json::parse_error&) {
    value = raw;
  }
  json* node = &config;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? dot : dot - start);
    if (key.empty()) throw std::runtime_error("override path '" + path + "' has an empty segment");
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

int run_command(const std::string& config_path, const std::string& out_dir,
                const std::vector<std::string>& overrides, std::optional<std::int64_t> seed,
                std::optional<std::int64_t> trials) {
  json config = load_json(config_path);
  if (seed) config["seed"] = *seed;
  if (trials) config["trials"] = *trials;
  for (const auto& o : overrides) apply_override(config, o);

  tsqm::validate_config(config);
  const tsqm::ScenarioResult result = tsqm::run_config(config);
  const json payload = tsqm::result_to_json(result, config);

  fs::create_directories(out_dir);
  {
    std::ofstream out(fs::path(out_dir) / "result.json");
    out << payload.dump(2) << "\n";
  }
  {
    std::ofstream out(fs::path(out_dir) / "summary.txt");
    out << tsqm::render_summary(payload);
  }
  std::cout << tsqm::render_summary(payload);
  return result.all_pass() ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-state (pre- and post-selected) quantum scenario runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::optional<std::int64_t> seed_override;
  std::optional<std::int64_t> trials_override;

  auto* run = app.add_subcommand("run", "run a scenario config and write result.json/summary.txt");
  run->add_option("config", config_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--seed", seed_override, "override the root seed");
  run->add_option("--trials", trials_override, "override the Monte Carlo trial count");
  run->add_option("--set", overrides, "override a config value, e.g. --set params.g0=0.002");

  auto* validate = app.add_subcommand("validate", "check a scenario config without running it");
  validate->add_option("config", config_path, "scenario JSON file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) {
      tsqm::validate_config(load_json(config_path));
      std::cout << "config ok\n";
      return 0;
    }
    return run_command(config_path, out_dir, overrides, seed_override, trials_override);
  } catch (const tsqm::ConfigError& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
