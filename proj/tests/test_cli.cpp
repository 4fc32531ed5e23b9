#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "tsqm/scenario_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  json result;
  bool has_result = false;
};

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("tsqm_cli_test_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(TSQM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

RunResult run_scenario(const json& config, const std::string& tag, const std::string& extra = "") {
  const fs::path dir = fresh_dir(tag);
  const fs::path cfg_path = dir / "config.json";
  {
    std::ofstream out(cfg_path);
    out << config.dump(2);
  }
  RunResult r;
  r.exit_code = run_cli("run " + cfg_path.string() + " --out " + (dir / "out").string() + " " + extra);
  const fs::path result_path = dir / "out" / "result.json";
  if (fs::exists(result_path)) {
    std::ifstream in(result_path);
    in >> r.result;
    r.has_result = true;
  }
  return r;
}

json epr_config() {
  return json{{"scenario", "epr"},
              {"seed", 1},
              {"params", json{{"n1", {0, 0, 1}}, {"n2", {0, 0, 1}}, {"outcome1", 1}}}};
}

}  // namespace

TEST_CASE("bundled epr_z scenario runs green") {
  const int code = run_cli(std::string("run ") + TSQM_SCENARIO_DIR + "/epr_z.json --out " +
                           fresh_dir("bundled").string());
  CHECK(code == 0);
}

TEST_CASE("run writes result.json and summary.txt with the stable layout") {
  const RunResult r = run_scenario(epr_config(), "layout");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.has_result);
  for (const char* key : {"config_echo", "scalars", "distributions", "assertions", "seeds", "versions"}) {
    CHECK(r.result.contains(key));
  }
  CHECK(r.result.size() == 6);
  // anticorrelated outcome has probability 1
  const json& dist = r.result["distributions"]["sigma2_given_sigma1"];
  bool found = false;
  for (std::size_t i = 0; i < dist["labels"].size(); ++i) {
    if (dist["labels"][i][0].get<double>() == -1.0) {
      CHECK(dist["probs"][i].get<double>() == 1.0);
      found = true;
    }
  }
  CHECK(found);

  const std::string summary = tsqm::render_summary(r.result);
  CHECK(summary.find("PASS") != std::string::npos);
}

TEST_CASE("result.json round-trips byte-identically through config_echo") {
  json cfg{{"scenario", "collapse_detector"},
           {"seed", 7},
           {"trials", 5000},
           {"params", json{{"disturbance", "sigma_x"}}}};
  const RunResult first = run_scenario(cfg, "roundtrip1");
  REQUIRE(first.exit_code == 0);
  const RunResult second = run_scenario(first.result["config_echo"], "roundtrip2");
  REQUIRE(second.exit_code == 0);
  CHECK(first.result["scalars"].dump() == second.result["scalars"].dump());
  CHECK(first.result["distributions"].dump() == second.result["distributions"].dump());
  CHECK(first.result["assertions"].dump() == second.result["assertions"].dump());
}

TEST_CASE("seed override changes samples but not closed-form values") {
  json cfg{{"scenario", "collapse_detector"},
           {"seed", 1},
           {"trials", 20001},
           {"params", json{{"disturbance", "sigma_x"}}}};
  const RunResult a = run_scenario(cfg, "seed1");
  const RunResult b = run_scenario(cfg, "seed2", "--seed 99");
  REQUIRE(a.exit_code == 0);
  REQUIRE(b.exit_code == 0);
  CHECK(a.result["distributions"].dump() == b.result["distributions"].dump());
  CHECK(a.result["scalars"]["mc_prob_delta_pi_zero"].dump() !=
        b.result["scalars"]["mc_prob_delta_pi_zero"].dump());
}

TEST_CASE("--set overrides nested values") {
  json cfg = epr_config();
  const RunResult r = run_scenario(cfg, "setshift", "--set params.outcome1=-1");
  REQUIRE(r.exit_code == 0);
  CHECK(r.result["config_echo"]["params"]["outcome1"].get<int>() == -1);
  const json& dist = r.result["distributions"]["sigma2_given_sigma1"];
  for (std::size_t i = 0; i < dist["labels"].size(); ++i) {
    if (dist["labels"][i][0].get<double>() == 1.0) {
      CHECK(dist["probs"][i].get<double>() == 1.0);
    }
  }
}

TEST_CASE("assertion failure exits with code 2") {
  json cfg{{"scenario", "custom"},
           {"seed", 1},
           {"params",
            json{{"psi1", "up_x"},
                 {"psi2", "up_y"},
                 {"operator", "sigma_z"},
                 {"queries", {"weak_value"}},
                 {"expect", json::array({json{{"name", "weak_value"}, {"value", {5, 0}}, {"tol", 1e-9}}})}}}};
  const RunResult r = run_scenario(cfg, "fail");
  CHECK(r.exit_code == 2);
  REQUIRE(r.has_result);
  CHECK_FALSE(r.result["assertions"][0]["pass"].get<bool>());
}

TEST_CASE("correct custom expectation passes") {
  json cfg{{"scenario", "custom"},
           {"seed", 1},
           {"params",
            json{{"psi1", "up_x"},
                 {"psi2", "up_y"},
                 {"operator", "sigma_z"},
                 {"queries", {"weak_value", "abl_prob", "strong_expectation", "transition_prob"}},
                 {"expect", json::array({json{{"name", "weak_value"}, {"value", {0, 1}}, {"tol", 1e-9}}})}}}};
  const RunResult r = run_scenario(cfg, "customok");
  CHECK(r.exit_code == 0);
  CHECK(r.result["scalars"].contains("strong_expectation"));
  CHECK(r.result["distributions"].contains("abl_prob"));
}

TEST_CASE("orthogonal boundary conditions exit with code 1 naming the restriction") {
  json cfg{{"scenario", "custom"},
           {"seed", 1},
           {"params",
            json{{"psi1", "up_z"}, {"psi2", "down_z"}, {"operator", "sigma_z"}, {"queries", {"weak_value"}}}}};
  const fs::path dir = fresh_dir("ortho");
  {
    std::ofstream out(dir / "config.json");
    out << cfg.dump();
  }
  const std::string cmd = std::string(TSQM_CLI_PATH) + " run " + (dir / "config.json").string() +
                          " --out " + (dir / "out").string() + " 2> " + (dir / "err.txt").string();
  const int code = WEXITSTATUS(std::system(cmd.c_str()));
  CHECK(code == 1);
  std::ifstream err(dir / "err.txt");
  std::string text((std::istreambuf_iterator<char>(err)), std::istreambuf_iterator<char>());
  CHECK(text.find("orthogonal") != std::string::npos);
  CHECK(text.find("nonzero overlap") != std::string::npos);
}

TEST_CASE("validate: good and broken configs") {
  const fs::path dir = fresh_dir("validate");
  {
    std::ofstream out(dir / "good.json");
    out << epr_config().dump();
  }
  CHECK(run_cli("validate " + (dir / "good.json").string()) == 0);

  json missing_seed = epr_config();
  missing_seed.erase("seed");
  {
    std::ofstream out(dir / "noseed.json");
    out << missing_seed.dump();
  }
  const std::string cmd = std::string(TSQM_CLI_PATH) + " validate " + (dir / "noseed.json").string() +
                          " 2> " + (dir / "err.txt").string();
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 1);
  std::ifstream err(dir / "err.txt");
  std::string text((std::istreambuf_iterator<char>(err)), std::istreambuf_iterator<char>());
  CHECK(text.find("/seed") != std::string::npos);

  // non-Hermitian operator where a Hermitian one is required
  json bad_op{{"scenario", "repeated"},
              {"seed", 1},
              {"params",
               json{{"A", json::array({json::array({json::array({0, 0}), json::array({1, 0})}),
                                       json::array({json::array({0, 0}), json::array({0, 0})})})},
                    {"B", "sigma_x"},
                    {"initial", "up_x"}}}};
  {
    std::ofstream out(dir / "badop.json");
    out << bad_op.dump();
  }
  CHECK(run_cli("validate " + (dir / "badop.json").string()) == 1);
}

TEST_CASE("validate checks the spin window") {
  json cfg{{"scenario", "spin_intermediate"},
           {"seed", 1},
           {"params", json{{"N", 9}, {"g0", 0.001}, {"dq", 0.5}}}};
  const fs::path dir = fresh_dir("spinval");
  {
    std::ofstream out(dir / "config.json");
    out << cfg.dump();
  }
  CHECK(run_cli("validate " + (dir / "config.json").string()) == 1);
}

TEST_CASE("summary is derived from the result json alone") {
  const RunResult r = run_scenario(epr_config(), "summary");
  REQUIRE(r.has_result);
  const std::string direct = tsqm::render_summary(r.result);
  // the file on disk must be exactly the render of result.json
  std::ifstream in(fs::temp_directory_path() / "tsqm_cli_test_summary" / "out" / "summary.txt");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text == direct);
}
