#include "tsqm/scenario_io.hpp"

#include <regex>
#include <sstream>

#include "tsqm/linalg.hpp"
#include "tsqm/observables.hpp"
#include "tsqm/spin.hpp"

namespace tsqm {

using nlohmann::json;

namespace {

const json& require(const json& node, const std::string& pointer, const char* key) {
  if (!node.is_object()) throw ConfigError(pointer, "expected an object");
  const auto it = node.find(key);
  if (it == node.end()) throw ConfigError(pointer + "/" + key, "missing required key");
  return *it;
}

double as_number(const json& node, const std::string& pointer) {
  if (!node.is_number()) throw ConfigError(pointer, "expected a number");
  return node.get<double>();
}

std::int64_t as_integer(const json& node, const std::string& pointer) {
  if (!node.is_number_integer()) throw ConfigError(pointer, "expected an integer");
  return node.get<std::int64_t>();
}

Complex as_complex(const json& node, const std::string& pointer) {
  if (node.is_number()) return Complex(node.get<double>(), 0.0);
  if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number()) {
    return Complex(node[0].get<double>(), node[1].get<double>());
  }
  throw ConfigError(pointer, "expected a number or [re, im] pair");
}

Vec as_state(const json& node, const std::string& pointer) {
  if (node.is_string()) {
    const std::string name = node.get<std::string>();
    const auto make = [](Complex c0, Complex c1) {
      Vec v(2);
      v << c0, c1;
      return v;
    };
    const double s = 1.0 / std::sqrt(2.0);
    if (name == "up_z") return make(1.0, 0.0);
    if (name == "down_z") return make(0.0, 1.0);
    if (name == "up_x") return make(s, s);
    if (name == "down_x") return make(s, -s);
    if (name == "up_y") return make(s, Complex(0.0, s));
    if (name == "down_y") return make(s, Complex(0.0, -s));
    throw ConfigError(pointer, "unknown state name '" + name + "'");
  }
  if (!node.is_array() || node.empty()) {
    throw ConfigError(pointer, "expected a state name or a nonempty array of amplitudes");
  }
  Vec v(static_cast<Eigen::Index>(node.size()));
  for (std::size_t i = 0; i < node.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = as_complex(node[i], pointer + "/" + std::to_string(i));
  }
  if (v.norm() <= 0.0) throw ConfigError(pointer, "state has zero norm");
  return v;
}

Mat as_operator(const json& node, const std::string& pointer, bool require_hermitian) {
  Mat m;
  if (node.is_string()) {
    const std::string name = node.get<std::string>();
    if (name == "sigma_x") m = sigma_x();
    else if (name == "sigma_y") m = sigma_y();
    else if (name == "sigma_z") m = sigma_z();
    else if (name == "identity2") m = Mat::Identity(2, 2);
    else {
      static const std::regex spin_re(R"(^(Lx|Ly|Lz)\((\d+)\)$)");
      std::smatch match;
      if (std::regex_match(name, match, spin_re)) {
        const int l = std::stoi(match[2].str());
        if (l < 1 || l > 60) throw ConfigError(pointer, "spin size out of range [1, 60]");
        const SpinOps ops = spin_ops(l);
        m = match[1].str() == "Lx" ? ops.lx : (match[1].str() == "Ly" ? ops.ly : ops.lz);
      } else {
        throw ConfigError(pointer, "unknown operator name '" + name + "'");
      }
    }
  } else {
    if (!node.is_array() || node.empty()) {
      throw ConfigError(pointer, "expected an operator name or a square matrix");
    }
    const auto n = static_cast<Eigen::Index>(node.size());
    m.resize(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
      const json& row = node[static_cast<std::size_t>(r)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
        throw ConfigError(pointer + "/" + std::to_string(r), "matrix must be square");
      }
      for (Eigen::Index c = 0; c < n; ++c) {
        m(r, c) = as_complex(row[static_cast<std::size_t>(c)],
                             pointer + "/" + std::to_string(r) + "/" + std::to_string(c));
      }
    }
  }
  if (require_hermitian && !is_hermitian(m, 1e-10)) {
    throw ConfigError(pointer, "operator must be Hermitian");
  }
  return m;
}

std::array<double, 3> as_axis(const json& node, const std::string& pointer) {
  if (!node.is_array() || node.size() != 3) {
    throw ConfigError(pointer, "expected a 3-vector [x, y, z]");
  }
  std::array<double, 3> a{};
  for (int i = 0; i < 3; ++i) a[static_cast<std::size_t>(i)] = as_number(node[static_cast<std::size_t>(i)], pointer + "/" + std::to_string(i));
  if (a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0) throw ConfigError(pointer, "direction is zero");
  return a;
}

struct ParsedConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  std::int64_t trials = 0;

  // epr
  std::array<double, 3> n1{}, n2{};
  int outcome1 = 1;
  // collapse detector
  CollapseDetectorConfig collapse;
  // repeated
  RepeatedMeasurementsConfig repeated;
  // spin
  SpinIntermediateConfig spin;
  // custom
  Vec psi1, psi2;
  Mat op;
  std::vector<std::string> queries;
  struct Expectation {
    std::string name;
    Complex value;
    double tol = 0.0;
  };
  std::vector<Expectation> expectations;
};

ParsedConfig parse(const json& config) {
  ParsedConfig out;
  const json& scenario = require(config, "", "scenario");
  if (!scenario.is_string()) throw ConfigError("/scenario", "expected a string");
  out.scenario = scenario.get<std::string>();

  const json& seed = require(config, "", "seed");
  if (!seed.is_number_integer() || seed.get<std::int64_t>() < 0) {
    throw ConfigError("/seed", "expected a nonnegative integer");
  }
  out.seed = seed.get<std::uint64_t>();

  out.trials = 100000;
  if (config.contains("trials")) {
    out.trials = as_integer(config["trials"], "/trials");
    if (out.trials < 1) throw ConfigError("/trials", "must be positive");
  }

  const json& params = require(config, "", "params");
  if (!params.is_object()) throw ConfigError("/params", "expected an object");

  if (out.scenario == "epr") {
    out.n1 = as_axis(require(params, "/params", "n1"), "/params/n1");
    out.n2 = as_axis(require(params, "/params", "n2"), "/params/n2");
    const auto o = as_integer(require(params, "/params", "outcome1"), "/params/outcome1");
    if (o != 1 && o != -1) throw ConfigError("/params/outcome1", "must be +1 or -1");
    out.outcome1 = static_cast<int>(o);
  } else if (out.scenario == "collapse_detector") {
    out.collapse.seed = out.seed;
    out.collapse.trials = out.trials;
    if (params.contains("epr")) {
      if (!params["epr"].is_boolean()) throw ConfigError("/params/epr", "expected a boolean");
      out.collapse.epr = params["epr"].get<bool>();
    }
    if (params.contains("disturbance")) {
      out.collapse.disturbance = as_operator(params["disturbance"], "/params/disturbance", true);
      if (out.collapse.epr) {
        throw ConfigError("/params/disturbance", "not supported in the EPR mode");
      }
    }
    if (params.contains("g0")) out.collapse.g0 = as_number(params["g0"], "/params/g0");
    if (params.contains("pointer_width")) {
      out.collapse.pointer_width = as_number(params["pointer_width"], "/params/pointer_width");
    }
    if (params.contains("grid_points")) {
      out.collapse.grid_points = as_integer(params["grid_points"], "/params/grid_points");
    }
    if (out.collapse.g0 <= 0.0) throw ConfigError("/params/g0", "must be positive");
    if (out.collapse.pointer_width <= 0.0) {
      throw ConfigError("/params/pointer_width", "must be positive");
    }
  } else if (out.scenario == "repeated") {
    out.repeated.seed = out.seed;
    out.repeated.a = as_operator(require(params, "/params", "A"), "/params/A", true);
    out.repeated.b = as_operator(require(params, "/params", "B"), "/params/B", true);
    out.repeated.initial = as_state(require(params, "/params", "initial"), "/params/initial");
    if (params.contains("final_bases")) {
      out.repeated.final_bases =
          static_cast<int>(as_integer(params["final_bases"], "/params/final_bases"));
      if (out.repeated.final_bases < 1) throw ConfigError("/params/final_bases", "must be >= 1");
    }
    if (out.repeated.a.rows() != out.repeated.initial.size() ||
        out.repeated.b.rows() != out.repeated.initial.size()) {
      throw ConfigError("/params", "operator and state dimensions disagree");
    }
  } else if (out.scenario == "spin_intermediate") {
    out.spin.seed = out.seed;
    out.spin.trials = out.trials;
    out.spin.n = static_cast<int>(as_integer(require(params, "/params", "N"), "/params/N"));
    out.spin.g0 = as_number(require(params, "/params", "g0"), "/params/g0");
    out.spin.dq = as_number(require(params, "/params", "dq"), "/params/dq");
    if (params.contains("a_weight")) out.spin.a_weight = as_complex(params["a_weight"], "/params/a_weight");
    if (params.contains("b_weight")) out.spin.b_weight = as_complex(params["b_weight"], "/params/b_weight");
    if (out.spin.n < 10 || out.spin.n > 44) throw ConfigError("/params/N", "must be in [10, 44]");
    if (out.spin.g0 <= 0.0) throw ConfigError("/params/g0", "must be positive");
    if (out.spin.dq <= 0.0) throw ConfigError("/params/dq", "must be positive");
  } else if (out.scenario == "custom") {
    out.psi1 = as_state(require(params, "/params", "psi1"), "/params/psi1");
    out.psi2 = as_state(require(params, "/params", "psi2"), "/params/psi2");
    out.op = as_operator(require(params, "/params", "operator"), "/params/operator", true);
    if (out.psi1.size() != out.psi2.size() || out.op.rows() != out.psi1.size()) {
      throw ConfigError("/params", "state and operator dimensions disagree");
    }
    const json& queries = require(params, "/params", "queries");
    if (!queries.is_array() || queries.empty()) {
      throw ConfigError("/params/queries", "expected a nonempty array of query names");
    }
    for (std::size_t i = 0; i < queries.size(); ++i) {
      if (!queries[i].is_string()) {
        throw ConfigError("/params/queries/" + std::to_string(i), "expected a string");
      }
      const std::string q = queries[i].get<std::string>();
      if (q != "weak_value" && q != "abl_prob" && q != "strong_expectation" &&
          q != "transition_prob" && q != "prob_one_condition") {
        throw ConfigError("/params/queries/" + std::to_string(i), "unknown query '" + q + "'");
      }
      out.queries.push_back(q);
    }
    if (params.contains("expect")) {
      const json& ex = params["expect"];
      if (!ex.is_array()) throw ConfigError("/params/expect", "expected an array");
      for (std::size_t i = 0; i < ex.size(); ++i) {
        const std::string p = "/params/expect/" + std::to_string(i);
        ParsedConfig::Expectation e;
        const json& name = require(ex[i], p, "name");
        if (!name.is_string()) throw ConfigError(p + "/name", "expected a string");
        e.name = name.get<std::string>();
        e.value = as_complex(require(ex[i], p, "value"), p + "/value");
        e.tol = as_number(require(ex[i], p, "tol"), p + "/tol");
        out.expectations.push_back(std::move(e));
      }
    }
    // Physics precondition: the boundary conditions must be non-orthogonal.
    const Complex overlap = out.psi2.normalized().dot(out.psi1.normalized());
    if (std::abs(overlap) <= kEpsPhys) {
      throw ConfigError("/params/psi2",
                        "pre- and post-selection conditions are orthogonal; a physical two-state "
                        "requires a nonzero overlap between them");
    }
  } else {
    throw ConfigError("/scenario",
                      "unknown scenario '" + out.scenario +
                          "' (expected epr, collapse_detector, repeated, spin_intermediate, or "
                          "custom)");
  }
  return out;
}

ScenarioResult run_custom(const ParsedConfig& cfg) {
  ScenarioResult res;
  res.scenario_id = "custom";
  res.seed = cfg.seed;
  const Vec psi1 = cfg.psi1.normalized();
  const Vec psi2 = cfg.psi2.normalized();
  MakeInfo info;
  const TwoState r = make_generic(psi1, psi2, &info);
  res.scalars["overlap_magnitude"] = info.overlap_magnitude;
  if (info.ill_conditioned) {
    res.notes.push_back("conditions nearly orthogonal; superweak amplification regime");
  }
  for (const std::string& q : cfg.queries) {
    if (q == "weak_value") {
      const WeakValue w = weak_value(r, cfg.op);
      res.scalars["weak_value"] = w.value;
      res.scalars["weak_value_conditioning"] = w.conditioning;
    } else if (q == "abl_prob") {
      res.distributions["abl_prob"] = abl_prob(r, cfg.op);
    } else if (q == "strong_expectation") {
      res.scalars["strong_expectation"] = strong_expectation(r, cfg.op);
    } else if (q == "transition_prob") {
      res.scalars["transition_prob"] = transition_prob(r);
    } else if (q == "prob_one_condition") {
      res.distributions["prob_one_condition_in"] = prob_one_condition(r, cfg.op, Boundary::In);
    }
  }
  for (const auto& e : cfg.expectations) {
    const auto it = res.scalars.find(e.name);
    if (it == res.scalars.end()) {
      throw ConfigError("/params/expect", "expectation references unknown scalar '" + e.name + "'");
    }
    res.check("expect_" + e.name, e.value, it->second, e.tol);
  }
  return res;
}

}  // namespace

void validate_config(const json& config) { (void)parse(config); }

ScenarioResult run_config(const json& config) {
  const ParsedConfig cfg = parse(config);
  if (cfg.scenario == "epr") return epr_scenario(cfg.n1, cfg.n2, cfg.outcome1);
  if (cfg.scenario == "collapse_detector") return collapse_detector(cfg.collapse);
  if (cfg.scenario == "repeated") return repeated_measurements(cfg.repeated);
  if (cfg.scenario == "spin_intermediate") return spin_intermediate(cfg.spin);
  return run_custom(cfg);
}

namespace {

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

json dist_to_json(const ProbDist& d) {
  json labels = json::array();
  for (const auto& l : d.labels) labels.push_back(l);
  return json{{"labels", labels}, {"probs", d.probs}};
}

}  // namespace

json result_to_json(const ScenarioResult& result, const json& config_echo) {
  json scalars = json::object();
  for (const auto& [name, value] : result.scalars) scalars[name] = complex_to_json(value);
  json dists = json::object();
  for (const auto& [name, d] : result.distributions) dists[name] = dist_to_json(d);
  json assertions = json::array();
  for (const auto& a : result.assertions) {
    assertions.push_back(json{{"name", a.name},
                              {"expected", complex_to_json(a.expected)},
                              {"actual", complex_to_json(a.actual)},
                              {"tolerance", a.tolerance},
                              {"pass", a.pass}});
  }
  return json{{"config_echo", config_echo},
              {"scalars", scalars},
              {"distributions", dists},
              {"assertions", assertions},
              {"seeds", json{{"root", result.seed}, {"trials", result.trials}}},
              {"versions", json{{"artifact", "1.0.0"}, {"result_format", 1}}}};
}

std::string render_summary(const json& result_json) {
  std::ostringstream out;
  const json& echo = result_json.at("config_echo");
  out << "scenario: " << echo.value("scenario", std::string("?")) << "\n";
  out << "seed: " << result_json.at("seeds").at("root").dump()
      << "  trials: " << result_json.at("seeds").at("trials").dump() << "\n\n";

  const json& scalars = result_json.at("scalars");
  if (!scalars.empty()) {
    out << "scalars:\n";
    for (auto it = scalars.begin(); it != scalars.end(); ++it) {
      const double re = it.value()[0].get<double>();
      const double im = it.value()[1].get<double>();
      out << "  " << it.key() << " = " << re;
      if (im != 0.0) out << (im > 0 ? " + " : " - ") << std::abs(im) << "i";
      out << "\n";
    }
    out << "\n";
  }

  const json& dists = result_json.at("distributions");
  for (auto it = dists.begin(); it != dists.end(); ++it) {
    out << "distribution " << it.key() << ":\n";
    const json& labels = it.value().at("labels");
    const json& probs = it.value().at("probs");
    for (std::size_t i = 0; i < probs.size(); ++i) {
      out << "  " << labels[i].dump() << " -> " << probs[i].get<double>() << "\n";
    }
    out << "\n";
  }

  std::size_t passed = 0;
  const json& assertions = result_json.at("assertions");
  out << "assertions:\n";
  for (const json& a : assertions) {
    const bool pass = a.at("pass").get<bool>();
    passed += pass ? 1u : 0u;
    out << "  [" << (pass ? "PASS" : "FAIL") << "] " << a.at("name").get<std::string>()
        << "  expected=" << a.at("expected").dump() << " actual=" << a.at("actual").dump()
        << " tol=" << a.at("tolerance").get<double>() << "\n";
  }
  out << "\n"
      << passed << "/" << assertions.size() << " assertions passed\n";
  return out.str();
}

}  // namespace tsqm
