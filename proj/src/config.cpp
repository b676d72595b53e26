#include "latlab/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace latlab {

namespace {

using nlohmann::json;

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

double require_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigInvalid(field + ": expected a number");
  return j.get<double>();
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigInvalid(std::string("config: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigInvalid("config: top level must be an object");

  ExperimentConfig cfg;

  if (!j.contains("distribution") || !j["distribution"].is_array()) {
    throw ConfigInvalid("distribution: required array of {value, prob}");
  }
  std::size_t idx = 0;
  for (const auto& a : j["distribution"]) {
    std::string where = "distribution[" + std::to_string(idx) + "]";
    if (!a.is_object()) throw ConfigInvalid(where + ": expected an object");
    if (!a.contains("value")) throw ConfigInvalid(where + ".value: missing");
    if (!a.contains("prob")) throw ConfigInvalid(where + ".prob: missing");
    AtomSpec spec;
    if (a["value"].is_string()) {
      spec.value = a["value"].get<std::string>();
    } else if (a["value"].is_number()) {
      spec.value = fmt17(a["value"].get<double>());
    } else {
      throw ConfigInvalid(where + ".value: expected a number or rational string");
    }
    spec.prob = require_number(a["prob"], where + ".prob");
    cfg.distribution.push_back(spec);
    ++idx;
  }

  if (j.contains("lambda")) cfg.lambda = require_number(j["lambda"], "lambda");
  if (j.contains("tau")) {
    if (j["tau"].is_string()) {
      if (j["tau"].get<std::string>() != "auto") {
        throw ConfigInvalid("tau: expected a number or \"auto\"");
      }
      cfg.tau_auto = true;
      cfg.tau = 0.0;
    } else {
      cfg.tau = require_number(j["tau"], "tau");
      cfg.tau_auto = false;
    }
  }
  if (j.contains("delta_targets")) {
    if (!j["delta_targets"].is_array()) {
      throw ConfigInvalid("delta_targets: expected an array of reals");
    }
    cfg.delta_targets.clear();
    for (const auto& t : j["delta_targets"]) {
      cfg.delta_targets.push_back(require_number(t, "delta_targets[]"));
    }
  }
  if (j.contains("subsequence_epsilon")) {
    cfg.subsequence_epsilon = require_number(j["subsequence_epsilon"], "subsequence_epsilon");
  }
  if (j.contains("n_max")) {
    if (!j["n_max"].is_number_integer()) throw ConfigInvalid("n_max: expected an integer");
    cfg.n_max = j["n_max"].get<int>();
  }
  if (j.contains("u_grid")) {
    const auto& g = j["u_grid"];
    if (!g.is_object()) throw ConfigInvalid("u_grid: expected an object");
    if (g.contains("min")) cfg.u_grid.min = require_number(g["min"], "u_grid.min");
    if (g.contains("max")) cfg.u_grid.max = require_number(g["max"], "u_grid.max");
    if (g.contains("count")) {
      if (!g["count"].is_number_integer()) throw ConfigInvalid("u_grid.count: expected an integer");
      cfg.u_grid.count = g["count"].get<int>();
    }
  }
  if (j.contains("mc")) {
    const auto& m = j["mc"];
    if (!m.is_object()) throw ConfigInvalid("mc: expected an object");
    if (m.contains("replicates")) {
      if (!m["replicates"].is_number_unsigned()) {
        throw ConfigInvalid("mc.replicates: expected a nonnegative integer");
      }
      cfg.mc.replicates = m["replicates"].get<std::size_t>();
    }
    if (m.contains("seed")) {
      if (!m["seed"].is_number_unsigned()) {
        throw ConfigInvalid("mc.seed: expected a nonnegative integer");
      }
      cfg.mc.seed = m["seed"].get<std::uint64_t>();
    }
    if (m.contains("n")) {
      if (!m["n"].is_number_integer()) throw ConfigInvalid("mc.n: expected an integer");
      cfg.mc.n = m["n"].get<int>();
    }
    if (m.contains("cap")) {
      if (!m["cap"].is_number_unsigned()) {
        throw ConfigInvalid("mc.cap: expected a nonnegative integer");
      }
      cfg.mc.cap = m["cap"].get<std::size_t>();
    }
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) throw ConfigInvalid("output: expected a string");
    cfg.output = j["output"].get<std::string>();
  }

  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigInvalid("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

LatticeDistribution ExperimentConfig::make_distribution() const {
  std::vector<std::pair<Rational, double>> atoms;
  for (std::size_t i = 0; i < distribution.size(); ++i) {
    try {
      atoms.emplace_back(Rational::parse(distribution[i].value), distribution[i].prob);
    } catch (const ConfigInvalid&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigInvalid("distribution[" + std::to_string(i) +
                          "].value: not a rational or decimal literal");
    }
  }
  return LatticeDistribution::detect_span(atoms);
}

void ExperimentConfig::validate() const {
  if (distribution.size() < 2) {
    throw ConfigInvalid("distribution: at least two atoms required");
  }
  for (std::size_t i = 0; i < distribution.size(); ++i) {
    if (!(distribution[i].prob > 0.0)) {
      throw ConfigInvalid("distribution[" + std::to_string(i) + "].prob: must be > 0");
    }
  }
  LatticeDistribution d = make_distribution();
  const double h = d.span();
  if (!(lambda > 0.0)) throw ConfigInvalid("lambda: must be > 0");
  if (!tau_auto) {
    if (!(tau > 0.0)) throw ConfigInvalid("tau: must be > 0 or \"auto\"");
  }
  for (std::size_t i = 0; i < delta_targets.size(); ++i) {
    if (!(delta_targets[i] >= 0.0 && delta_targets[i] <= h)) {
      throw ConfigInvalid("delta_targets[" + std::to_string(i) + "]: must lie in [0, h]");
    }
  }
  if (!(subsequence_epsilon > 0.0)) {
    throw ConfigInvalid("subsequence_epsilon: must be > 0");
  }
  if (n_max < 1) throw ConfigInvalid("n_max: must be >= 1");
  if (u_grid.count < 2) throw ConfigInvalid("u_grid.count: must be >= 2");
  if (!(u_grid.min < u_grid.max)) throw ConfigInvalid("u_grid.min: must be < u_grid.max");
  if (mc.replicates < 1) throw ConfigInvalid("mc.replicates: must be >= 1");
  if (mc.n < 0) throw ConfigInvalid("mc.n: must be >= 0");
  if (mc.cap < 1) throw ConfigInvalid("mc.cap: must be >= 1");
  if (output.empty()) throw ConfigInvalid("output: must be nonempty");
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  json atoms = json::array();
  for (const auto& a : distribution) {
    atoms.push_back({{"value", a.value}, {"prob", a.prob}});
  }
  j["distribution"] = atoms;
  j["lambda"] = lambda;
  if (tau_auto) {
    j["tau"] = "auto";
  } else {
    j["tau"] = tau;
  }
  j["delta_targets"] = delta_targets;
  j["subsequence_epsilon"] = subsequence_epsilon;
  j["n_max"] = n_max;
  j["u_grid"] = {{"min", u_grid.min}, {"max", u_grid.max}, {"count", u_grid.count}};
  j["mc"] = {{"replicates", mc.replicates},
             {"seed", mc.seed},
             {"n", mc.n},
             {"cap", mc.cap}};
  j["output"] = output;
  return j.dump(2);
}

std::uint64_t ExperimentConfig::hash() const {
  std::string text = to_json_text();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace latlab
