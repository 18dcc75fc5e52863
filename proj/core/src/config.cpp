#include "treepark/config.hpp"

#include <algorithm>
#include <fstream>

#include "treepark/errors.hpp"

namespace treepark {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(Errc::ConfigError, msg); }

double num(const nlohmann::json& j, const char* key, std::optional<double> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    bad(std::string("missing key '") + key + "'");
  }
  if (!j[key].is_number()) bad(std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

Pmf law_from_json(const nlohmann::json& j, const char* where) {
  require_keys(j, {"family", "params", "probs", "truncation", "renormalize"}, where);
  const std::string family = j.value("family", "custom");
  if (family == "poisson") {
    const auto params = j.value("params", nlohmann::json::object());
    require_keys(params, {"alpha"}, where);
    const double alpha = num(params, "alpha");
    const auto trunc = static_cast<std::size_t>(num(j, "truncation", 30.0));
    if (alpha < 0) bad("poisson alpha must be >= 0");
    return Pmf::poisson(alpha, trunc);
  }
  if (family == "bernoulli") {
    const auto params = j.value("params", nlohmann::json::object());
    require_keys(params, {"p"}, where);
    const double p = num(params, "p");
    if (p < 0 || p > 1) bad("bernoulli p outside [0,1]");
    return Pmf::bernoulli(p);
  }
  if (family == "deterministic") {
    const auto params = j.value("params", nlohmann::json::object());
    require_keys(params, {"value"}, where);
    return Pmf::delta(static_cast<std::size_t>(num(params, "value")));
  }
  if (family == "custom") {
    if (!j.contains("probs") || !j["probs"].is_array()) bad("custom law needs 'probs'");
    std::vector<double> probs = j["probs"].get<std::vector<double>>();
    return Pmf(std::move(probs), j.value("renormalize", false));
  }
  bad("unknown arrival family '" + family + "'");
}

}  // namespace

void require_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                  const char* where) {
  if (j.is_null()) return;
  if (!j.is_object()) bad(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      bad("unknown key '" + key + "' in " + where);
  }
}

Model model_from_json(const nlohmann::json& spec) {
  require_keys(spec, {"offspring", "arrivals"}, "model");
  if (!spec.contains("offspring") || !spec.contains("arrivals"))
    bad("model needs 'offspring' and 'arrivals'");

  const auto& off = spec["offspring"];
  require_keys(off, {"family", "params", "K_max", "probs", "recenter"}, "offspring");
  const std::string family = off.value("family", "custom");
  const bool recenter = off.value("recenter", false);
  Pmf nu;
  if (family == "geometric") {
    const auto kmax = static_cast<std::size_t>(num(off, "K_max", 40.0));
    if (kmax < 2 || kmax > 255) bad("geometric K_max must be in [2, 255]");
    nu = Pmf::geometric_half(kmax);
  } else if (family == "binary") {
    nu = Pmf({0.5, 0.0, 0.5});
  } else if (family == "custom") {
    if (!off.contains("probs") || !off["probs"].is_array()) bad("custom offspring needs 'probs'");
    if (off["probs"].size() > 256) bad("offspring support capped at 256");
    nu = Pmf(off["probs"].get<std::vector<double>>(), off.value("renormalize", false));
  } else {
    bad("unknown offspring family '" + family + "'");
  }
  OffspringDist offspring = make_offspring(nu, recenter);
  const std::size_t k_max = offspring.law.support() - 1;

  const auto& arr = spec["arrivals"];
  require_keys(arr, {"mode", "family", "params", "truncation", "probs", "renormalize", "laws",
                     "default"},
               "arrivals");
  const std::string mode = arr.value("mode", "uniform");
  ArrivalFamily fam;
  if (mode == "uniform") {
    fam = uniform_arrivals(law_from_json(arr, "arrivals"), k_max);
  } else if (mode == "leaf-only") {
    fam = leaf_arrivals(law_from_json(arr, "arrivals"), k_max);
  } else if (mode == "per-degree") {
    if (!arr.contains("laws") || !arr["laws"].is_object())
      bad("per-degree arrivals need a 'laws' object keyed by degree");
    const Pmf def = arr.contains("default") ? law_from_json(arr["default"], "arrivals.default")
                                            : Pmf::delta(0);
    fam.laws.assign(k_max + 1, def);
    fam.default_law = def;
    for (const auto& [key, law] : arr["laws"].items()) {
      std::size_t degree = 0;
      try {
        degree = static_cast<std::size_t>(std::stoul(key));
      } catch (...) {
        bad("per-degree law key '" + key + "' is not a degree");
      }
      if (degree > k_max) bad("per-degree law for degree beyond offspring support");
      fam.laws[degree] = law_from_json(law, "arrivals.laws");
    }
  } else {
    bad("unknown arrivals mode '" + mode + "'");
  }
  return Model(std::move(offspring), std::move(fam));
}

LoadedConfig load_config(const nlohmann::json& root) {
  require_keys(root, {"model", "experiment", "seed", "threads", "out"}, "config");
  if (!root.contains("model")) bad("config needs a 'model'");
  LoadedConfig cfg{model_from_json(root["model"]), root, root.value("experiment", nlohmann::json()),
                   1, 0, {}};
  if (root.contains("seed")) {
    if (!root["seed"].is_number_unsigned()) bad("'seed' must be a nonnegative integer");
    cfg.seed = root["seed"].get<std::uint64_t>();
  }
  if (root.contains("threads")) cfg.threads = root["threads"].get<int>();
  if (root.contains("out")) cfg.out_dir = root["out"].get<std::string>();
  return cfg;
}

LoadedConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read config file " + path.string());
  nlohmann::json root;
  try {
    in >> root;
  } catch (const std::exception& e) {
    bad("config parse error: " + std::string(e.what()));
  }
  return load_config(root);
}

}  // namespace treepark
