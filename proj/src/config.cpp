#include "wpr/config.hpp"

#include <fstream>
#include <set>

namespace wpr {

namespace {

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "noise_dbm",      "n_r",           "eta",
      "d_sr",           "d_dr",          "d_rd",
      "p_s_grid_dbm",   "p_d_grid_dbm",  "n_trials",
      "seed",           "algorithms",    "epsilon",
      "loa_restarts",   "loa_max_iters", "epr_p_r_dbm",
      "timing_eps_grid", "timing_trials", "fig2_points",
      "fig2_p_s_dbm",   "fig2_p_d_dbm"};
  return keys;
}

template <typename T>
void read_key(const nlohmann::json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(out);
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string(key) + ": wrong type");
  }
}

}  // namespace

ScenarioConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  // A manifest wraps the scenario under "config"; unwrap it.
  if (j.contains("config") && j.at("config").is_object())
    return config_from_json(j.at("config"));

  for (const auto& item : j.items())
    if (known_keys().count(item.key()) == 0)
      throw ConfigError("unknown key '" + item.key() + "'");

  ScenarioConfig cfg;
  read_key(j, "noise_dbm", cfg.noise_dbm);
  read_key(j, "n_r", cfg.n_r);
  read_key(j, "eta", cfg.eta);
  read_key(j, "d_sr", cfg.d_sr);
  read_key(j, "d_dr", cfg.d_dr);
  read_key(j, "d_rd", cfg.d_rd);
  read_key(j, "p_s_grid_dbm", cfg.p_s_grid_dbm);
  read_key(j, "p_d_grid_dbm", cfg.p_d_grid_dbm);
  read_key(j, "n_trials", cfg.n_trials);
  read_key(j, "seed", cfg.seed);
  read_key(j, "epsilon", cfg.epsilon);
  read_key(j, "loa_restarts", cfg.loa_restarts);
  read_key(j, "loa_max_iters", cfg.loa_max_iters);
  read_key(j, "epr_p_r_dbm", cfg.epr_p_r_dbm);
  read_key(j, "timing_eps_grid", cfg.timing_eps_grid);
  read_key(j, "timing_trials", cfg.timing_trials);
  read_key(j, "fig2_points", cfg.fig2_points);
  read_key(j, "fig2_p_s_dbm", cfg.fig2_p_s_dbm);
  read_key(j, "fig2_p_d_dbm", cfg.fig2_p_d_dbm);
  if (j.contains("algorithms")) {
    std::vector<std::string> names;
    read_key(j, "algorithms", names);
    cfg.algorithms.clear();
    for (const auto& name : names)
      cfg.algorithms.push_back(algorithm_from_string(name));
  }
  cfg.validate();
  return cfg;
}

nlohmann::json config_to_json(const ScenarioConfig& cfg) {
  std::vector<std::string> algs;
  for (Algorithm a : cfg.algorithms) algs.emplace_back(to_string(a));
  return nlohmann::json{{"noise_dbm", cfg.noise_dbm},
                        {"n_r", cfg.n_r},
                        {"eta", cfg.eta},
                        {"d_sr", cfg.d_sr},
                        {"d_dr", cfg.d_dr},
                        {"d_rd", cfg.d_rd},
                        {"p_s_grid_dbm", cfg.p_s_grid_dbm},
                        {"p_d_grid_dbm", cfg.p_d_grid_dbm},
                        {"n_trials", cfg.n_trials},
                        {"seed", cfg.seed},
                        {"algorithms", algs},
                        {"epsilon", cfg.epsilon},
                        {"loa_restarts", cfg.loa_restarts},
                        {"loa_max_iters", cfg.loa_max_iters},
                        {"epr_p_r_dbm", cfg.epr_p_r_dbm},
                        {"timing_eps_grid", cfg.timing_eps_grid},
                        {"timing_trials", cfg.timing_trials},
                        {"fig2_points", cfg.fig2_points},
                        {"fig2_p_s_dbm", cfg.fig2_p_s_dbm},
                        {"fig2_p_d_dbm", cfg.fig2_p_d_dbm}};
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON in ") + path + ": " +
                      e.what());
  }
  return config_from_json(j);
}

void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::json j{{"tool", "wprsec"},
                   {"command", m.command},
                   {"threads", m.threads},
                   {"out_dir", m.out_dir},
                   {"config", config_to_json(m.config)}};
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace wpr
