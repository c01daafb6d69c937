#include "tcsd/run_config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tcsd {

using nlohmann::json;

HoleModel RunConfig::hole_model() const {
  HoleModel m;
  m.strain = strain;
  m.g1 = g1;
  m.g2 = g2;
  m.doublet = doublet == "upper" ? Doublet::upper : Doublet::lower;
  m.mu_b_mhz_per_gauss = mu_b_mhz_per_gauss;
  return m;
}

void RunConfig::validate() const {
  if (!(g_e > 0.0) || !(mu_b_mhz_per_gauss > 0.0) || !(xi > 0.0) ||
      !(gamma1_mhz > 0.0))
    throw std::invalid_argument("RunConfig: physical constants must be > 0");
  if (doublet != "lower" && doublet != "upper")
    throw std::invalid_argument("RunConfig: doublet must be 'lower' or 'upper'");
  if (max_iterations < 1)
    throw std::invalid_argument("RunConfig: max_iterations must be >= 1");
  if (!(mask_chi2 > 0.0))
    throw std::invalid_argument("RunConfig: mask_chi2 must be > 0");
  strain.validate();
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!j.is_object())
    throw std::invalid_argument("config must be a JSON object");

  RunConfig cfg;
  const auto get = [&](const json& obj, const char* key, auto& field) {
    if (obj.contains(key)) obj.at(key).get_to(field);
  };
  get(j, "g_e", cfg.g_e);
  get(j, "mu_b_mhz_per_gauss", cfg.mu_b_mhz_per_gauss);
  get(j, "xi", cfg.xi);
  get(j, "gamma1_mhz", cfg.gamma1_mhz);
  if (j.contains("strain")) {
    const json& s = j.at("strain");
    get(s, "eps_yy", cfg.strain.eps_yy);
    get(s, "eps_zz", cfg.strain.eps_zz);
    get(s, "b_deform_ev", cfg.strain.b_deform_ev);
    get(s, "d_deform_ev", cfg.strain.d_deform_ev);
    get(s, "tilt_deg", cfg.strain.tilt_deg);
  }
  get(j, "g1", cfg.g1);
  get(j, "g2", cfg.g2);
  get(j, "doublet", cfg.doublet);
  if (j.contains("fit")) {
    const json& f = j.at("fit");
    get(f, "max_iterations", cfg.max_iterations);
    get(f, "mask_chi2", cfg.mask_chi2);
    get(f, "g1_lo", cfg.g1_lo);
    get(f, "g1_hi", cfg.g1_hi);
    get(f, "g2_lo", cfg.g2_lo);
    get(f, "g2_hi", cfg.g2_hi);
    get(f, "incl_max_deg", cfg.incl_max_deg);
  }
  get(j, "output_dir", cfg.output_dir);
  cfg.validate();
  return cfg;
}

std::string RunConfig::to_json_text() const {
  json j;
  j["g_e"] = g_e;
  j["mu_b_mhz_per_gauss"] = mu_b_mhz_per_gauss;
  j["xi"] = xi;
  j["gamma1_mhz"] = gamma1_mhz;
  j["strain"] = {{"eps_yy", strain.eps_yy},
                 {"eps_zz", strain.eps_zz},
                 {"b_deform_ev", strain.b_deform_ev},
                 {"d_deform_ev", strain.d_deform_ev},
                 {"tilt_deg", strain.tilt_deg}};
  j["g1"] = g1;
  j["g2"] = g2;
  j["doublet"] = doublet;
  j["fit"] = {{"max_iterations", max_iterations}, {"mask_chi2", mask_chi2},
              {"g1_lo", g1_lo},                   {"g1_hi", g1_hi},
              {"g2_lo", g2_lo},                   {"g2_hi", g2_hi},
              {"incl_max_deg", incl_max_deg}};
  j["output_dir"] = output_dir;
  return j.dump(2) + "\n";
}

RunConfig RunConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void RunConfig::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write config: " + path);
  out << to_json_text();
}

RunConfig resolve_config(const std::string& explicit_path) {
  if (!explicit_path.empty()) return RunConfig::load(explicit_path);
  if (const char* env = std::getenv(kConfigEnvVar); env && *env)
    return RunConfig::load(env);
  return RunConfig{};
}

}  // namespace tcsd
