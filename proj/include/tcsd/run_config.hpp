#pragma once

#include <string>

#include "tcsd/constants.hpp"
#include "tcsd/hole_g.hpp"

namespace tcsd {

// Tool-wide defaults, loadable from a JSON document. Every field has a
// built-in default so an empty config ("{}") is valid; load -> save -> load
// round-trips identically.
struct RunConfig {
  // physical constants
  double g_e = kGElectron;
  double mu_b_mhz_per_gauss = kMuBMhzPerGauss;
  double xi = kXiDefault;
  double gamma1_mhz = kGamma1MhzDefault;

  // Hamiltonian defaults
  StrainConfig strain;
  double g1 = kG1Default;
  double g2 = kG2Default;
  std::string doublet = "lower";

  // fit options
  int max_iterations = 500;
  double mask_chi2 = 10.0;
  double g1_lo = 1.0, g1_hi = 2.0;
  double g2_lo = -0.5, g2_hi = 0.1;
  double incl_max_deg = 30.0;

  std::string output_dir = ".";

  HoleModel hole_model() const;
  void validate() const;

  static RunConfig from_json_text(const std::string& text);
  std::string to_json_text() const;

  static RunConfig load(const std::string& path);
  void save(const std::string& path) const;
};

// Config path resolution: explicit --config flag, else $TCSD_CONFIG, else
// built-in defaults.
inline constexpr const char* kConfigEnvVar = "TCSD_CONFIG";

RunConfig resolve_config(const std::string& explicit_path);

}  // namespace tcsd
