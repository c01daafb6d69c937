#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "tcsd/data.hpp"
#include "tcsd/exec.hpp"
#include "tcsd/hole_g.hpp"
#include "tcsd/hyperpol.hpp"
#include "tcsd/least_squares.hpp"
#include "tcsd/lineshape.hpp"

namespace tcsd {

// Which subsets enter a sweep fit: all of them with their weights, or only
// the single subset minimizing / maximizing the fitted width (bounding sets).
enum class WeightMode { equal, single_min, single_max };

WeightMode weight_mode_from_string(const std::string& s);

struct GammaSdOptions {
  std::optional<double> inhom_fwhm_mhz;  // set -> convolved mode
  ProfileKind inhom_kind = ProfileKind::gaussian;
  WeightMode weight_mode = WeightMode::equal;
  double branch_ratio_r = 0.0;
  bool fit_offset = false;
  double mask_chi2 = 10.0;  // used by the orientation sweep
  Exec exec = Exec::parallel;
};

// Fits gamma (plus free scale, offset fixed at 0 unless fit_offset) of the
// ensemble or convolved amplitude model at Delta = 0.
// Result names: "gamma_sd_mhz", "scale" [, "offset"].
FitResult fit_gamma_sd(const SweepData& sweep, const HoleGFactors& holes,
                       double g_e, const GammaSdOptions& opt = {});

struct SpectrumFitOptions {
  ProfileKind shape = ProfileKind::lorentzian;
  double residual_b_gauss = 0.0;
  HoleGFactors holes;   // empty -> single subset g_h = g_e (no splitting)
  double g_e = kGElectron;
};

// Fits centre, amplitude, offset and width of a residual-field PLE spectrum.
// shape lorentzian -> subset-averaged closed-form lineshape with Gamma = Lambda;
// shape glp / gaussian -> profile of width sqrt(Lambda^2 + mean eps_B^2).
// Result names: "lambda_mhz", "centre_mhz", "amplitude", "offset".
FitResult fit_linewidth_spectrum(const SpectrumData& spectrum,
                                 const SpectrumFitOptions& opt = {});

// Calibrates (g1, g2, inclination, azimuth) against 12 measured g-factors by
// sorted-descending pairing; multistart over 8 azimuth seeds; azimuth
// canonicalized to the smallest of its exact symmetry equivalents.
// Result names: "g1", "g2", "incl_deg", "azim_deg".
FitResult fit_gfactor_calibration(const std::vector<double>& g_measured,
                                  const std::vector<double>& g_sigma,
                                  const StrainConfig& strain,
                                  const Eigen::Vector3d& nominal_axis,
                                  double b_gauss = 100.0);

// Builds the 12-subset g-factors for a field direction given by spherical
// angles (theta from [001], phi from [100] in the (001) plane).
using HolesBuilder = std::function<HoleGFactors(double theta_rad, double phi_rad)>;

struct OrientationSweepOptions {
  int n_theta = 16;
  int n_phi = 16;
  double theta_max_rad = 1.5707963267948966;  // pi/2
  double phi_max_rad = 1.5707963267948966;
  GammaSdOptions fit;
  Exec exec = Exec::parallel;
};

// Re-fits gamma_sd for every grid orientation, masking points that fail to
// converge or exceed the chi2 threshold; records the converged maximum.
// Throws "no orientation fits data" when everything is masked.
OrientationMap orientation_bound_sweep(const SweepData& sweep,
                                       const HolesBuilder& builder, double g_e,
                                       const OrientationSweepOptions& opt = {});

}  // namespace tcsd
