#pragma once

#include <atomic>
#include <mutex>
#include <optional>
#include <vector>

#include "tcsd/constants.hpp"
#include "tcsd/hole_g.hpp"
#include "tcsd/lineshape.hpp"

namespace tcsd {

// Zeeman splittings of the optical transitions for one (g_e, g_h) pair:
// spin-conserving (g_h - g_e) mu_B B and non-conserving (g_h + g_e) mu_B B.
struct TransitionSplitting {
  double conserving_mhz = 0.0;
  double nonconserving_mhz = 0.0;
};

TransitionSplitting transition_splitting(double g_e, double g_h, double b_gauss);

// Hyperpolarized-PLE amplitude model: homogeneous width gamma, the hole
// g-factor subsets with weights (default multiplicity/12), the cross-spin
// branch ratio r (peak amplitude of the non-conserving transitions relative
// to the conserving ones), and an optional inhomogeneous profile.
struct HyperpolModel {
  double gamma_mhz = 1.0;
  double g_e = kGElectron;
  HoleGFactors holes;
  double branch_ratio_r = 0.0;
  std::optional<LineshapeSpec> inhom;
  std::vector<double> weights;  // empty -> multiplicity/12 per entry

  std::vector<double> effective_weights() const;
  void validate() const;

  static HyperpolModel single(double gamma_mhz, double g_h,
                              double g_e = kGElectron, double r = 0.0);
};

// Closed form: A = Gamma^2 / (4 Delta^2 + Gamma^2 + eps_B^2), in (0, 1].
double single_centre_amplitude(double gamma_mhz, double eps_b_mhz,
                               double delta_mhz);

// Rate-model construction: peak-normalized Lorentzians L_B, L_C of FWHM Gamma
// at -/+ eps_conserving/2, combined as 2 L_B L_C / (L_B + L_C). Requires a
// single-subset model with r = 0; algebraically identical to the closed form.
double rate_model_amplitude(const HyperpolModel& model, double b_gauss,
                            double delta_mhz);

// Four-transition form: adds the cross-spin Lorentzians L_A, L_D with peak
// amplitude r at -/+ eps_nonconserving/2 and evaluates
// (L_B L_C + L_A L_C + L_B L_D + L_A L_D) / (L_A + L_B + L_C + L_D),
// normalized to its (B=0, Delta=0) value. Requires a single-subset model.
double four_transition_amplitude(const HyperpolModel& model, double b_gauss,
                                 double delta_mhz);

// Weighted subset average of the single-centre (r = 0) or four-transition
// (r > 0) amplitude; equals 1 at (0, 0) by construction.
double ensemble_amplitude(const HyperpolModel& model, double b_gauss,
                          double delta_mhz);

// Ensemble amplitude with detuning Delta -> Delta + dE integrated against the
// inhomogeneous profile over dE in [-5 Lambda, 5 Lambda], renormalized to 1
// at (B=0, Delta=0). Trapezoid ladder starting at >= 2001 points, interval
// count doubled until two levels agree to 1e-4 relative; throws a runtime
// error if the ladder is exhausted without converging.
double convolved_amplitude(const HyperpolModel& model, double b_gauss,
                           double delta_mhz = 0.0);

// Precomputes the quadrature grid and profile values of convolved_amplitude
// so sweeps over B reuse them; value() matches convolved_amplitude bitwise.
class ConvolvedEvaluator {
 public:
  explicit ConvolvedEvaluator(const HyperpolModel& model);
  ConvolvedEvaluator(const ConvolvedEvaluator&) = delete;
  ConvolvedEvaluator& operator=(const ConvolvedEvaluator&) = delete;

  double value(double b_gauss, double delta_mhz = 0.0) const;

 private:
  HyperpolModel model_;
  std::vector<double> weights_;
  double half_span_mhz_ = 0.0;
  int start_level_ = 0;
  double norm_ = 1.0;
  // inhomogeneous profile sampled on the full grid of each ladder level,
  // filled lazily; safe to share across threads
  mutable std::vector<std::vector<double>> profile_levels_;
  mutable std::atomic<int> levels_filled_{0};
  mutable std::mutex fill_mutex_;

  double raw(double b_gauss, double delta_mhz) const;
  const std::vector<double>& level_profile(int level) const;
};

}  // namespace tcsd
