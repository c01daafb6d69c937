#pragma once

#include <string>
#include <vector>

namespace tcsd {

// Amplitude vs magnetic field, with per-point uncertainties (default 1).
struct SweepData {
  std::vector<double> b_gauss;
  std::vector<double> amplitude;
  std::vector<double> sigma;

  std::size_t size() const { return b_gauss.size(); }
  void sort_by_field();
  void validate() const;  // lengths equal >= 4, strictly ascending B, sigma > 0
};

// Counts (or normalized amplitude) vs laser detuning.
struct SpectrumData {
  std::vector<double> delta_mhz;
  std::vector<double> counts;
  std::vector<double> sigma;

  std::size_t size() const { return delta_mhz.size(); }
  void sort_by_detuning();
  void validate() const;  // lengths equal >= 5, strictly ascending detuning
};

// Amplitude over a (field x detuning) grid, row i at b_gauss[i].
struct PLEMap {
  std::vector<double> b_gauss;
  std::vector<double> delta_mhz;
  std::vector<std::vector<double>> amplitude;  // [field][detuning]

  void validate() const;
};

// Fitted spectral-diffusion width per field orientation; NaN rows masked.
struct OrientationMap {
  std::vector<double> theta_rad;
  std::vector<double> phi_rad;
  std::vector<std::vector<double>> gamma_sd_mhz;  // [theta][phi], NaN = masked
  std::vector<std::vector<bool>> converged;

  struct MaxPoint {
    double theta_rad = 0.0;
    double phi_rad = 0.0;
    double gamma_sd_mhz = 0.0;
  } max_point;

  void validate() const;
};

}  // namespace tcsd
