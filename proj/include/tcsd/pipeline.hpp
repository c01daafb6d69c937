#pragma once

#include <cstdint>
#include <vector>

#include "tcsd/data.hpp"
#include "tcsd/exec.hpp"
#include "tcsd/hyperpol.hpp"
#include "tcsd/least_squares.hpp"

namespace tcsd {

// Evaluates the configured amplitude model (convolved when model.inhom is
// set) at Delta = 0 over the field grid and adds Gaussian noise; the sigma
// column records noise_sigma (1 when noise-free). Deterministic per seed.
SweepData simulate_sweep(const HyperpolModel& model,
                         const std::vector<double>& b_gauss,
                         double noise_sigma, std::uint64_t seed,
                         Exec exec = Exec::parallel);

// Ensemble amplitude over the full (B, Delta) grid.
PLEMap simulate_map(const HyperpolModel& model,
                    const std::vector<double>& b_gauss,
                    const std::vector<double>& delta_mhz,
                    Exec exec = Exec::parallel);

// Lorentzian fit of every fixed-B row of the map. Rows whose fit fails to
// converge are excluded from the table.
struct LinewidthRow {
  double b_gauss = 0.0;
  double fwhm_mhz = 0.0;
  double sigma_mhz = 0.0;
};

std::vector<LinewidthRow> map_linewidths(const PLEMap& map,
                                         Exec exec = Exec::parallel);

// Two-photon interference figure of merit I = xi Gamma_1 / (xi Gamma_1 + Gamma_sd).
struct Indistinguishability {
  double xi = 0.23;
  double gamma1_mhz = 0.169;
  double gamma_sd_mhz = 0.0;
  double value = 1.0;
};

Indistinguishability indistinguishability(double gamma_sd_mhz, double xi = 0.23,
                                          double gamma1_mhz = 0.169);

}  // namespace tcsd
