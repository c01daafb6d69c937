#pragma once

#include <cstdint>
#include <vector>

#include "tcsd/constants.hpp"
#include "tcsd/exec.hpp"
#include "tcsd/field.hpp"
#include "tcsd/strain.hpp"

namespace tcsd {

enum class Doublet { lower, upper };

// Everything needed to build H_h = H_s + H_b per orientation and read off a
// hole g-factor from the selected Kramers doublet.
struct HoleModel {
  StrainConfig strain;
  double g1 = kG1Default;
  double g2 = kG2Default;
  Doublet doublet = Doublet::lower;
  double mu_b_mhz_per_gauss = kMuBMhzPerGauss;

  void validate() const;
};

struct HoleEntry {
  double g_h = 0.0;
  int multiplicity = 0;
  double sigma = 0.0;
};

// Grouped per-subset g-factors; multiplicities sum to 12 for a full
// orientation set. Entries are sorted ascending in g_h.
struct HoleGFactors {
  std::vector<HoleEntry> entries;

  int total_multiplicity() const;
  void validate() const;
};

// Doublet splitting of H_s + H_b for one orientation, in MHz.
double doublet_splitting_mhz(const HoleModel& model, const Orientation& orient,
                             const FieldSpec& field);

// g_h per orientation = doublet splitting / (mu_B B); results grouped when
// they agree to 1e-6 relative. Throws "g-factor undefined at zero field" when
// B = 0.
HoleGFactors compute_hole_g(const HoleModel& model,
                            const OrientationSet& orientations,
                            const FieldSpec& field);

// Ungrouped g values, one per orientation, in orientation order.
std::vector<double> hole_g_per_orientation(const HoleModel& model,
                                           const OrientationSet& orientations,
                                           const FieldSpec& field);

// Monte-Carlo propagation of field-alignment uncertainty: samples directions
// uniformly over the error box (two independent tilts about orthogonal axes
// transverse to the nominal direction), recomputes g per orientation per
// sample, and reports per-subset mean and standard deviation. Deterministic
// for fixed (seed, n_samples) at any thread count.
HoleGFactors propagate_alignment_uncertainty(
    const HoleModel& model, const OrientationSet& orientations,
    const FieldSpec& nominal, double incl_err_deg, double azim_err_deg,
    int n_samples, std::uint64_t seed, Exec exec = Exec::parallel);

}  // namespace tcsd
