#include "tcsd/hole_g.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "tcsd/rng.hpp"

namespace tcsd {

void HoleModel::validate() const {
  strain.validate();
  if (!(mu_b_mhz_per_gauss > 0.0))
    throw std::invalid_argument("HoleModel: mu_b_mhz_per_gauss must be > 0");
}

int HoleGFactors::total_multiplicity() const {
  int total = 0;
  for (const auto& e : entries) total += e.multiplicity;
  return total;
}

void HoleGFactors::validate() const {
  if (entries.empty())
    throw std::invalid_argument("HoleGFactors: no entries");
  for (const auto& e : entries) {
    if (!(e.g_h > 0.0))
      throw std::invalid_argument("HoleGFactors: g_h must be > 0");
    if (e.multiplicity <= 0)
      throw std::invalid_argument("HoleGFactors: multiplicity must be > 0");
    if (!(e.sigma >= 0.0))
      throw std::invalid_argument("HoleGFactors: sigma must be >= 0");
  }
}

double doublet_splitting_mhz(const HoleModel& model, const Orientation& orient,
                             const FieldSpec& field) {
  Eigen::Matrix4cd h =
      build_strain_hamiltonian(orient.strain_crystal, model.strain.b_deform_ev,
                               model.strain.d_deform_ev);
  // rescale so a non-default mu_B stays consistent with the g_h division
  h += build_zeeman_hamiltonian(field, model.g1, model.g2) *
       (model.mu_b_mhz_per_gauss / kMuBMhzPerGauss);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(h,
                                                         Eigen::EigenvaluesOnly);
  const Eigen::Vector4d ev = solver.eigenvalues();  // ascending
  return model.doublet == Doublet::lower ? ev[1] - ev[0] : ev[3] - ev[2];
}

std::vector<double> hole_g_per_orientation(const HoleModel& model,
                                           const OrientationSet& orientations,
                                           const FieldSpec& field) {
  model.validate();
  field.validate();
  if (field.magnitude_gauss <= 0.0)
    throw std::invalid_argument("g-factor undefined at zero field");

  std::vector<double> g(orientations.size());
  for (std::size_t i = 0; i < orientations.size(); ++i)
    g[i] = doublet_splitting_mhz(model, orientations[i], field) /
           (model.mu_b_mhz_per_gauss * field.magnitude_gauss);
  return g;
}

namespace {

// Groups (g, sigma) pairs whose values agree to 1e-6 relative; input need not
// be sorted. Returns entries sorted ascending in g.
HoleGFactors group_entries(std::vector<double> g, std::vector<double> sigma) {
  std::vector<std::size_t> order(g.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return g[a] < g[b]; });

  HoleGFactors out;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const double gv = g[order[k]];
    const double sv = sigma[order[k]];
    if (!out.entries.empty()) {
      auto& last = out.entries.back();
      const double scale = std::max(std::abs(last.g_h), std::abs(gv));
      const double sscale = std::max(std::abs(last.sigma), std::abs(sv));
      if (std::abs(gv - last.g_h) <= 1e-6 * scale &&
          std::abs(sv - last.sigma) <= 1e-6 * std::max(sscale, 1e-300)) {
        // merge: keep the running mean of the group
        last.g_h = (last.g_h * last.multiplicity + gv) / (last.multiplicity + 1);
        last.sigma =
            (last.sigma * last.multiplicity + sv) / (last.multiplicity + 1);
        ++last.multiplicity;
        continue;
      }
    }
    out.entries.push_back({gv, 1, sv});
  }
  return out;
}

}  // namespace

HoleGFactors compute_hole_g(const HoleModel& model,
                            const OrientationSet& orientations,
                            const FieldSpec& field) {
  std::vector<double> g = hole_g_per_orientation(model, orientations, field);
  HoleGFactors out = group_entries(std::move(g),
                                   std::vector<double>(orientations.size(), 0.0));
  out.validate();
  return out;
}

HoleGFactors propagate_alignment_uncertainty(
    const HoleModel& model, const OrientationSet& orientations,
    const FieldSpec& nominal, double incl_err_deg, double azim_err_deg,
    int n_samples, std::uint64_t seed, Exec exec) {
  model.validate();
  nominal.validate();
  if (n_samples < 100)
    throw std::invalid_argument(
        "propagate_alignment_uncertainty: n_samples must be >= 100");
  if (!(incl_err_deg >= 0.0) || !(azim_err_deg >= 0.0))
    throw std::invalid_argument(
        "propagate_alignment_uncertainty: error bounds must be >= 0");

  const std::size_t n_orient = orientations.size();
  Eigen::Vector3d e1, e2;
  axis_frame(nominal.direction, e1, e2);
  const double incl_err = incl_err_deg * M_PI / 180.0;
  const double azim_err = azim_err_deg * M_PI / 180.0;

  // per-sample g values; filled by index so thread schedule cannot reorder
  std::vector<double> samples(static_cast<std::size_t>(n_samples) * n_orient);

  const auto sample_row = [&](int i) {
    // two independent tilts about orthogonal transverse axes of the nominal
    // direction; uniform over the +/- error box
    const double dth = uniform(seed, static_cast<std::uint64_t>(i), 0,
                               -incl_err, incl_err);
    const double dph = uniform(seed, static_cast<std::uint64_t>(i), 1,
                               -azim_err, azim_err);
    const Eigen::Vector3d dir =
        (nominal.direction + std::tan(dth) * e1 + std::tan(dph) * e2)
            .normalized();
    FieldSpec f;
    f.magnitude_gauss = nominal.magnitude_gauss;
    f.direction = dir;
    const std::vector<double> g =
        hole_g_per_orientation(model, orientations, f);
    std::copy(g.begin(), g.end(),
              samples.begin() + static_cast<std::size_t>(i) * n_orient);
  };

  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n_samples; ++i) sample_row(i);
  } else {
    for (int i = 0; i < n_samples; ++i) sample_row(i);
  }

  // serial reduction in fixed order, independent of thread count; centering
  // on the first sample keeps the zero-error case exact (all samples equal
  // gives mean bitwise equal to the sample and sigma exactly 0)
  std::vector<double> mean(n_orient, 0.0), sq(n_orient, 0.0);
  for (int i = 0; i < n_samples; ++i)
    for (std::size_t k = 0; k < n_orient; ++k)
      mean[k] += samples[static_cast<std::size_t>(i) * n_orient + k] - samples[k];
  for (std::size_t k = 0; k < n_orient; ++k)
    mean[k] = samples[k] + mean[k] / n_samples;
  for (int i = 0; i < n_samples; ++i)
    for (std::size_t k = 0; k < n_orient; ++k) {
      const double d = samples[static_cast<std::size_t>(i) * n_orient + k] - mean[k];
      sq[k] += d * d;
    }
  std::vector<double> sigma(n_orient);
  for (std::size_t k = 0; k < n_orient; ++k)
    sigma[k] = n_samples > 1 ? std::sqrt(sq[k] / (n_samples - 1)) : 0.0;

  HoleGFactors out = group_entries(std::move(mean), std::move(sigma));
  out.validate();
  return out;
}

}  // namespace tcsd
