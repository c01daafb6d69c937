#include "tcsd/hyperpol.hpp"

#include <cmath>
#include <stdexcept>

namespace tcsd {
namespace {

// Peak-normalized Lorentzian of FWHM gamma centred at x0.
inline double lor(double x, double x0, double gamma) {
  const double u = 2.0 * (x - x0) / gamma;
  return 1.0 / (1.0 + u * u);
}

}  // namespace

TransitionSplitting transition_splitting(double g_e, double g_h, double b_gauss) {
  if (!(b_gauss >= 0.0))
    throw std::invalid_argument("transition_splitting: b_gauss must be >= 0");
  TransitionSplitting s;
  s.conserving_mhz = (g_h - g_e) * kMuBMhzPerGauss * b_gauss;
  s.nonconserving_mhz = (g_h + g_e) * kMuBMhzPerGauss * b_gauss;
  return s;
}

std::vector<double> HyperpolModel::effective_weights() const {
  if (!weights.empty()) return weights;
  std::vector<double> w(holes.entries.size());
  const double total = holes.total_multiplicity();
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = holes.entries[i].multiplicity / total;
  return w;
}

void HyperpolModel::validate() const {
  if (!(gamma_mhz > 0.0))
    throw std::invalid_argument("HyperpolModel: gamma must be > 0 MHz");
  if (!(branch_ratio_r >= 0.0))
    throw std::invalid_argument("HyperpolModel: branch ratio r must be >= 0");
  holes.validate();
  if (inhom) inhom->validate();
  if (!weights.empty()) {
    if (weights.size() != holes.entries.size())
      throw std::invalid_argument(
          "HyperpolModel: weights must match the hole subset count");
    double sum = 0.0;
    for (double w : weights) {
      if (!(w >= 0.0))
        throw std::invalid_argument("HyperpolModel: weights must be >= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument("HyperpolModel: weights must sum to 1");
  }
}

HyperpolModel HyperpolModel::single(double gamma_mhz, double g_h, double g_e,
                                    double r) {
  HyperpolModel m;
  m.gamma_mhz = gamma_mhz;
  m.g_e = g_e;
  m.holes.entries = {{g_h, 1, 0.0}};
  m.branch_ratio_r = r;
  return m;
}

double single_centre_amplitude(double gamma_mhz, double eps_b_mhz,
                               double delta_mhz) {
  if (!(gamma_mhz > 0.0))
    throw std::invalid_argument("single_centre_amplitude: gamma must be > 0");
  const double g2 = gamma_mhz * gamma_mhz;
  return g2 / (4.0 * delta_mhz * delta_mhz + g2 + eps_b_mhz * eps_b_mhz);
}

double rate_model_amplitude(const HyperpolModel& model, double b_gauss,
                            double delta_mhz) {
  model.validate();
  if (model.holes.entries.size() != 1)
    throw std::invalid_argument("rate_model_amplitude: single-subset model required");
  if (model.branch_ratio_r != 0.0)
    throw std::invalid_argument("rate_model_amplitude: requires r = 0");

  const auto s = transition_splitting(model.g_e, model.holes.entries[0].g_h,
                                      std::abs(b_gauss));
  const double half = 0.5 * s.conserving_mhz;
  const double lb = lor(delta_mhz, -half, model.gamma_mhz);
  const double lc = lor(delta_mhz, +half, model.gamma_mhz);
  if (lb + lc == 0.0) return 0.0;
  // 2 L_B L_C / (L_B + L_C), already 1 at B = 0, Delta = 0
  return 2.0 * lb * lc / (lb + lc);
}

double four_transition_amplitude(const HyperpolModel& model, double b_gauss,
                                 double delta_mhz) {
  model.validate();
  if (model.holes.entries.size() != 1)
    throw std::invalid_argument(
        "four_transition_amplitude: single-subset model required");

  const double r = model.branch_ratio_r;
  const auto s = transition_splitting(model.g_e, model.holes.entries[0].g_h,
                                      std::abs(b_gauss));
  const double hc = 0.5 * s.conserving_mhz;
  const double hn = 0.5 * s.nonconserving_mhz;
  const double g = model.gamma_mhz;

  const double lb = lor(delta_mhz, -hc, g);
  const double lc = lor(delta_mhz, +hc, g);
  const double la = r * lor(delta_mhz, -hn, g);
  const double ld = r * lor(delta_mhz, +hn, g);

  const double denom = la + lb + lc + ld;
  if (denom == 0.0) return 0.0;
  const double raw = (lb * lc + la * lc + lb * ld + la * ld) / denom;
  // normalize by the same expression at B = 0, Delta = 0, where
  // lb = lc = 1 and la = ld = r, so the origin maps to exactly 1
  const double raw0 = (1.0 + r + r + r * r) / (r + 1.0 + 1.0 + r);
  return raw / raw0;
}

double ensemble_amplitude(const HyperpolModel& model, double b_gauss,
                          double delta_mhz) {
  model.validate();
  const std::vector<double> w = model.effective_weights();
  double acc = 0.0;
  double wsum = 0.0;
  for (std::size_t i = 0; i < model.holes.entries.size(); ++i) {
    if (w[i] == 0.0) continue;
    if (model.branch_ratio_r > 0.0) {
      HyperpolModel sub = HyperpolModel::single(
          model.gamma_mhz, model.holes.entries[i].g_h, model.g_e,
          model.branch_ratio_r);
      acc += w[i] * four_transition_amplitude(sub, b_gauss, delta_mhz);
    } else {
      const auto s = transition_splitting(
          model.g_e, model.holes.entries[i].g_h, std::abs(b_gauss));
      acc += w[i] *
             single_centre_amplitude(model.gamma_mhz, s.conserving_mhz, delta_mhz);
    }
    wsum += w[i];
  }
  // renormalizing by the accumulated weight makes the origin exactly 1 even
  // when the floating-point weight sum is 1 +/- 1 ulp
  return acc / wsum;
}

// ---------------------------------------------------------------------------
// inhomogeneous convolution

namespace {

constexpr int kMaxLevels = 11;  // base 2001 points, cap ~2e6

inline std::size_t level_points(int level) {
  return (static_cast<std::size_t>(2000) << level) + 1;
}

// Ensemble amplitude with precomputed per-subset splittings; avoids the
// validate/weight plumbing inside the quadrature loop.
struct EnsembleKernel {
  std::vector<double> w;
  std::vector<double> eps_c, eps_n;  // conserving / nonconserving at this B
  double gamma, r;

  EnsembleKernel(const HyperpolModel& m, const std::vector<double>& weights,
                 double b_gauss)
      : w(weights), gamma(m.gamma_mhz), r(m.branch_ratio_r) {
    eps_c.reserve(m.holes.entries.size());
    eps_n.reserve(m.holes.entries.size());
    for (const auto& e : m.holes.entries) {
      const auto s = transition_splitting(m.g_e, e.g_h, std::abs(b_gauss));
      eps_c.push_back(s.conserving_mhz);
      eps_n.push_back(s.nonconserving_mhz);
    }
  }

  double operator()(double delta) const {
    double acc = 0.0;
    if (r > 0.0) {
      for (std::size_t i = 0; i < w.size(); ++i) {
        const double hc = 0.5 * eps_c[i], hn = 0.5 * eps_n[i];
        const double lb = lor(delta, -hc, gamma);
        const double lc = lor(delta, +hc, gamma);
        const double la = r * lor(delta, -hn, gamma);
        const double ld = r * lor(delta, +hn, gamma);
        const double denom = la + lb + lc + ld;
        if (denom > 0.0)
          acc += w[i] * ((lb * lc + la * lc + lb * ld + la * ld) / denom) *
                 2.0 / (1.0 + r);
      }
    } else {
      const double g2 = gamma * gamma;
      for (std::size_t i = 0; i < w.size(); ++i)
        acc += w[i] * g2 /
               (4.0 * delta * delta + g2 + eps_c[i] * eps_c[i]);
    }
    return acc;
  }
};

}  // namespace

ConvolvedEvaluator::ConvolvedEvaluator(const HyperpolModel& model)
    : model_(model) {
  model_.validate();
  if (!model_.inhom)
    throw std::invalid_argument("ConvolvedEvaluator: model.inhom must be set");
  weights_ = model_.effective_weights();
  half_span_mhz_ = 5.0 * model_.inhom->fwhm_mhz;

  // start the ladder fine enough to resolve the homogeneous peak, or false
  // convergence between coarse levels could pass the 1e-4 check
  const double target_h = 0.5 * model_.gamma_mhz;
  start_level_ = 0;
  while (start_level_ + 1 < kMaxLevels &&
         2.0 * half_span_mhz_ /
                 static_cast<double>(level_points(start_level_) - 1) >
             target_h)
    ++start_level_;

  profile_levels_.resize(kMaxLevels);
  norm_ = raw(0.0, 0.0);
  if (!(norm_ > 0.0))
    throw std::runtime_error("ConvolvedEvaluator: vanishing normalization");
}

const std::vector<double>& ConvolvedEvaluator::level_profile(int level) const {
  if (level < levels_filled_.load(std::memory_order_acquire))
    return profile_levels_[level];
  std::lock_guard<std::mutex> lock(fill_mutex_);
  for (int k = levels_filled_.load(std::memory_order_relaxed); k <= level; ++k) {
    const std::size_t n = level_points(k);
    const double h = 2.0 * half_span_mhz_ / static_cast<double>(n - 1);
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i)
      vals[i] = profile(*model_.inhom, -half_span_mhz_ + h * static_cast<double>(i));
    profile_levels_[k] = std::move(vals);
    levels_filled_.store(k + 1, std::memory_order_release);
  }
  return profile_levels_[level];
}

double ConvolvedEvaluator::raw(double b_gauss, double delta_mhz) const {
  const EnsembleKernel kernel(model_, weights_, b_gauss);

  // nested trapezoid ladder: T_k refines T_{k-1} using only the new midpoints
  double prev = 0.0;
  for (int k = start_level_; k < kMaxLevels; ++k) {
    const std::size_t n = level_points(k);
    const double h = 2.0 * half_span_mhz_ / static_cast<double>(n - 1);
    const auto& prof = level_profile(k);
    double t;
    if (k == start_level_) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double x = -half_span_mhz_ + h * static_cast<double>(i);
        const double f = prof[i] * kernel(delta_mhz + x);
        sum += (i == 0 || i == n - 1) ? 0.5 * f : f;
      }
      t = h * sum;
    } else {
      double sum = 0.0;
      for (std::size_t i = 1; i < n; i += 2) {  // nodes new at this level
        const double x = -half_span_mhz_ + h * static_cast<double>(i);
        sum += prof[i] * kernel(delta_mhz + x);
      }
      t = 0.5 * prev + h * sum;
    }
    if (k > start_level_ &&
        std::abs(t - prev) <= 1e-4 * std::max(std::abs(t), 1e-300))
      return t;
    prev = t;
  }
  throw std::runtime_error(
      "convolved_amplitude: quadrature did not converge within the point budget");
}

double ConvolvedEvaluator::value(double b_gauss, double delta_mhz) const {
  return raw(b_gauss, delta_mhz) / norm_;
}

double convolved_amplitude(const HyperpolModel& model, double b_gauss,
                           double delta_mhz) {
  const ConvolvedEvaluator eval(model);
  return eval.value(b_gauss, delta_mhz);
}

}  // namespace tcsd
