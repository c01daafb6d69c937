#include "tcsd/data.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tcsd {
namespace {

void sort_columns(std::vector<double>& axis, std::vector<double>& a,
                  std::vector<double>& b) {
  std::vector<std::size_t> order(axis.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return axis[i] < axis[j]; });
  auto permute = [&](std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[order[i]];
    v = std::move(out);
  };
  permute(axis);
  permute(a);
  if (!b.empty()) permute(b);
}

void check_finite(const std::vector<double>& v, const char* what) {
  for (double x : v)
    if (!std::isfinite(x))
      throw std::invalid_argument(std::string(what) + ": non-finite value");
}

}  // namespace

void SweepData::sort_by_field() { sort_columns(b_gauss, amplitude, sigma); }

void SweepData::validate() const {
  if (b_gauss.size() < 4)
    throw std::invalid_argument("SweepData: need at least 4 points");
  if (amplitude.size() != b_gauss.size() ||
      (!sigma.empty() && sigma.size() != b_gauss.size()))
    throw std::invalid_argument("SweepData: column lengths differ");
  check_finite(b_gauss, "SweepData.b_gauss");
  check_finite(amplitude, "SweepData.amplitude");
  for (std::size_t i = 1; i < b_gauss.size(); ++i)
    if (!(b_gauss[i] > b_gauss[i - 1]))
      throw std::invalid_argument("SweepData: b_gauss must be strictly ascending");
  for (double s : sigma)
    if (!(s > 0.0))
      throw std::invalid_argument("SweepData: sigma must be > 0");
}

void SpectrumData::sort_by_detuning() { sort_columns(delta_mhz, counts, sigma); }

void SpectrumData::validate() const {
  if (delta_mhz.size() < 5)
    throw std::invalid_argument("SpectrumData: need at least 5 points");
  if (counts.size() != delta_mhz.size() ||
      (!sigma.empty() && sigma.size() != delta_mhz.size()))
    throw std::invalid_argument("SpectrumData: column lengths differ");
  check_finite(delta_mhz, "SpectrumData.delta_mhz");
  check_finite(counts, "SpectrumData.counts");
  for (std::size_t i = 1; i < delta_mhz.size(); ++i)
    if (!(delta_mhz[i] > delta_mhz[i - 1]))
      throw std::invalid_argument(
          "SpectrumData: delta_mhz must be strictly ascending");
  for (double s : sigma)
    if (!(s > 0.0))
      throw std::invalid_argument("SpectrumData: sigma must be > 0");
}

void PLEMap::validate() const {
  if (b_gauss.empty() || delta_mhz.empty())
    throw std::invalid_argument("PLEMap: empty axes");
  if (amplitude.size() != b_gauss.size())
    throw std::invalid_argument("PLEMap: row count must match b_gauss");
  for (const auto& row : amplitude)
    if (row.size() != delta_mhz.size())
      throw std::invalid_argument("PLEMap: row length must match delta_mhz");
  for (std::size_t i = 1; i < b_gauss.size(); ++i)
    if (!(b_gauss[i] > b_gauss[i - 1]))
      throw std::invalid_argument("PLEMap: b_gauss must be strictly ascending");
  for (std::size_t i = 1; i < delta_mhz.size(); ++i)
    if (!(delta_mhz[i] > delta_mhz[i - 1]))
      throw std::invalid_argument("PLEMap: delta_mhz must be strictly ascending");
}

void OrientationMap::validate() const {
  if (gamma_sd_mhz.size() != theta_rad.size() ||
      converged.size() != theta_rad.size())
    throw std::invalid_argument("OrientationMap: row count must match theta");
  for (std::size_t i = 0; i < gamma_sd_mhz.size(); ++i)
    if (gamma_sd_mhz[i].size() != phi_rad.size() ||
        converged[i].size() != phi_rad.size())
      throw std::invalid_argument("OrientationMap: row length must match phi");
}

}  // namespace tcsd
