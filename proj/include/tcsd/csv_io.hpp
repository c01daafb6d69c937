#pragma once

#include <string>
#include <vector>

#include "tcsd/data.hpp"

namespace tcsd {

// CSV conventions: comma separator, '.' decimal point, mandatory header row.
// Writers emit 17 significant digits so every file re-parses losslessly.

// Columns b_gauss,amplitude[,sigma]; rows sorted ascending in B on load,
// missing sigma column filled with 1.0. Parse failures throw with the
// offending line number.
SweepData parse_sweep_csv(const std::string& path);
void write_sweep_csv(const std::string& path, const SweepData& sweep);

// Columns delta_mhz,counts[,sigma].
SpectrumData parse_spectrum_csv(const std::string& path);
void write_spectrum_csv(const std::string& path, const SpectrumData& spectrum);

// Long format b_gauss,delta_mhz,amplitude covering a complete grid.
PLEMap parse_map_csv(const std::string& path);
void write_map_csv(const std::string& path, const PLEMap& map);

// Columns g_h,sigma (one row per measured subset).
void parse_gfactor_csv(const std::string& path, std::vector<double>& g,
                       std::vector<double>& sigma);

std::string format_double(double v);  // shortest exact form, 17 significant digits

}  // namespace tcsd
