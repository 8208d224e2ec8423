#pragma once

#include <string>
#include <vector>

#include "torus_stri/spectrum.hpp"

namespace torus {

// Richness constant of the exceptional-set decomposition: the smallest
// C >= 1 for which every input of calibration_suite() halves at every
// step. Mirrors config/defaults.json; recalibrated by the test suite.
inline constexpr int kDefaultRichnessC = 1;

// chi_{[-N, N]^2} for N = 1..8, then 30 seeded random nonnegative spectra
// with 64..4096 points at fill densities 0.95, 0.5 and 0.1.
std::vector<WeightedSpectrum> calibration_suite();

// Smallest C in [1, max_c] for which decompose() halves at every step on
// every input; -1 if none does.
int calibrate_richness_c(const std::vector<WeightedSpectrum>& suite, int max_c = 8);

// Reads "richness_c" from a defaults.json document.
int richness_c_from_json(const std::string& text);

}  // namespace torus
