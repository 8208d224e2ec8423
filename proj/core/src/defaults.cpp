#include "torus_stri/defaults.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "torus_stri/incidence.hpp"
#include "torus_stri/random.hpp"

namespace torus {

std::vector<WeightedSpectrum> calibration_suite() {
  std::vector<WeightedSpectrum> suite;
  for (std::int64_t n = 1; n <= 8; ++n) suite.push_back(WeightedSpectrum::indicator(Box::centered(n).points()));
  constexpr double kDensity[] = {0.95, 0.5, 0.1};
  for (int i = 0; i < 30; ++i) {
    const std::size_t count = 64 + static_cast<std::size_t>(i) * (4096 - 64) / 29;
    const double density = kDensity[i % 3];
    const auto radius =
        static_cast<std::int64_t>(std::ceil((std::sqrt(static_cast<double>(count) / density) - 1.0) / 2.0));
    Rng rng(0x5eed0000ULL + static_cast<std::uint64_t>(i));
    suite.push_back(random_nonnegative_spectrum(rng, radius, count));
  }
  return suite;
}

int calibrate_richness_c(const std::vector<WeightedSpectrum>& suite, int max_c) {
  for (int c = 1; c <= max_c; ++c) {
    bool ok = true;
    for (const auto& f : suite) {
      if (!decompose(f, c).all_halved) {
        ok = false;
        break;
      }
    }
    if (ok) return c;
  }
  return -1;
}

int richness_c_from_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text).at("richness_c").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("malformed_config", std::string("defaults: ") + e.what());
  }
}

}  // namespace torus
