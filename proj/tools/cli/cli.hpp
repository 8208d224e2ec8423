#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "torus_stri/spectrum.hpp"

namespace torus::cli {

// Runs the torus-stri command line; args excludes the program name.
// Returns the process exit code: 0 ok, 2 validation, 3 cap, 4 numerical.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// "grid:N", "file:PATH", "random:COUNT:RADIUS:SEED" or a bare path.
WeightedSpectrum resolve_set(const std::string& descriptor);

}  // namespace torus::cli
