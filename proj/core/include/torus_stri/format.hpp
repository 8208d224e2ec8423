#pragma once

#include <string>

namespace torus {

using Int128 = __int128;

// 17 significant digits (lossless round-trip), '.' decimal,
// independent of the global locale.
std::string format_double(double v);
std::string format_int128(Int128 v);

}  // namespace torus
