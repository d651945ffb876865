#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace qbs {

using Complex = std::complex<double>;

// Row-major 2x2 complex operator acting on a single qubit.
using Matrix2c = std::array<std::array<Complex, 2>, 2>;

// Sequence of classical bits, most significant first.
using Bits = std::vector<std::uint8_t>;

// All stochastic routines take this engine; seeding it fixes every result.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) with 53 random bits. Does not depend on the
// standard library's distribution implementation, so seeded runs are
// reproducible across toolchains.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

enum class Membership { absent, present };

inline const char* to_string(Membership m) {
  return m == Membership::present ? "present" : "absent";
}

}  // namespace qbs
