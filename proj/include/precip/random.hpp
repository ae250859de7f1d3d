#pragma once

#include <cstdint>
#include <random>

namespace precip {

using Rng = std::mt19937_64;

// Independent generator for substream `stream` of a run seeded with `seed`.
// Streams depend only on (seed, stream), so work split into streams gives
// the same result regardless of how the streams are scheduled.
inline Rng make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x7072u};
  return Rng(seq);
}

// Uniform draw on the open interval (0, 1).
inline double open_unit(Rng& rng) {
  for (;;) {
    const double u = std::generate_canonical<double, 53>(rng);
    if (u > 0.0 && u < 1.0) return u;
  }
}

}  // namespace precip
