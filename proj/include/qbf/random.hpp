#pragma once

#include <cstdint>
#include <random>

namespace qbf {

/// Deterministic engine keyed by (seed, stream, substream). Distinct keys give
/// statistically independent streams; identical keys give identical streams.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream = 0,
                                   std::uint64_t substream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    static_cast<std::uint32_t>(substream),
                    static_cast<std::uint32_t>(substream >> 32), 0x71bfu};
  return std::mt19937_64(seq);
}

}  // namespace qbf
