#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lcm {

/// Deterministic generator. Uniform and normal variates are derived from the
/// raw 64-bit engine output by fixed formulas, so streams are reproducible
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  // Uniform on the open interval (0, 1).
  double uniform01();
  // Standard normal by inversion.
  double normal();

 private:
  std::mt19937_64 engine_;
};

// Stable 64-bit FNV-1a; used to turn identifiers into substream ids.
std::uint64_t stable_hash(std::string_view text);

}  // namespace lcm
