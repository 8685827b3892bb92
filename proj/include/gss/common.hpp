#pragma once

#include <cstdint>
#include <string>

namespace gss {

inline constexpr const char* kVersion = "0.1.0";

// Cap on enumeration state-space sizes (oracle vectors, erasure patterns).
// Overridable per call; the CLI maps the GSS_BUDGET env var onto it.
inline constexpr std::uint64_t kDefaultBudget = 100'000'000;

// Master seed used when the caller does not pass one.
inline constexpr std::uint64_t kDefaultSeed = 0x5EEDC0DE;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Derives an independent stream seed; stable across platforms and runs.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(seed ^ splitmix64(stream + 0x1234567887654321ull));
}

// Uniform double in [0, 1) from a raw 64-bit draw (top 53 bits), so results
// do not depend on the standard library's distribution internals.
inline double unit_double(std::uint64_t raw) {
  return static_cast<double>(raw >> 11) * (1.0 / 9007199254740992.0);
}

inline std::string toolchain_string() {
#if defined(__clang__)
  return std::string("clang ") + std::to_string(__clang_major__) + "." +
         std::to_string(__clang_minor__);
#elif defined(__GNUC__)
  return std::string("gcc ") + std::to_string(__GNUC__) + "." +
         std::to_string(__GNUC_MINOR__);
#else
  return "unknown";
#endif
}

}  // namespace gss
