#pragma once

#include <cmath>
#include <cstdint>

// Counter-based random streams. Every draw is a pure function of
// (seed, stream code, counter), so streams can be generated lazily, in any
// order, and in parallel, and extending a time or space window never
// reshuffles draws that were already defined.
namespace tlcp::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

// Salts separating independent families of draws derived from one user seed.
inline constexpr std::uint64_t kSaltNegativeTime = 0x6a09e667f3bcc909ULL;
inline constexpr std::uint64_t kSaltThinMu = 0xbb67ae8584caa73bULL;
inline constexpr std::uint64_t kSaltThinLambda = 0x3c6ef372fe94f82bULL;
inline constexpr std::uint64_t kSaltReplicate = 0xa54ff53a5f1d36f1ULL;
inline constexpr std::uint64_t kSaltPercolation = 0x510e527fade682d1ULL;

// splitmix64 finalizer (Stafford mix13 constants).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ULL;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t draw(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter) {
  std::uint64_t h = mix64(seed + kGolden * (stream + 1));
  h = mix64(h + kGolden * (counter + 1));
  return mix64(h ^ 0xd1b54a32d192ed03ULL);
}

// Uniform in the open interval (0, 1); never returns 0 or 1, so logs stay
// finite. 52 random bits keep the +0.5 offset exactly representable.
inline double u01(std::uint64_t bits) {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

inline double uniform(std::uint64_t seed, std::uint64_t stream,
                      std::uint64_t counter) {
  return u01(draw(seed, stream, counter));
}

inline double exponential(std::uint64_t seed, std::uint64_t stream,
                          std::uint64_t counter, double rate) {
  return -std::log(u01(draw(seed, stream, counter))) / rate;
}

// Per-replicate sub-seed for Monte Carlo drivers.
inline std::uint64_t replicate_seed(std::uint64_t base, std::uint64_t index) {
  return draw(base, kSaltReplicate, index);
}

}  // namespace tlcp::rng
