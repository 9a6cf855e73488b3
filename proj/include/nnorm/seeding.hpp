#pragma once

// Counter-based seed splitting. Every random draw in the toolkit comes from an
// engine seeded by (root seed, stream, index), so per-sample work can run in
// any order and still reproduce bit for bit.

#include <cstdint>
#include <random>

namespace nnorm {

inline constexpr std::uint64_t kDefaultSeed = 42;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream,
                                    std::uint64_t index = 0) noexcept {
  return splitmix64(splitmix64(seed ^ splitmix64(stream)) + index);
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
  return Rng(derive_seed(seed, stream, index));
}

/// Stream identifiers keep unrelated consumers of one root seed apart.
namespace streams {
inline constexpr std::uint64_t kNormSampling = 1;
inline constexpr std::uint64_t kNormRefine = 2;
inline constexpr std::uint64_t kEpsDelta = 3;
inline constexpr std::uint64_t kAlphaLo = 4;
inline constexpr std::uint64_t kAlphaHi = 5;
inline constexpr std::uint64_t kExtensionCheck = 6;
inline constexpr std::uint64_t kDistance = 7;
inline constexpr std::uint64_t kDualPool = 8;
inline constexpr std::uint64_t kLimitCheck = 9;
inline constexpr std::uint64_t kFixtures = 10;
inline constexpr std::uint64_t kRestriction = 11;
inline constexpr std::uint64_t kSphereFormula = 12;
inline constexpr std::uint64_t kBallFormula = 13;
inline constexpr std::uint64_t kFamilyMember = 14;
inline constexpr std::uint64_t kExtensionChain = 15;
}  // namespace streams

}  // namespace nnorm
