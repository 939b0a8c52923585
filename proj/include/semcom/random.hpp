#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace semcom {

using Rng = std::mt19937_64;

/// Derives an independent seed for a named random stream from a root seed.
/// Streams used by the library: "environment", "init", "sampling",
/// "baseline", "embedding", "attention".
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream);

/// Same as derive_seed but further split by an integer index (round, token id, ...).
std::uint64_t derive_seed(std::uint64_t root, std::string_view stream, std::uint64_t index);

inline Rng make_rng(std::uint64_t root, std::string_view stream) {
  return Rng(derive_seed(root, stream));
}

}  // namespace semcom
