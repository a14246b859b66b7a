#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ttinherit {

/// Every random stream in the library. mt19937_64 output is fixed by the
/// standard; distributions come from Boost.Random so that seeded draws are
/// identical across standard library implementations.
using Rng = std::mt19937_64;

/// What a derived stream is used for; part of the seed derivation key.
enum class StreamPurpose : std::uint32_t {
  tensor = 1,
  row_sample = 2,
  column_sample = 3,
  regeneration = 4,
  test = 99,
};

/// Deterministic child seed f(master, purpose, key...). Distinct keys give
/// statistically independent streams; the mapping is std::seed_seq, whose
/// algorithm is fixed by the standard.
std::uint64_t derive_seed(std::uint64_t master, StreamPurpose purpose,
                          std::initializer_list<std::uint64_t> key);

inline Rng make_rng(std::uint64_t seed) { return Rng{seed}; }

} // namespace ttinherit
