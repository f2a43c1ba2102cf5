#pragma once

#include <cstdint>
#include <random>

namespace phononkin {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates nearby integer seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Independent stream for work unit `index` of a run seeded with `base_seed`.
Rng make_stream(std::uint64_t base_seed, std::uint64_t index);

}  // namespace phononkin
