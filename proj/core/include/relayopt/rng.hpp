#pragma once

#include <cstdint>
#include <random>

namespace relayopt {

/// splitmix64 finalizer; bijective mixing of a 64-bit word.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic per-task seed derivation: hash(base, lane, index).
/// Parallel and serial sweeps draw identical streams per task.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t lane, std::uint64_t index) {
    return splitmix64(splitmix64(base ^ splitmix64(lane)) ^ splitmix64(index + 0x517cc1b727220a95ull));
}

/// Uniform integer on [lo, hi] from the raw engine stream. Avoids
/// std::uniform_int_distribution, whose output differs across standard
/// library implementations; the modulo bias is negligible for the tiny
/// spans used here.
inline int uniform_int(std::mt19937_64& engine, int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
    return lo + static_cast<int>(engine() % span);
}

}  // namespace relayopt
