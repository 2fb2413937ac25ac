#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ouhf {

/// Purpose tags that separate independent random streams of one path.
enum class StreamTag : std::uint64_t {
    Grid = 1,
    Latent = 2,
    Noise = 3,
    Jumps = 4,
    Aux = 5,
};

/// Identifies the generator and the stream-derivation scheme below. Written into
/// output metadata; bump the suffix whenever derivation changes.
inline constexpr std::string_view kRngId = "mt19937_64+splitmix64-stream-v1";

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Stream seed v1: splitmix64 chained over (seed, path index, tag, attempt).
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t path, StreamTag tag,
                                    std::uint64_t attempt = 0) noexcept {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ path);
    h = splitmix64(h ^ static_cast<std::uint64_t>(tag));
    return splitmix64(h ^ attempt);
}

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed, std::uint64_t path, StreamTag tag, std::uint64_t attempt = 0) {
    return Engine(stream_seed(seed, path, tag, attempt));
}

}  // namespace ouhf
