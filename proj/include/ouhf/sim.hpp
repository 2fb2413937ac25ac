#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "ouhf/model.hpp"

namespace ouhf {

enum class GridKind { Equidistant, Poisson };

struct SamplingGrid {
    std::vector<double> times;
    GridKind kind = GridKind::Equidistant;
    /// n for equidistant grids (n + 1 points, spacing 1/n); expected count for Poisson grids.
    std::size_t parameter = 0;
};

/// Times i/n, i = 0..n.
[[nodiscard]] SamplingGrid equidistant_grid(std::size_t n);

/// Event times of a homogeneous Poisson process with rate `expected_count` on [0, 1].
/// Draws with fewer than two events are rejected and redrawn from the next stream.
[[nodiscard]] SamplingGrid sample_poisson_grid(std::size_t expected_count, std::uint64_t seed,
                                               std::uint64_t path = 0);

struct StationaryStart {};
struct FixedStart {
    double p0 = 0.0;  // latent value at time 0
};
using InitialCondition = std::variant<StationaryStart, FixedStart>;

struct SimConfig {
    NoisyOuParams params;
    SamplingGrid grid;
    std::uint64_t seed = 0;
    std::uint64_t path = 0;
    InitialCondition init = StationaryStart{};
};

struct SimPath {
    TickSeries latent;
    TickSeries observed;
};

/// Exact simulation: the latent path follows the closed-form Gaussian transition
/// between grid times, observations add i.i.d. N(0, omega2) noise.
[[nodiscard]] SimPath simulate(const SimConfig& cfg);

}  // namespace ouhf
