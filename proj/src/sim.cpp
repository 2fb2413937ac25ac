#include "ouhf/sim.hpp"

#include <cmath>
#include <random>

#include "ouhf/error.hpp"
#include "ouhf/rng.hpp"

namespace ouhf {

SamplingGrid equidistant_grid(std::size_t n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "equidistant grid needs n >= 1");
    SamplingGrid g;
    g.kind = GridKind::Equidistant;
    g.parameter = n;
    g.times.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) g.times[i] = static_cast<double>(i) / static_cast<double>(n);
    return g;
}

SamplingGrid sample_poisson_grid(std::size_t expected_count, std::uint64_t seed, std::uint64_t path) {
    if (expected_count < 2) throw Error(ErrorKind::InvalidArgument, "Poisson grid needs expected_count >= 2");
    const double rate = static_cast<double>(expected_count);
    SamplingGrid g;
    g.kind = GridKind::Poisson;
    g.parameter = expected_count;
    for (std::uint64_t attempt = 0;; ++attempt) {
        Engine eng = make_engine(seed, path, StreamTag::Grid, attempt);
        std::exponential_distribution<double> gap(rate);
        g.times.clear();
        g.times.reserve(expected_count + 6 * static_cast<std::size_t>(std::sqrt(rate)) + 16);
        double t = gap(eng);
        while (t <= 1.0) {
            // Exponential gaps can underflow to zero in principle; keep times strictly increasing.
            if (g.times.empty() || t > g.times.back()) g.times.push_back(t);
            t += gap(eng);
        }
        if (g.times.size() >= 2) return g;
    }
}

SimPath simulate(const SimConfig& cfg) {
    validate(cfg.params);
    const auto& times = cfg.grid.times;
    if (times.size() < 2) throw Error(ErrorKind::InvalidArgument, "simulation grid needs at least two times");
    const OuParams& ou = cfg.params.ou;

    Engine latent_eng = make_engine(cfg.seed, cfg.path, StreamTag::Latent);
    Engine noise_eng = make_engine(cfg.seed, cfg.path, StreamTag::Noise);
    std::normal_distribution<double> z(0.0, 1.0);

    std::vector<double> latent(times.size());
    double p = 0.0;
    if (std::holds_alternative<StationaryStart>(cfg.init)) {
        p = ou.mu + std::sqrt(ou.sigma2 / (2.0 * ou.tau)) * z(latent_eng);
    } else {
        p = std::get<FixedStart>(cfg.init).p0;
        if (times.front() > 0.0) {
            const GaussianMoments m = conditional_moments(ou, p, times.front());
            p = m.mean + std::sqrt(m.variance) * z(latent_eng);
        }
    }
    latent[0] = p;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const GaussianMoments m = conditional_moments(ou, latent[i - 1], times[i] - times[i - 1]);
        latent[i] = m.mean + std::sqrt(m.variance) * z(latent_eng);
    }

    std::vector<double> observed(latent);
    if (cfg.params.omega2 > 0.0) {
        const double sd = std::sqrt(cfg.params.omega2);
        for (double& x : observed) x += sd * z(noise_eng);
    }
    return {TickSeries(times, std::move(latent)), TickSeries(times, std::move(observed))};
}

}  // namespace ouhf
