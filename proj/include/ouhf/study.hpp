#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ouhf/estimate.hpp"
#include "ouhf/model.hpp"

namespace ouhf {

/// Estimator labels of the simulation study: 1MIN-* fit the 390-interval previous-tick
/// series, TICK-* fit all observations.
[[nodiscard]] const std::vector<std::string>& study_methods();

/// Fits one labelled estimator to a tick series.
[[nodiscard]] OuFit fit_labelled(const std::string& label, const TickSeries& ticks);

struct StudyConfig {
    NoisyOuParams truth{{1.0, 10.0, 1e-4}, 1e-8};
    std::size_t expected_count = 23400;
    std::size_t reps = 50;
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    std::vector<std::string> methods = study_methods();
};

/// Mean absolute error of one parameter (mu, tau, sigma or omega) for one method.
struct MaeRow {
    std::string method;
    std::string param;
    double mae = 0.0;
    std::size_t reps_used = 0;
    std::size_t failures = 0;
};

/// Simulates Poisson-sampled noisy paths and reports MAEs; failed fits are excluded and counted.
[[nodiscard]] std::vector<MaeRow> run_simstudy(const StudyConfig& cfg);

struct BiasPoint {
    double omega2 = 0.0;
    std::size_t n = 0;
    double tau_x = 0.0;
    double sigma2_x = 0.0;
};

[[nodiscard]] std::vector<BiasPoint> bias_curve(const OuParams& p, const std::vector<double>& omega2s,
                                                const std::vector<std::size_t>& ns);

struct SignaturePoint {
    std::size_t k = 0;
    std::size_t n = 0;
    double sigma2_mle = 0.0;
    double sigma2_mle_nr = 0.0;
    double rv = 0.0;
};

/// sigma2 estimated from every k-th observation, k = 1..max_k.
[[nodiscard]] std::vector<SignaturePoint> volatility_signature(const TickSeries& ts, std::size_t max_k,
                                                               std::size_t threads = 1);

}  // namespace ouhf
