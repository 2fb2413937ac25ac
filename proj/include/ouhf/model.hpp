#pragma once

#include <span>
#include <vector>

namespace ouhf {

/// Latent Ornstein-Uhlenbeck process dP = tau (mu - P) dt + sigma dW.
///
/// Time is measured in trading days, so one session spans [0, 1] and both
/// `tau` and `sigma2` are per-day quantities.
struct OuParams {
    double mu = 0.0;
    double tau = 1.0;
    double sigma2 = 0.0;
};

/// OU process observed with additive i.i.d. N(0, omega2) noise.
struct NoisyOuParams {
    OuParams ou;
    double omega2 = 0.0;
};

struct GaussianMoments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Stationary moments together with the autocovariance at a given lag.
struct StationaryMoments {
    double mean = 0.0;
    double variance = 0.0;
    double autocov = 0.0;
};

/// Throws Error(InvalidArgument) unless tau > 0, sigma2 >= 0 and all fields are finite.
void validate(const OuParams& p);
void validate(const NoisyOuParams& p);

[[nodiscard]] bool is_valid(const OuParams& p) noexcept;
[[nodiscard]] bool is_valid(const NoisyOuParams& p) noexcept;

/// Strictly increasing observation times in [0, 1] paired with values.
class TickSeries {
public:
    TickSeries() = default;
    /// Validates: equal lengths, at least two points, strictly increasing times
    /// in [0, 1], finite values.
    TickSeries(std::vector<double> times, std::vector<double> values);

    [[nodiscard]] std::span<const double> times() const noexcept { return times_; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::size_t size() const noexcept { return times_.size(); }
    [[nodiscard]] double time(std::size_t i) const { return times_[i]; }
    [[nodiscard]] double value(std::size_t i) const { return values_[i]; }

    /// Same times, values mapped by v -> scale * v + shift.
    [[nodiscard]] TickSeries affine(double scale, double shift) const;
    /// Every k-th observation starting from the first.
    [[nodiscard]] TickSeries every_kth(std::size_t k) const;

    friend bool operator==(const TickSeries&, const TickSeries&) = default;

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

/// Mean mu, variance sigma2/(2 tau), autocovariance sigma2/(2 tau) exp(-tau lag).
[[nodiscard]] StationaryMoments unconditional_moments(const OuParams& p, double lag);

/// Moments of P_t given P_0 = p0. Requires t > 0.
[[nodiscard]] GaussianMoments conditional_moments(const OuParams& p, double p0, double t);

/// Stationary moments of the noisy observations. Noise enters the variance only;
/// the autocovariance at a positive lag is that of the latent process.
[[nodiscard]] StationaryMoments noisy_unconditional_moments(const NoisyOuParams& p, double lag);

/// Autocorrelation of the noisy observations at a positive lag.
[[nodiscard]] double noisy_autocorrelation(const NoisyOuParams& p, double lag);

/// Distribution of the latent value given one noisy observation x0 under the
/// stationary prior. Throws DegenerateInput when sigma2 = omega2 = 0.
[[nodiscard]] GaussianMoments posterior_initial(const NoisyOuParams& p, double x0);

/// Moments of X_i given X_{i-1} = x_prev, dt apart: the posterior of the latent
/// state at the previous time pushed through the OU transition, plus noise.
[[nodiscard]] GaussianMoments noisy_conditional_moments(const NoisyOuParams& p, double x_prev, double dt);

/// log N(x; m.mean, m.variance). Returns -inf for a zero variance unless x equals the mean.
[[nodiscard]] double normal_logpdf(double x, const GaussianMoments& m) noexcept;

}  // namespace ouhf
