#include "ouhf/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ouhf/error.hpp"

namespace ouhf {

bool is_valid(const OuParams& p) noexcept {
    return std::isfinite(p.mu) && std::isfinite(p.tau) && std::isfinite(p.sigma2) && p.tau > 0.0 &&
           p.sigma2 >= 0.0;
}

bool is_valid(const NoisyOuParams& p) noexcept {
    return is_valid(p.ou) && std::isfinite(p.omega2) && p.omega2 >= 0.0;
}

void validate(const OuParams& p) {
    if (!is_valid(p)) {
        throw Error(ErrorKind::InvalidArgument,
                    "OU parameters require finite mu, tau > 0, sigma2 >= 0 (got mu=" + std::to_string(p.mu) +
                        ", tau=" + std::to_string(p.tau) + ", sigma2=" + std::to_string(p.sigma2) + ")");
    }
}

void validate(const NoisyOuParams& p) {
    validate(p.ou);
    if (!std::isfinite(p.omega2) || p.omega2 < 0.0) {
        throw Error(ErrorKind::InvalidArgument, "noise variance must be finite and >= 0");
    }
}

TickSeries::TickSeries(std::vector<double> times, std::vector<double> values)
    : times_(std::move(times)), values_(std::move(values)) {
    if (times_.size() != values_.size()) {
        throw Error(ErrorKind::InvalidArgument, "tick series: times and values differ in length");
    }
    if (times_.size() < 2) {
        throw Error(ErrorKind::InsufficientData, "tick series needs at least two observations");
    }
    for (std::size_t i = 0; i < times_.size(); ++i) {
        if (!(times_[i] >= 0.0 && times_[i] <= 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "tick series: time outside [0, 1] at index " + std::to_string(i));
        }
        if (i > 0 && !(times_[i] > times_[i - 1])) {
            throw Error(ErrorKind::InvalidArgument,
                        "tick series: times not strictly increasing at index " + std::to_string(i));
        }
        if (!std::isfinite(values_[i])) {
            throw Error(ErrorKind::InvalidArgument, "tick series: non-finite value at index " + std::to_string(i));
        }
    }
}

TickSeries TickSeries::affine(double scale, double shift) const {
    std::vector<double> v(values_.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = scale * values_[i] + shift;
    return {times_, std::move(v)};
}

TickSeries TickSeries::every_kth(std::size_t k) const {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "every_kth: k must be positive");
    std::vector<double> t;
    std::vector<double> v;
    for (std::size_t i = 0; i < times_.size(); i += k) {
        t.push_back(times_[i]);
        v.push_back(values_[i]);
    }
    return {std::move(t), std::move(v)};
}

StationaryMoments unconditional_moments(const OuParams& p, double lag) {
    validate(p);
    if (!(lag >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lag must be >= 0");
    const double var = p.sigma2 / (2.0 * p.tau);
    return {p.mu, var, var * std::exp(-p.tau * lag)};
}

GaussianMoments conditional_moments(const OuParams& p, double p0, double t) {
    validate(p);
    if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "conditional_moments requires t > 0");
    const double decay = std::exp(-p.tau * t);
    const double mean = p0 * decay + p.mu * (1.0 - decay);
    const double variance = p.sigma2 / (2.0 * p.tau) * -std::expm1(-2.0 * p.tau * t);
    return {mean, variance};
}

StationaryMoments noisy_unconditional_moments(const NoisyOuParams& p, double lag) {
    validate(p);
    if (!(lag >= 0.0)) throw Error(ErrorKind::InvalidArgument, "lag must be >= 0");
    const double latent = p.ou.sigma2 / (2.0 * p.ou.tau);
    const double variance = latent + p.omega2;
    const double autocov = lag > 0.0 ? latent * std::exp(-p.ou.tau * lag) : variance;
    return {p.ou.mu, variance, autocov};
}

double noisy_autocorrelation(const NoisyOuParams& p, double lag) {
    validate(p);
    if (!(lag > 0.0)) throw Error(ErrorKind::InvalidArgument, "autocorrelation lag must be > 0");
    const double denom = p.ou.sigma2 + 2.0 * p.ou.tau * p.omega2;
    if (denom <= 0.0) throw Error(ErrorKind::DegenerateInput, "sigma2 and omega2 are both zero");
    return std::exp(-p.ou.tau * lag) * p.ou.sigma2 / denom;
}

GaussianMoments posterior_initial(const NoisyOuParams& p, double x0) {
    validate(p);
    if (p.omega2 == 0.0) {
        if (p.ou.sigma2 == 0.0) throw Error(ErrorKind::DegenerateInput, "sigma2 and omega2 are both zero");
        return {x0, 0.0};
    }
    const double s2 = p.ou.sigma2;
    const double noise_term = 2.0 * p.ou.tau * p.omega2;
    const double denom = s2 + noise_term;
    const double mean = (x0 * s2 + p.ou.mu * noise_term) / denom;
    const double variance = s2 * p.omega2 / denom;
    return {mean, variance};
}

GaussianMoments noisy_conditional_moments(const NoisyOuParams& p, double x_prev, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "noisy_conditional_moments requires dt > 0");
    const GaussianMoments start = posterior_initial(p, x_prev);
    const double decay = std::exp(-p.ou.tau * dt);
    const double mean = start.mean * decay + p.ou.mu * (1.0 - decay);
    const double variance = start.variance * decay * decay +
                            p.ou.sigma2 / (2.0 * p.ou.tau) * -std::expm1(-2.0 * p.ou.tau * dt) + p.omega2;
    return {mean, variance};
}

double normal_logpdf(double x, const GaussianMoments& m) noexcept {
    const double r = x - m.mean;
    if (m.variance <= 0.0) {
        return r == 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
    }
    constexpr double log_two_pi = 1.8378770664093454835606594728112;
    return -0.5 * (log_two_pi + std::log(m.variance) + r * r / m.variance);
}

}  // namespace ouhf
