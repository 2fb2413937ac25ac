#include <algorithm>
#include <cmath>
#include <limits>

#include "ouhf/error.hpp"
#include "ouhf/estimate.hpp"
#include "standardize.hpp"

namespace ouhf {
namespace {

constexpr double kLogTwoPi = 1.8378770664093454835606594728112;
constexpr double kLogLower = -50.0;
constexpr double kLogTauUpper = 20.0;
constexpr double kOmegaZero = 1e-18;

// log f(x_i | x_{i-1}) under the noisy model, written with expm1 so that tiny
// tau * dt keeps full precision. Returns -inf when the variance vanishes.
template <class Sink>
void transition_terms(std::span<const double> t, std::span<const double> x, double mu, double tau, double sigma2,
                      double omega2, Sink&& sink) {
    const double denom = sigma2 + 2.0 * tau * omega2;
    const double w = denom > 0.0 ? sigma2 / denom : 0.0;
    const double post_var = denom > 0.0 ? sigma2 * omega2 / denom : 0.0;
    const double stat_var = sigma2 / (2.0 * tau);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double em = std::expm1(-tau * (t[i] - t[i - 1]));
        const double d = 1.0 + em;
        const double mean = mu + w * (x[i - 1] - mu) * d;
        const double var = post_var * d * d - stat_var * em * (2.0 + em) + omega2;
        const double r = x[i] - mean;
        sink(var > 0.0 ? -0.5 * (kLogTwoPi + std::log(var) + r * r / var) : -std::numeric_limits<double>::infinity());
    }
}

double total_loglik(std::span<const double> t, std::span<const double> x, double mu, double tau, double sigma2,
                    double omega2) {
    double sum = 0.0;
    transition_terms(t, x, mu, tau, sigma2, omega2, [&](double v) { sum += v; });
    return sum;
}

}  // namespace

double noisy_ou_loglik(const TickSeries& ts, const NoisyOuParams& p) {
    validate(p);
    return total_loglik(ts.times(), ts.values(), p.ou.mu, p.ou.tau, p.ou.sigma2, p.omega2);
}

double ou_loglik(const TickSeries& ts, const OuParams& p) { return noisy_ou_loglik(ts, {p, 0.0}); }

std::vector<double> per_observation_loglik(const TickSeries& ts, const NoisyOuParams& p) {
    validate(p);
    std::vector<double> out;
    out.reserve(ts.size() - 1);
    transition_terms(ts.times(), ts.values(), p.ou.mu, p.ou.tau, p.ou.sigma2, p.omega2,
                     [&](double v) { out.push_back(v); });
    return out;
}

TickSeries aggregate_previous_tick(const TickSeries& ts, std::size_t intervals) {
    if (intervals < 1) throw Error(ErrorKind::InvalidArgument, "aggregation needs at least one interval");
    const auto t = ts.times();
    const auto v = ts.values();
    std::vector<double> times(intervals + 1), values(intervals + 1);
    std::size_t j = 0;
    for (std::size_t k = 0; k <= intervals; ++k) {
        const double boundary = static_cast<double>(k) / static_cast<double>(intervals);
        while (j + 1 < t.size() && t[j + 1] <= boundary) ++j;
        times[k] = boundary;
        values[k] = v[j];
    }
    return TickSeries(std::move(times), std::move(values));
}

NoisyOuParams auto_initial(const TickSeries& ts) {
    const auto v = ts.values();
    const SampleMoments tick = sample_moments(v);
    if (!(tick.m2 > 0.0)) throw Error(ErrorKind::DegenerateInput, "all observations are equal");
    try {
        const TickSeries minute = aggregate_previous_tick(ts, 390);
        OuFit f = mom_nr_fit(minute);
        NoisyOuParams p = f.params;
        if (std::isfinite(p.ou.tau) && p.ou.tau > 0.0 && p.ou.sigma2 > 0.0) {
            p.omega2 = std::max(p.omega2, 1e-4 * tick.m2);
            return p;
        }
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::MomentDegenerate && e.kind() != ErrorKind::DegenerateInput) throw;
    }
    constexpr double tau0 = 5.0;
    return {{tick.m1, tau0, 2.0 * tau0 * tick.m2}, 1e-4 * tick.m2};
}

OuFit mle_fit(const TickSeries& ts, const MleOptions& opts) {
    if (ts.size() < 11) throw Error(ErrorKind::InsufficientData, "likelihood fit needs at least ten intervals");
    const auto t = ts.times();
    const detail::Standardized s = detail::standardize(ts.values());
    const double s2 = s.scale * s.scale;
    NoisyOuParams init;
    if (opts.init) {
        validate(*opts.init);
        init = {{(opts.init->ou.mu - s.center) / s.scale, opts.init->ou.tau, opts.init->ou.sigma2 / s2},
                opts.init->omega2 / s2};
    } else {
        init = auto_initial(TickSeries(std::vector<double>(t.begin(), t.end()), s.z));
    }

    const bool robust = opts.robust;
    const auto clamp_log = [](double y, double hi, double& penalty) {
        if (y < kLogLower) {
            penalty += (kLogLower - y) * (kLogLower - y);
            return kLogLower;
        }
        if (y > hi) {
            penalty += (y - hi) * (y - hi);
            return hi;
        }
        return y;
    };
    const Objective objective = [&](std::span<const double> y) {
        double penalty = 0.0;
        const double tau = std::exp(clamp_log(y[1], kLogTauUpper, penalty));
        const double sigma2 = std::exp(clamp_log(y[2], -kLogLower, penalty));
        const double omega2 = robust ? std::exp(clamp_log(y[3], -kLogLower, penalty)) : 0.0;
        const double ll = total_loglik(t, s.z, y[0], tau, sigma2, omega2);
        return -ll + 1e3 * penalty;
    };

    const auto safe_log = [](double v) { return std::log(std::max(v, std::exp(kLogLower))); };
    std::vector<double> x0{init.ou.mu, std::min(std::log(init.ou.tau), kLogTauUpper - 1.0), safe_log(init.ou.sigma2)};
    if (robust) x0.push_back(safe_log(std::max(init.omega2, 1e-6)));

    SimplexOptions so = opts.simplex;
    if (so.initial_step.empty()) {
        so.initial_step.assign(x0.size(), 0.5);
        so.initial_step[0] = 0.1;
    }
    const double mu_start = x0[0];
    // The likelihood has a second basin near tau = 0, where mu is unidentified. Each
    // round restarts the simplex from the best (mu, tau) of a coarse scan around the
    // current point and stops once a round brings no improvement.
    const auto rescan = [&](std::vector<double> x) {
        double best = objective(x);
        std::vector<double> arg = x;
        for (double mu : {x[0], mu_start}) {
            for (int k = -2; k <= 8; ++k) {
                std::vector<double> trial = x;
                trial[0] = mu;
                trial[1] = std::log(10.0) * 0.5 * k;
                const double v = objective(trial);
                if (v < best) {
                    best = v;
                    arg = trial;
                }
            }
        }
        return arg;
    };
    const auto descend = [&](const std::vector<double>& start) {
        SimplexResult r = nelder_mead(objective, start, so);
        if (r.converged) {
            // Polish from a fresh simplex; Nelder-Mead can stall on a collapsed simplex.
            SimplexOptions polish = so;
            for (double& h : polish.initial_step) h *= 0.1;
            SimplexResult again = nelder_mead(objective, r.x, polish);
            again.iterations += r.iterations;
            again.evaluations += r.evaluations;
            if (again.value <= r.value) r = std::move(again);
            else {
                r.iterations = again.iterations;
                r.evaluations = again.evaluations;
            }
        }
        return r;
    };

    SimplexResult r = descend(rescan(x0));
    for (int round = 0; round < 3; ++round) {
        const std::vector<double> start = rescan(r.x);
        if (start == r.x) break;
        SimplexResult next = descend(start);
        next.iterations += r.iterations;
        next.evaluations += r.evaluations;
        if (!(next.value < r.value - 1e-9 * std::abs(r.value))) {
            r.iterations = next.iterations;
            r.evaluations = next.evaluations;
            break;
        }
        r = std::move(next);
    }

    OuFit f;
    f.method = robust ? Method::MleNr : Method::Mle;
    f.n_used = ts.size();
    f.converged = r.converged;
    f.diagnostics.iterations = r.iterations;
    f.diagnostics.evaluations = r.evaluations;
    f.diagnostics.final_tolerance = r.diameter;
    const double log_n_scale = static_cast<double>(ts.size() - 1) * std::log(s.scale);
    f.params.ou.mu = s.center + s.scale * r.x[0];
    f.params.ou.tau = std::exp(std::clamp(r.x[1], kLogLower, kLogTauUpper));
    f.params.ou.sigma2 = s2 * std::exp(std::clamp(r.x[2], kLogLower, -kLogLower));
    if (robust) {
        const double omega2 = s2 * std::exp(std::clamp(r.x[3], kLogLower, -kLogLower));
        if (omega2 < kOmegaZero) {
            f.params.omega2 = 0.0;
            f.diagnostics.omega2_clamped = true;
            f.diagnostics.note = "noise variance at the lower boundary, reported as 0";
        } else {
            f.params.omega2 = omega2;
        }
    }
    f.loglik = -r.value - log_n_scale;
    if (!r.converged) {
        f.diagnostics.note += f.diagnostics.note.empty() ? "" : "; ";
        f.diagnostics.note += "simplex did not reach the diameter tolerance";
    }
    return f;
}

OuFit mle_fit(const TickSeries& ts, bool robust, const std::optional<NoisyOuParams>& init) {
    MleOptions o;
    o.robust = robust;
    o.init = init;
    return mle_fit(ts, o);
}

}  // namespace ouhf
