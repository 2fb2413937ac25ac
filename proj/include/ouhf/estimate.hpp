#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ouhf/model.hpp"
#include "ouhf/simplex.hpp"

namespace ouhf {

enum class Method { Mom, MomNr, ArCss, ArmaNrCss, Mle, MleNr, Rv };

/// CLI spelling: mom, mom-nr, ar, arma-nr, mle, mle-nr, rv.
[[nodiscard]] std::string_view to_string(Method m) noexcept;
[[nodiscard]] Method parse_method(std::string_view name);
[[nodiscard]] bool is_noise_robust(Method m) noexcept;

struct FitDiagnostics {
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    /// Final simplex diameter for optimizer-based fits, 0 for closed forms.
    double final_tolerance = 0.0;
    /// Set when a negative (or vanishing) noise variance estimate was replaced by 0.
    bool omega2_clamped = false;
    std::string note;
};

struct OuFit {
    NoisyOuParams params;
    std::optional<double> loglik;
    Method method = Method::Mom;
    std::size_t n_used = 0;
    bool converged = true;
    FitDiagnostics diagnostics;
};

/// Sample moments with divisors n+1, n, n-1, n-2, where n = number of intervals (size - 1).
struct SampleMoments {
    double m1 = 0.0;  // mean
    double m2 = 0.0;  // variance
    double m3 = 0.0;  // lag-1 autocovariance
    double m4 = 0.0;  // lag-2 autocovariance
    std::size_t n = 0;
};

[[nodiscard]] SampleMoments sample_moments(std::span<const double> x);

/// Common spacing of an equidistant series; throws InvalidArgument when any gap
/// deviates from the mean spacing by more than 1e-9 relative.
[[nodiscard]] double equidistant_spacing(const TickSeries& ts);

// Method of moments ----------------------------------------------------------

[[nodiscard]] OuFit mom_from_moments(const SampleMoments& m, double dt);
[[nodiscard]] OuFit mom_fit(const TickSeries& ts);
[[nodiscard]] OuFit mom_nr_from_moments(const SampleMoments& m, double dt);
[[nodiscard]] OuFit mom_nr_fit(const TickSeries& ts);

struct MomBias {
    double tau_x = 0.0;
    double sigma2_x = 0.0;
};

/// Population limit of the noise-sensitive moment estimator applied to n + 1
/// equidistant noisy observations on [0, 1].
[[nodiscard]] MomBias predict_mom_bias(const NoisyOuParams& p, std::size_t n);

// ARMA reparametrization -----------------------------------------------------

/// X_i = alpha + phi X_{i-1} + theta V_{i-1} + V_i,  V_i ~ N(0, gamma2).
struct ArmaParams {
    double alpha = 0.0;
    double phi = 0.0;
    double theta = 0.0;
    double gamma2 = 0.0;
};

/// Unclamped OU values implied by ARMA(1,1) coefficients; omega2 may be negative.
struct RawOuEstimate {
    double mu = 0.0;
    double tau = 0.0;
    double sigma2 = 0.0;
    double omega2 = 0.0;
};

/// Exact ARMA(1,1) representation of the noisy OU sampled every dt (theta in (-1, 0]).
[[nodiscard]] ArmaParams ou_to_arma(const NoisyOuParams& p, double dt);
/// Inverse of ou_to_arma. Throws BackTransformDomain unless 0 < phi < 1.
[[nodiscard]] RawOuEstimate arma_to_ou(const ArmaParams& a, double dt);

/// Conditional-sum-of-squares AR(1) fit (theta = 0).
[[nodiscard]] ArmaParams ar1_css(std::span<const double> x);
/// Conditional-sum-of-squares ARMA(1,1) fit with the pre-sample residual set to zero.
[[nodiscard]] ArmaParams arma11_css(std::span<const double> x);

[[nodiscard]] OuFit ar_css_fit(const TickSeries& ts);
[[nodiscard]] OuFit arma_nr_css_fit(const TickSeries& ts);

// Maximum likelihood ---------------------------------------------------------

/// Pairwise log-likelihood sum_i log f(x_i | x_{i-1}) with exact OU transitions.
[[nodiscard]] double ou_loglik(const TickSeries& ts, const OuParams& p);
/// Same with the noisy conditional density; omega2 = 0 reduces to ou_loglik.
[[nodiscard]] double noisy_ou_loglik(const TickSeries& ts, const NoisyOuParams& p);
/// Per-observation terms log f(x_i | x_{i-1}) for i = 1..n (size n).
[[nodiscard]] std::vector<double> per_observation_loglik(const TickSeries& ts, const NoisyOuParams& p);

/// Values sampled at k/intervals, k = 0..intervals, using the last observation at
/// or before each boundary (the first observation before the first tick).
[[nodiscard]] TickSeries aggregate_previous_tick(const TickSeries& ts, std::size_t intervals = 390);

/// Starting point for likelihood fits: noise-robust moments on the one-minute
/// previous-tick series, falling back to fixed defaults when moments degenerate.
[[nodiscard]] NoisyOuParams auto_initial(const TickSeries& ts);

struct MleOptions {
    bool robust = true;
    std::optional<NoisyOuParams> init;
    SimplexOptions simplex{};
};

[[nodiscard]] OuFit mle_fit(const TickSeries& ts, const MleOptions& opts);
[[nodiscard]] OuFit mle_fit(const TickSeries& ts, bool robust, const std::optional<NoisyOuParams>& init = {});

// Realized variance ------------------------------------------------------------

[[nodiscard]] double realized_variance(const TickSeries& ts);
/// (rv - rm) / (2 n), clamped at 0.
[[nodiscard]] double noise_var_from_rv(double rv, double rm, std::size_t n);
/// Realized variance reported as a fit: only mu (sample mean) and sigma2 are meaningful; tau is NaN.
[[nodiscard]] OuFit rv_fit(const TickSeries& ts);

/// Dispatch by method on an already-prepared series.
[[nodiscard]] OuFit fit(Method method, const TickSeries& ts);

}  // namespace ouhf
