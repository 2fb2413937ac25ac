#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "ouhf/model.hpp"

namespace ouhf {

inline constexpr std::size_t kHarLags = 22;
inline constexpr std::size_t kDefaultWindow = 132;

/// Daily parameter estimates in chronological order; open_value is the first
/// observed spread value of each day.
struct DailyParamHistory {
    std::vector<std::int64_t> days;
    std::vector<double> mu;
    std::vector<double> tau;
    std::vector<double> sigma2;
    std::vector<double> open_value;

    [[nodiscard]] std::size_t size() const noexcept { return days.size(); }
    void push_back(std::int64_t day, const OuParams& p, double open);
    /// Rows [first, first + count).
    [[nodiscard]] DailyParamHistory slice(std::size_t first, std::size_t count) const;
};

/// Throws InvalidHistory on misaligned columns, non-increasing days, tau <= 0 or sigma2 <= 0.
void validate(const DailyParamHistory& h);

struct ForecastModels {
    /// mu_i = a + b mu_{i-1} + c X0_i
    std::array<double, 3> mu_coef{};
    double tau_mean = 0.0;
    /// ln sigma2_i = a + b ln sigma2_{i-1} + c mean_5 + d mean_22
    std::array<double, 4> har_coef{};
    std::size_t window = kDefaultWindow;

    std::array<double, 3> mu_se{};
    std::array<double, 4> har_se{};
    double r2_mu = 0.0;
    double r2_tau = 0.0;
    double r2_sigma = 0.0;
    std::size_t mu_rows = 0;
    std::size_t har_rows = 0;
    /// Rank-deficient design; the minimum-norm least-squares solution is used.
    bool mu_collinear = false;
    bool har_collinear = false;
};

struct FitModelOptions {
    /// Throw Collinearity instead of falling back to the minimum-norm solution.
    bool strict = false;
};

/// Fits the three models on the last `window` days of `hist`. The HAR regression
/// uses as many of those days as have 22 preceding days available.
[[nodiscard]] ForecastModels fit_models(const DailyParamHistory& hist, std::size_t window = kDefaultWindow,
                                        const FitModelOptions& opts = {});

/// One-step-ahead parameters for the day after the last row of `hist`, whose
/// opening value is `next_open`. Needs at least 22 rows.
[[nodiscard]] OuParams forecast_day(const ForecastModels& models, const DailyParamHistory& hist, double next_open);

struct ForecastEvaluation {
    double med_r2_mu = 0.0;
    double med_r2_sigma = 0.0;
    double med_ae_mu = 0.0;
    double med_ae_tau = 0.0;
    double med_ae_sigma2 = 0.0;
    std::size_t forecasts = 0;
};

/// Rolling-origin one-step-ahead evaluation; each fit sees window + 22 preceding days.
[[nodiscard]] ForecastEvaluation evaluate_forecasts(const DailyParamHistory& hist, std::size_t window = kDefaultWindow);

}  // namespace ouhf
