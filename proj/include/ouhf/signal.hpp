#pragma once

#include <limits>
#include <vector>

#include "ouhf/fpt.hpp"
#include "ouhf/model.hpp"

namespace ouhf {

/// Entry level a, exit level b and round-trip cost c in log-spread units.
struct SignalPolicy {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// Expected profit per unit time and its variance per unit time.
struct StrategyMoments {
    double z_m = 0.0;
    double z_v = 0.0;
};

struct DimensionlessProblem {
    DimensionlessLevels levels;
    double c_t = 0.0;
    double eta_t = std::numeric_limits<double>::infinity();
};

/// Requires sigma2 > 0 (DegenerateInput otherwise). eta may be +inf.
[[nodiscard]] DimensionlessProblem to_dimensionless(const OuParams& p, const SignalPolicy& policy, double eta);

struct OriginalProblem {
    SignalPolicy policy;
    double eta = std::numeric_limits<double>::infinity();
};

[[nodiscard]] OriginalProblem from_dimensionless(const OuParams& p, const DimensionlessProblem& d);

/// Z_M = sqrt(tau sigma2 / 2) Z~_M,  Z_V = sigma2 / 2 Z~_V.
[[nodiscard]] StrategyMoments moments_to_original(const OuParams& p, const StrategyMoments& dimensionless);

/// Renewal-theory moments of the two-sided strategy in dimensionless units.
/// Throws UndefinedMoments when the levels coincide.
[[nodiscard]] StrategyMoments strategy_moments(const DimensionlessLevels& levels, double c_t);

struct OptResult {
    DimensionlessLevels levels;
    double c_t = 0.0;
    double eta_t = std::numeric_limits<double>::infinity();
    double z_m_star = 0.0;
    double z_v_at_opt = 0.0;
    /// Variance constraint active at the optimum.
    bool binding = false;
    /// False for the no-trade sentinel (no feasible policy with positive expected profit).
    bool trade = false;
};

/// Maximizes Z~_M subject to Z~_V <= eta_t, b~ <= a~, a~ >= 0, inside the series domain.
[[nodiscard]] OptResult optimize_signals(double c_t, double eta_t = std::numeric_limits<double>::infinity());

struct OptimalPolicy {
    OptResult dimensionless;
    SignalPolicy policy;
    StrategyMoments moments;
};

/// Transform, optimize and map the optimum back to original units.
[[nodiscard]] OptimalPolicy optimal_policy(const OuParams& p, double c, double eta);

/// Original-unit moments of a given policy under parameters p.
[[nodiscard]] StrategyMoments evaluate_policy(const OuParams& p, const SignalPolicy& policy);

struct BiasImpact {
    double claimed_z_m = 0.0;
    double actual_z_m = 0.0;
    double actual_z_v = 0.0;
    SignalPolicy policy;
};

/// Optimizes under biased_p, then evaluates that policy under true_p.
[[nodiscard]] BiasImpact bias_impact(const OuParams& true_p, const OuParams& biased_p, double c, double eta);

/// Optimal results for each dimensionless variance cap.
[[nodiscard]] std::vector<OptResult> frontier(double c_t, const std::vector<double>& eta_grid);

}  // namespace ouhf
