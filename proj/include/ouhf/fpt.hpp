#pragma once

#include <cstddef>

namespace ouhf {

/// Largest |z| for which the first-passage series are evaluated.
inline constexpr double kZMax = 8.0;

/// Entry and exit levels of the dimensionless process dP = -P dt + sqrt(2) dW.
struct DimensionlessLevels {
    double a_t = 0.0;
    double b_t = 0.0;
};

/// Throws InvalidArgument unless b_t <= a_t, and Domain when a level exceeds kZMax in magnitude.
void validate(const DimensionlessLevels& levels);

/// Partial sums of t_k(z) = (sqrt(2) z)^k / k! * Gamma(k/2), split by parity of k.
/// odd_psi and even_psi weight each term by psi(k/2) - psi(1).
struct FptSeries {
    double odd = 0.0;
    double even = 0.0;
    double odd_psi = 0.0;
    double even_psi = 0.0;
    std::size_t terms = 0;
    /// |last term| / |partial sum| at the stopping point.
    double last_ratio = 0.0;
};

[[nodiscard]] FptSeries fpt_series(double z);

/// phi1(z) = 1/2 sum_k t_k(z).
[[nodiscard]] double phi1(double z);
/// phi2(z) = 1/2 sum_k t_k(z) (psi(k/2) - psi(1)).
[[nodiscard]] double phi2(double z);

/// Mean and variance of the first passage from `from` up to `to` (from <= to).
[[nodiscard]] double passage_mean(double from, double to);
[[nodiscard]] double passage_variance(double from, double to);

struct CycleMoments {
    double mean = 0.0;
    double variance = 0.0;
};

/// Duration of a full cycle a -> b -> a.
[[nodiscard]] CycleMoments cycle_moments(const DimensionlessLevels& levels);
[[nodiscard]] double cycle_mean(const DimensionlessLevels& levels);
[[nodiscard]] double cycle_var(const DimensionlessLevels& levels);

}  // namespace ouhf
