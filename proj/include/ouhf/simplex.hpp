#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ouhf {

using Objective = std::function<double(std::span<const double>)>;

struct SimplexOptions {
    /// Converged once the largest vertex distance (max-norm) from the best vertex is below this.
    double diameter_tol = 1e-8;
    std::size_t max_iterations = 2000;
    /// Per-coordinate initial edge lengths; 0.1 for every coordinate when empty.
    std::vector<double> initial_step;
    /// Number of fresh-simplex restarts from the best point when the budget runs out.
    std::size_t restarts = 1;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    std::size_t iterations = 0;
    std::size_t evaluations = 0;
    double diameter = 0.0;
    bool converged = false;
};

/// Derivative-free Nelder-Mead minimization. Non-finite objective values are
/// treated as +inf, so infeasible regions can be signalled by returning NaN/inf.
[[nodiscard]] SimplexResult nelder_mead(const Objective& f, std::vector<double> x0, const SimplexOptions& opts = {});

}  // namespace ouhf
