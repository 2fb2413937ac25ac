#include "ouhf/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ouhf/error.hpp"

namespace ouhf {
namespace {

constexpr double kReflect = 1.0;
constexpr double kExpand = 2.0;
constexpr double kContract = 0.5;
constexpr double kShrink = 0.5;

struct Vertex {
    std::vector<double> x;
    double f = 0.0;
};

class Run {
public:
    Run(const Objective& f, std::size_t dim) : f_(f), dim_(dim) {}

    double eval(const std::vector<double>& x) {
        ++evaluations_;
        const double v = f_(std::span<const double>(x));
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    }

    // One Nelder-Mead pass from x0; returns the best vertex and whether the diameter criterion was met.
    bool minimize(std::vector<double>& best_x, double& best_f, const std::vector<double>& step, const SimplexOptions& o,
                  std::size_t& iterations, double& diameter) {
        std::vector<Vertex> s(dim_ + 1);
        s[0].x = best_x;
        s[0].f = eval(s[0].x);
        for (std::size_t i = 0; i < dim_; ++i) {
            s[i + 1].x = best_x;
            s[i + 1].x[i] += step[i];
            s[i + 1].f = eval(s[i + 1].x);
        }
        std::vector<double> centroid(dim_), trial(dim_), trial2(dim_);
        auto order = [&] { std::stable_sort(s.begin(), s.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; }); };
        auto point = [&](std::vector<double>& out, double coef) {
            const auto& worst = s[dim_].x;
            for (std::size_t j = 0; j < dim_; ++j) out[j] = centroid[j] + coef * (centroid[j] - worst[j]);
        };
        bool converged = false;
        order();
        for (; iterations < o.max_iterations; ++iterations) {
            diameter = 0.0;
            for (std::size_t i = 1; i <= dim_; ++i)
                for (std::size_t j = 0; j < dim_; ++j) diameter = std::max(diameter, std::abs(s[i].x[j] - s[0].x[j]));
            if (diameter < o.diameter_tol) {
                converged = true;
                break;
            }
            std::fill(centroid.begin(), centroid.end(), 0.0);
            for (std::size_t i = 0; i < dim_; ++i)
                for (std::size_t j = 0; j < dim_; ++j) centroid[j] += s[i].x[j];
            for (double& c : centroid) c /= static_cast<double>(dim_);

            point(trial, kReflect);
            const double fr = eval(trial);
            if (fr < s[0].f) {
                point(trial2, kExpand);
                const double fe = eval(trial2);
                if (fe < fr) {
                    s[dim_].x = trial2;
                    s[dim_].f = fe;
                } else {
                    s[dim_].x = trial;
                    s[dim_].f = fr;
                }
            } else if (fr < s[dim_ - 1].f) {
                s[dim_].x = trial;
                s[dim_].f = fr;
            } else {
                const bool outside = fr < s[dim_].f;
                point(trial2, outside ? kContract : -kContract);
                const double fc = eval(trial2);
                if (fc < (outside ? fr : s[dim_].f)) {
                    s[dim_].x = trial2;
                    s[dim_].f = fc;
                } else {
                    for (std::size_t i = 1; i <= dim_; ++i) {
                        for (std::size_t j = 0; j < dim_; ++j) s[i].x[j] = s[0].x[j] + kShrink * (s[i].x[j] - s[0].x[j]);
                        s[i].f = eval(s[i].x);
                    }
                }
            }
            order();
        }
        best_x = s[0].x;
        best_f = s[0].f;
        return converged;
    }

    std::size_t evaluations() const { return evaluations_; }

private:
    const Objective& f_;
    std::size_t dim_;
    std::size_t evaluations_ = 0;
};

}  // namespace

SimplexResult nelder_mead(const Objective& f, std::vector<double> x0, const SimplexOptions& opts) {
    const std::size_t dim = x0.size();
    if (dim == 0) throw Error(ErrorKind::InvalidArgument, "nelder_mead: empty starting point");
    std::vector<double> step = opts.initial_step.empty() ? std::vector<double>(dim, 0.1) : opts.initial_step;
    if (step.size() != dim) throw Error(ErrorKind::InvalidArgument, "nelder_mead: step size dimension mismatch");

    Run run(f, dim);
    SimplexResult r;
    r.x = std::move(x0);
    r.converged = run.minimize(r.x, r.value, step, opts, r.iterations, r.diameter);
    for (std::size_t k = 0; k < opts.restarts && !r.converged; ++k) {
        // Perturbed restart: a fresh simplex around the best point with half the original edges.
        for (double& s : step) s *= 0.5;
        std::size_t more = 0;
        SimplexOptions again = opts;
        r.converged = run.minimize(r.x, r.value, step, again, more, r.diameter);
        r.iterations += more;
    }
    r.evaluations = run.evaluations();
    return r;
}

}  // namespace ouhf
