#include "ouhf/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "ouhf/error.hpp"
#include "ouhf/simplex.hpp"

namespace ouhf {
namespace {

constexpr double kMinWidth = 1e-7;
constexpr double kInf = std::numeric_limits<double>::infinity();

double level_scale(const OuParams& p) {
    validate(p);
    if (!(p.sigma2 > 0.0)) throw Error(ErrorKind::DegenerateInput, "dimensionless transform needs sigma2 > 0");
    return std::sqrt(2.0 * p.tau / p.sigma2);
}

// Search coordinates: centre m = (a + b) / 2 and width d = a - b.
struct Candidate {
    double m = 0.0;
    double d = 0.0;
    StrategyMoments z;
    bool ok = false;
};

class Problem {
public:
    Problem(double c_t, double eta_t) : c_(c_t), eta_(eta_t) {}

    bool inside(double m, double d) const {
        const double a = m + 0.5 * d;
        const double b = m - 0.5 * d;
        return d >= kMinWidth && a >= 0.0 && a <= kZMax && b >= -kZMax;
    }

    Candidate eval(double m, double d) const {
        Candidate c{m, d, {}, false};
        if (!inside(m, d)) return c;
        c.z = strategy_moments({m + 0.5 * d, m - 0.5 * d}, c_);
        c.ok = std::isfinite(c.z.z_m) && std::isfinite(c.z.z_v);
        return c;
    }

    // Relative constraint violation Z_V / eta - 1.
    double violation(const Candidate& c) const { return std::isinf(eta_) ? -1.0 : c.z.z_v / eta_ - 1.0; }

    bool feasible(const Candidate& c) const { return c.ok && violation(c) <= 1e-9; }

    double c() const { return c_; }
    double eta() const { return eta_; }

private:
    double c_;
    double eta_;
};

Candidate better(const Problem& pr, const Candidate& x, const Candidate& y) {
    const bool fx = pr.feasible(x);
    const bool fy = pr.feasible(y);
    if (fx != fy) return fx ? x : y;
    return y.z.z_m > x.z.z_m ? y : x;
}

Candidate augmented_lagrangian(const Problem& pr, Candidate start) {
    double lambda = 0.0;
    double rho = 10.0;
    std::vector<double> x{start.m, start.d};
    Candidate best = start;
    for (int outer = 0; outer < 25; ++outer) {
        const Objective f = [&](std::span<const double> y) {
            const Candidate c = pr.eval(y[0], y[1]);
            if (!c.ok) return kInf;
            double value = -c.z.z_m;
            if (!std::isinf(pr.eta())) {
                const double g = pr.violation(c);
                const double shifted = std::max(0.0, g + lambda / rho);
                value += 0.5 * rho * (shifted * shifted - (lambda / rho) * (lambda / rho));
            }
            return value;
        };
        SimplexOptions so;
        so.diameter_tol = 1e-10;
        so.initial_step = {0.05, 0.05 * std::max(0.1, x[1])};
        const SimplexResult r = nelder_mead(f, x, so);
        x = r.x;
        const Candidate c = pr.eval(x[0], x[1]);
        best = better(pr, best, c);
        if (std::isinf(pr.eta())) break;
        const double g = pr.violation(c);
        lambda = std::max(0.0, lambda + rho * g);
        if (std::abs(std::max(g, -lambda / rho)) < 1e-12) break;
        rho = std::min(rho * 2.0, 1e8);
    }
    return best;
}

// Width on the constraint boundary Z_V = eta near d0 for a fixed centre, or NaN.
double boundary_width(const Problem& pr, double m, double d0) {
    const auto g = [&](double d) {
        const Candidate c = pr.eval(m, d);
        return c.ok ? pr.violation(c) : std::numeric_limits<double>::quiet_NaN();
    };
    double lo = d0, hi = d0;
    double glo = g(lo), ghi = glo;
    if (std::isnan(glo)) return glo;
    for (int i = 0; i < 60 && glo * ghi > 0.0; ++i) {
        const double step = 1e-4 * std::max(d0, 1e-3) * std::exp2(i);
        lo = std::max(kMinWidth, d0 - step);
        hi = d0 + step;
        glo = g(lo);
        ghi = g(hi);
        if (std::isnan(glo) || std::isnan(ghi)) return std::numeric_limits<double>::quiet_NaN();
    }
    if (glo * ghi > 0.0) return std::numeric_limits<double>::quiet_NaN();
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    std::uintmax_t iters = 200;
    const auto [l, h] = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                                          boost::math::tools::eps_tolerance<double>(52), iters);
    return 0.5 * (l + h);
}

Candidate polish_on_boundary(const Problem& pr, const Candidate& start) {
    const auto value = [&](double m) {
        const double d = boundary_width(pr, m, start.d);
        if (std::isnan(d)) return kInf;
        const Candidate c = pr.eval(m, d);
        return c.ok ? -c.z.z_m : kInf;
    };
    const double half = 0.02 * std::max(1.0, start.d);
    const auto [m, v] = boost::math::tools::brent_find_minima(value, start.m - half, start.m + half, 40);
    if (!std::isfinite(v)) return start;
    const double d = boundary_width(pr, m, start.d);
    const Candidate c = pr.eval(m, d);
    return pr.feasible(c) && c.z.z_m >= start.z.z_m - 1e-12 ? c : start;
}

}  // namespace

DimensionlessProblem to_dimensionless(const OuParams& p, const SignalPolicy& policy, double eta) {
    const double k = level_scale(p);
    if (!(eta > 0.0)) throw Error(ErrorKind::InvalidArgument, "variance cap must be positive");
    DimensionlessProblem d;
    d.levels = {k * (policy.a - p.mu), k * (policy.b - p.mu)};
    d.c_t = k * policy.c;
    d.eta_t = std::isinf(eta) ? kInf : 2.0 * eta / p.sigma2;
    return d;
}

OriginalProblem from_dimensionless(const OuParams& p, const DimensionlessProblem& d) {
    const double k = level_scale(p);
    OriginalProblem o;
    o.policy = {p.mu + d.levels.a_t / k, p.mu + d.levels.b_t / k, d.c_t / k};
    o.eta = std::isinf(d.eta_t) ? kInf : 0.5 * p.sigma2 * d.eta_t;
    return o;
}

StrategyMoments moments_to_original(const OuParams& p, const StrategyMoments& z) {
    validate(p);
    return {std::sqrt(0.5 * p.tau * p.sigma2) * z.z_m, 0.5 * p.sigma2 * z.z_v};
}

StrategyMoments strategy_moments(const DimensionlessLevels& levels, double c_t) {
    if (!(c_t >= 0.0)) throw Error(ErrorKind::InvalidArgument, "transaction cost must be non-negative");
    const CycleMoments t = cycle_moments(levels);
    if (!(t.mean > 0.0)) throw Error(ErrorKind::UndefinedMoments, "zero-width cycle has no profit rate");
    const double profit = levels.a_t - levels.b_t - c_t;
    return {profit / t.mean, profit * profit * t.variance / (t.mean * t.mean * t.mean)};
}

OptResult optimize_signals(double c_t, double eta_t) {
    if (!(c_t >= 0.0) || !std::isfinite(c_t)) throw Error(ErrorKind::InvalidArgument, "transaction cost must be finite and >= 0");
    if (!(eta_t > 0.0)) throw Error(ErrorKind::InvalidArgument, "variance cap must be positive");
    const Problem pr(c_t, eta_t);

    OptResult out;
    out.c_t = c_t;
    out.eta_t = eta_t;
    if (c_t >= 2.0 * kZMax) return out;

    // Coarse scan: centres around zero, widths geometric above the cost.
    std::vector<Candidate> pool;
    for (int i = -4; i <= 4; ++i) {
        const double m = 0.5 * i;
        for (int j = 0; j <= 40; ++j) {
            const double d = c_t + 1e-4 * std::pow(10.0, j * 0.125);
            const Candidate c = pr.eval(m, d);
            if (pr.feasible(c) && c.z.z_m > 0.0) pool.push_back(c);
        }
    }
    if (pool.empty()) return out;
    std::sort(pool.begin(), pool.end(), [](const Candidate& x, const Candidate& y) { return x.z.z_m > y.z.z_m; });

    Candidate best = pool.front();
    const std::size_t starts = std::min<std::size_t>(5, pool.size());
    for (std::size_t s = 0; s < starts; ++s) best = better(pr, best, augmented_lagrangian(pr, pool[s]));
    if (!std::isinf(eta_t) && pr.violation(best) > -1e-6) best = polish_on_boundary(pr, best);

    if (!pr.feasible(best) || !(best.z.z_m > 0.0)) return out;
    out.levels = {best.m + 0.5 * best.d, best.m - 0.5 * best.d};
    out.z_m_star = best.z.z_m;
    out.z_v_at_opt = best.z.z_v;
    out.binding = !std::isinf(eta_t) && pr.violation(best) > -1e-6;
    out.trade = true;
    return out;
}

OptimalPolicy optimal_policy(const OuParams& p, double c, double eta) {
    const DimensionlessProblem d = to_dimensionless(p, {p.mu, p.mu, c}, eta);
    OptimalPolicy o;
    o.dimensionless = optimize_signals(d.c_t, d.eta_t);
    DimensionlessProblem back = d;
    back.levels = o.dimensionless.levels;
    o.policy = from_dimensionless(p, back).policy;
    o.policy.c = c;
    o.moments = moments_to_original(p, {o.dimensionless.z_m_star, o.dimensionless.z_v_at_opt});
    return o;
}

StrategyMoments evaluate_policy(const OuParams& p, const SignalPolicy& policy) {
    const DimensionlessProblem d = to_dimensionless(p, policy, kInf);
    return moments_to_original(p, strategy_moments(d.levels, d.c_t));
}

BiasImpact bias_impact(const OuParams& true_p, const OuParams& biased_p, double c, double eta) {
    const OptimalPolicy claimed = optimal_policy(biased_p, c, eta);
    BiasImpact b;
    b.policy = claimed.policy;
    b.claimed_z_m = claimed.moments.z_m;
    if (!claimed.dimensionless.trade) return b;
    const StrategyMoments actual = evaluate_policy(true_p, claimed.policy);
    b.actual_z_m = actual.z_m;
    b.actual_z_v = actual.z_v;
    return b;
}

std::vector<OptResult> frontier(double c_t, const std::vector<double>& eta_grid) {
    std::vector<OptResult> out;
    out.reserve(eta_grid.size());
    for (double eta : eta_grid) out.push_back(optimize_signals(c_t, eta));
    return out;
}

}  // namespace ouhf
