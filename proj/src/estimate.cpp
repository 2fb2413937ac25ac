#include "ouhf/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/tools/minima.hpp>

#include "ouhf/error.hpp"
#include "standardize.hpp"

namespace ouhf {

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::Mom: return "mom";
        case Method::MomNr: return "mom-nr";
        case Method::ArCss: return "ar";
        case Method::ArmaNrCss: return "arma-nr";
        case Method::Mle: return "mle";
        case Method::MleNr: return "mle-nr";
        case Method::Rv: return "rv";
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    for (Method m : {Method::Mom, Method::MomNr, Method::ArCss, Method::ArmaNrCss, Method::Mle, Method::MleNr,
                     Method::Rv}) {
        if (to_string(m) == name) return m;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown estimation method '" + std::string(name) + "'");
}

bool is_noise_robust(Method m) noexcept {
    return m == Method::MomNr || m == Method::ArmaNrCss || m == Method::MleNr;
}

SampleMoments sample_moments(std::span<const double> x) {
    if (x.size() < 4) throw Error(ErrorKind::InsufficientData, "sample moments need at least four observations");
    SampleMoments m;
    m.n = x.size() - 1;
    const double n = static_cast<double>(m.n);
    const double x0 = x[0];
    double offset = 0.0;
    for (double v : x) offset += v - x0;
    offset /= n + 1.0;
    m.m1 = x0 + offset;
    const auto dev = [&](std::size_t i) { return (x[i] - x0) - offset; };
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = dev(i);
        s2 += d * d;
        if (i >= 1) s3 += d * dev(i - 1);
        if (i >= 2) s4 += d * dev(i - 2);
    }
    m.m2 = s2 / n;
    m.m3 = s3 / (n - 1.0);
    m.m4 = s4 / (n - 2.0);
    return m;
}

double equidistant_spacing(const TickSeries& ts) {
    const auto t = ts.times();
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * dt) {
            throw Error(ErrorKind::InvalidArgument,
                        "series is not equidistant (gap " + std::to_string(i) + "); aggregate to a regular grid first");
        }
    }
    return dt;
}

OuFit mom_from_moments(const SampleMoments& m, double dt) {
    if (!(m.m2 > 0.0) || !(m.m3 > 0.0) || !(m.m2 > m.m3)) {
        throw Error(ErrorKind::MomentDegenerate, "method of moments needs M2 > M3 > 0");
    }
    const double log_ratio = std::log(m.m2 / m.m3);
    OuFit f;
    f.method = Method::Mom;
    f.n_used = m.n + 1;
    f.params.ou = {m.m1, log_ratio / dt, 2.0 / dt * m.m2 * log_ratio};
    f.params.omega2 = 0.0;
    return f;
}

OuFit mom_fit(const TickSeries& ts) {
    const double dt = equidistant_spacing(ts);
    return mom_from_moments(sample_moments(ts.values()), dt);
}

OuFit mom_nr_from_moments(const SampleMoments& m, double dt) {
    if (!(m.m3 > 0.0) || !(m.m4 > 0.0) || !(m.m3 > m.m4)) {
        throw Error(ErrorKind::MomentDegenerate, "noise-robust method of moments needs M3 > M4 > 0");
    }
    const double log_ratio = std::log(m.m3 / m.m4);
    const double latent_var = m.m3 * m.m3 / m.m4;
    OuFit f;
    f.method = Method::MomNr;
    f.n_used = m.n + 1;
    f.params.ou = {m.m1, log_ratio / dt, 2.0 / dt * latent_var * log_ratio};
    const double omega2 = m.m2 - latent_var;
    if (omega2 < 0.0) {
        f.params.omega2 = 0.0;
        f.diagnostics.omega2_clamped = true;
        f.diagnostics.note = "negative noise variance estimate clamped to 0";
    } else {
        f.params.omega2 = omega2;
    }
    return f;
}

OuFit mom_nr_fit(const TickSeries& ts) {
    const double dt = equidistant_spacing(ts);
    return mom_nr_from_moments(sample_moments(ts.values()), dt);
}

MomBias predict_mom_bias(const NoisyOuParams& p, std::size_t n) {
    validate(p);
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "predict_mom_bias needs n >= 1");
    const double s2 = p.ou.sigma2;
    const double tau = p.ou.tau;
    if (s2 == 0.0) throw Error(ErrorKind::InvalidArgument, "predict_mom_bias needs sigma2 > 0");
    const double nn = static_cast<double>(n);
    // log(sigma2 / (sigma2 + 2 tau omega2)) without cancellation for small noise.
    const double log_ratio = -std::log1p(2.0 * tau * p.omega2 / s2);
    return {tau - nn * log_ratio, s2 + 2.0 * tau * p.omega2 - 2.0 * nn * (s2 / (2.0 * tau) + p.omega2) * log_ratio};
}

ArmaParams ou_to_arma(const NoisyOuParams& p, double dt) {
    validate(p);
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "ou_to_arma requires dt > 0");
    const double phi = std::exp(-p.ou.tau * dt);
    const double var_u = p.ou.sigma2 / (2.0 * p.ou.tau) * -std::expm1(-2.0 * p.ou.tau * dt) + p.omega2 * (1.0 + phi * phi);
    const double cov_u = -p.omega2 * phi;
    if (!(var_u > 0.0)) throw Error(ErrorKind::DegenerateInput, "ARMA innovation variance is zero");
    const double rho = cov_u / var_u;  // in [-1/2, 0]
    const double theta = 2.0 * rho / (1.0 + std::sqrt(std::max(0.0, 1.0 - 4.0 * rho * rho)));
    return {p.ou.mu * -std::expm1(-p.ou.tau * dt), phi, theta, var_u / (1.0 + theta * theta)};
}

RawOuEstimate arma_to_ou(const ArmaParams& a, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "arma_to_ou requires dt > 0");
    if (!(a.phi > 0.0 && a.phi < 1.0)) {
        throw Error(ErrorKind::BackTransformDomain, "AR coefficient " + std::to_string(a.phi) + " outside (0, 1)");
    }
    const double log_phi = std::log(a.phi);
    const double phi = a.phi;
    const double th = a.theta;
    RawOuEstimate r;
    r.mu = a.alpha / (1.0 - phi);
    r.tau = -log_phi / dt;
    r.sigma2 = -2.0 / dt * a.gamma2 * (phi + th * th * phi + th * phi * phi + th) / (phi * (1.0 - phi * phi)) * log_phi;
    r.omega2 = -th * a.gamma2 / phi;
    return r;
}

namespace {

using detail::Standardized;
using detail::standardize;

struct CssSolution {
    double alpha = 0.0;
    double phi = 0.0;
    double ssr = std::numeric_limits<double>::infinity();
};

// Residuals e_i = y~_i - alpha u~_i - phi z~_i with the MA filter w_i = v_i - theta w_{i-1}
// applied to x_i, 1 and x_{i-1}; the optimal (alpha, phi) for fixed theta is least squares.
CssSolution css_given_theta(std::span<const double> z, double theta) {
    double fy = 0.0, fu = 0.0, fx = 0.0;
    double suu = 0.0, sux = 0.0, sxx = 0.0, suy = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 1; i < z.size(); ++i) {
        fy = z[i] - theta * fy;
        fu = 1.0 - theta * fu;
        fx = z[i - 1] - theta * fx;
        suu += fu * fu;
        sux += fu * fx;
        sxx += fx * fx;
        suy += fu * fy;
        sxy += fx * fy;
        syy += fy * fy;
    }
    const double det = suu * sxx - sux * sux;
    CssSolution s;
    if (!(std::abs(det) > 0.0)) return s;
    s.alpha = (sxx * suy - sux * sxy) / det;
    s.phi = (suu * sxy - sux * suy) / det;
    s.ssr = std::max(0.0, syy - s.alpha * suy - s.phi * sxy);
    return s;
}

ArmaParams unstandardize(const CssSolution& c, double theta, const Standardized& s, std::size_t n_resid) {
    ArmaParams a;
    a.phi = c.phi;
    a.theta = theta;
    a.alpha = s.scale * c.alpha + s.center * (1.0 - c.phi);
    a.gamma2 = s.scale * s.scale * c.ssr / static_cast<double>(n_resid);
    return a;
}

OuFit fit_from_arma(const ArmaParams& a, double dt, Method method, std::size_t n) {
    const RawOuEstimate r = arma_to_ou(a, dt);
    OuFit f;
    f.method = method;
    f.n_used = n;
    f.params.ou = {r.mu, r.tau, r.sigma2};
    if (!(r.sigma2 >= 0.0)) {
        throw Error(ErrorKind::BackTransformDomain, "implied sigma2 is negative");
    }
    if (r.omega2 < 0.0) {
        f.params.omega2 = 0.0;
        f.diagnostics.omega2_clamped = true;
        f.diagnostics.note = "positive MA coefficient implies negative noise variance; clamped to 0";
    } else {
        f.params.omega2 = r.omega2;
    }
    return f;
}

}  // namespace

ArmaParams ar1_css(std::span<const double> x) {
    if (x.size() < 3) throw Error(ErrorKind::InsufficientData, "AR(1) fit needs at least three observations");
    const Standardized s = standardize(x);
    const CssSolution c = css_given_theta(s.z, 0.0);
    if (!std::isfinite(c.ssr)) throw Error(ErrorKind::DegenerateInput, "AR(1) design is singular");
    return unstandardize(c, 0.0, s, x.size() - 1);
}

ArmaParams arma11_css(std::span<const double> x) {
    if (x.size() < 10) throw Error(ErrorKind::InsufficientData, "ARMA(1,1) fit needs at least ten observations");
    const Standardized s = standardize(x);
    constexpr double kThetaBound = 0.995;
    constexpr int kGrid = 199;
    // Coarse scan of the profiled objective, then Brent refinement around the best node.
    double best_theta = 0.0;
    double best_ssr = std::numeric_limits<double>::infinity();
    const double h = 2.0 * kThetaBound / (kGrid - 1);
    for (int j = 0; j < kGrid; ++j) {
        const double theta = -kThetaBound + h * j;
        const double ssr = css_given_theta(s.z, theta).ssr;
        if (ssr < best_ssr) {
            best_ssr = ssr;
            best_theta = theta;
        }
    }
    const double lo = std::max(-kThetaBound, best_theta - h);
    const double hi = std::min(kThetaBound, best_theta + h);
    const auto [theta, ssr] = boost::math::tools::brent_find_minima(
        [&](double th) { return css_given_theta(s.z, th).ssr; }, lo, hi, 40);
    const double use_theta = ssr <= best_ssr ? theta : best_theta;
    const CssSolution c = css_given_theta(s.z, use_theta);
    if (!std::isfinite(c.ssr)) throw Error(ErrorKind::DegenerateInput, "ARMA(1,1) design is singular");
    return unstandardize(c, use_theta, s, x.size() - 1);
}

OuFit ar_css_fit(const TickSeries& ts) {
    if (ts.size() < 10) throw Error(ErrorKind::InsufficientData, "AR fit needs at least ten observations");
    const double dt = equidistant_spacing(ts);
    OuFit f = fit_from_arma(ar1_css(ts.values()), dt, Method::ArCss, ts.size());
    f.loglik = ou_loglik(ts, f.params.ou);
    return f;
}

OuFit arma_nr_css_fit(const TickSeries& ts) {
    if (ts.size() < 10) throw Error(ErrorKind::InsufficientData, "ARMA fit needs at least ten observations");
    const double dt = equidistant_spacing(ts);
    const ArmaParams a = arma11_css(ts.values());
    OuFit f = fit_from_arma(a, dt, Method::ArmaNrCss, ts.size());
    constexpr double log_two_pi = 1.8378770664093454835606594728112;
    const double n = static_cast<double>(ts.size() - 1);
    f.loglik = -0.5 * n * (log_two_pi + std::log(a.gamma2) + 1.0);
    f.diagnostics.note += f.diagnostics.note.empty() ? "loglik is the CSS Gaussian value" : "; loglik is the CSS Gaussian value";
    return f;
}

double realized_variance(const TickSeries& ts) {
    const auto v = ts.values();
    double rv = 0.0;
    for (std::size_t i = 1; i < v.size(); ++i) rv += (v[i] - v[i - 1]) * (v[i] - v[i - 1]);
    return rv;
}

double noise_var_from_rv(double rv, double rm, std::size_t n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "noise_var_from_rv needs n >= 1");
    return std::max(0.0, (rv - rm) / (2.0 * static_cast<double>(n)));
}

OuFit rv_fit(const TickSeries& ts) {
    OuFit f;
    f.method = Method::Rv;
    f.n_used = ts.size();
    const auto v = ts.values();
    f.params.ou.mu = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    f.params.ou.tau = std::numeric_limits<double>::quiet_NaN();
    f.params.ou.sigma2 = realized_variance(ts);
    f.diagnostics.note = "realized variance: only sigma2 is estimated";
    return f;
}

OuFit fit(Method method, const TickSeries& ts) {
    switch (method) {
        case Method::Mom: return mom_fit(ts);
        case Method::MomNr: return mom_nr_fit(ts);
        case Method::ArCss: return ar_css_fit(ts);
        case Method::ArmaNrCss: return arma_nr_css_fit(ts);
        case Method::Mle: return mle_fit(ts, false);
        case Method::MleNr: return mle_fit(ts, true);
        case Method::Rv: return rv_fit(ts);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown method");
}

}  // namespace ouhf
