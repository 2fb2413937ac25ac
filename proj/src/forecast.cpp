#include "ouhf/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "ouhf/error.hpp"

namespace ouhf {
namespace {

struct Ols {
    Eigen::VectorXd coef;
    Eigen::VectorXd se;
    double r2 = 0.0;
    bool collinear = false;
};

Ols ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, bool strict, const char* what) {
    Ols r;
    const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x);
    r.collinear = cod.rank() < x.cols();
    if (r.collinear && strict) {
        throw Error(ErrorKind::Collinearity, std::string(what) + " design matrix is rank deficient");
    }
    r.coef = cod.solve(y);
    const Eigen::VectorXd resid = y - x * r.coef;
    const double ssr = resid.squaredNorm();
    const double sst = (y.array() - y.mean()).square().sum();
    r.r2 = sst > 0.0 ? 1.0 - ssr / sst : (ssr == 0.0 ? 1.0 : 0.0);
    r.se = Eigen::VectorXd::Constant(x.cols(), std::numeric_limits<double>::quiet_NaN());
    const Eigen::Index dof = x.rows() - x.cols();
    if (!r.collinear && dof > 0) {
        const Eigen::MatrixXd xtx_inv = (x.transpose() * x).inverse();
        r.se = (ssr / static_cast<double>(dof) * xtx_inv.diagonal()).array().sqrt();
    }
    return r;
}

double median(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

// Mean of ln sigma2 over the `count` days ending at index `last` (inclusive).
double mean_log_sigma2(const std::vector<double>& log_s2, std::size_t last, std::size_t count) {
    double s = 0.0;
    for (std::size_t k = 0; k < count; ++k) s += log_s2[last - k];
    return s / static_cast<double>(count);
}

}  // namespace

void DailyParamHistory::push_back(std::int64_t day, const OuParams& p, double open) {
    days.push_back(day);
    mu.push_back(p.mu);
    tau.push_back(p.tau);
    sigma2.push_back(p.sigma2);
    open_value.push_back(open);
}

DailyParamHistory DailyParamHistory::slice(std::size_t first, std::size_t count) const {
    if (first + count > size()) throw Error(ErrorKind::InvalidArgument, "history slice out of range");
    const auto cut = [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        return V(v.begin() + static_cast<std::ptrdiff_t>(first), v.begin() + static_cast<std::ptrdiff_t>(first + count));
    };
    return {cut(days), cut(mu), cut(tau), cut(sigma2), cut(open_value)};
}

void validate(const DailyParamHistory& h) {
    const std::size_t n = h.days.size();
    if (h.mu.size() != n || h.tau.size() != n || h.sigma2.size() != n || h.open_value.size() != n) {
        throw Error(ErrorKind::InvalidHistory, "history columns have different lengths");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && h.days[i] <= h.days[i - 1]) throw Error(ErrorKind::InvalidHistory, "history days are not increasing");
        if (!std::isfinite(h.mu[i]) || !std::isfinite(h.open_value[i])) {
            throw Error(ErrorKind::InvalidHistory, "non-finite value on day " + std::to_string(h.days[i]));
        }
        if (!(h.tau[i] > 0.0) || !std::isfinite(h.tau[i])) {
            throw Error(ErrorKind::InvalidHistory, "non-positive tau on day " + std::to_string(h.days[i]));
        }
        if (!(h.sigma2[i] > 0.0) || !std::isfinite(h.sigma2[i])) {
            throw Error(ErrorKind::InvalidHistory, "non-positive sigma2 on day " + std::to_string(h.days[i]));
        }
    }
}

ForecastModels fit_models(const DailyParamHistory& hist, std::size_t window, const FitModelOptions& opts) {
    validate(hist);
    if (window < kHarLags + 1) throw Error(ErrorKind::InvalidArgument, "window must be at least 23 days");
    const std::size_t n = hist.size();
    if (n < window) {
        throw Error(ErrorKind::InsufficientData,
                    "history has " + std::to_string(n) + " days, window needs " + std::to_string(window));
    }
    ForecastModels m;
    m.window = window;
    const std::size_t start = n - window;

    const std::size_t mu_first = std::max<std::size_t>(start, 1);
    m.mu_rows = n - mu_first;
    Eigen::MatrixXd xm(static_cast<Eigen::Index>(m.mu_rows), 3);
    Eigen::VectorXd ym(static_cast<Eigen::Index>(m.mu_rows));
    for (std::size_t i = mu_first, r = 0; i < n; ++i, ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        xm(row, 0) = 1.0;
        xm(row, 1) = hist.mu[i - 1];
        xm(row, 2) = hist.open_value[i];
        ym(row) = hist.mu[i];
    }
    const Ols fm = ols(xm, ym, opts.strict, "mean model");
    for (int k = 0; k < 3; ++k) {
        m.mu_coef[k] = fm.coef(k);
        m.mu_se[k] = fm.se(k);
    }
    m.r2_mu = fm.r2;
    m.mu_collinear = fm.collinear;

    m.tau_mean = std::accumulate(hist.tau.begin() + static_cast<std::ptrdiff_t>(start), hist.tau.end(), 0.0) /
                 static_cast<double>(window);
    m.r2_tau = 0.0;

    std::vector<double> log_s2(n);
    std::transform(hist.sigma2.begin(), hist.sigma2.end(), log_s2.begin(), [](double v) { return std::log(v); });
    const std::size_t har_first = std::max(start, kHarLags);
    m.har_rows = n - har_first;
    Eigen::MatrixXd xh(static_cast<Eigen::Index>(m.har_rows), 4);
    Eigen::VectorXd yh(static_cast<Eigen::Index>(m.har_rows));
    for (std::size_t i = har_first, r = 0; i < n; ++i, ++r) {
        const auto row = static_cast<Eigen::Index>(r);
        xh(row, 0) = 1.0;
        xh(row, 1) = log_s2[i - 1];
        xh(row, 2) = mean_log_sigma2(log_s2, i - 1, 5);
        xh(row, 3) = mean_log_sigma2(log_s2, i - 1, kHarLags);
        yh(row) = log_s2[i];
    }
    const Ols fh = ols(xh, yh, opts.strict, "variance model");
    for (int k = 0; k < 4; ++k) {
        m.har_coef[k] = fh.coef(k);
        m.har_se[k] = fh.se(k);
    }
    m.r2_sigma = fh.r2;
    m.har_collinear = fh.collinear;
    return m;
}

OuParams forecast_day(const ForecastModels& models, const DailyParamHistory& hist, double next_open) {
    const std::size_t n = hist.size();
    if (n < kHarLags) throw Error(ErrorKind::InsufficientData, "forecast needs at least 22 days of history");
    std::vector<double> log_s2(kHarLags);
    for (std::size_t k = 0; k < kHarLags; ++k) log_s2[k] = std::log(hist.sigma2[n - kHarLags + k]);
    const double lag1 = log_s2.back();
    const double mean5 = mean_log_sigma2(log_s2, kHarLags - 1, 5);
    const double mean22 = mean_log_sigma2(log_s2, kHarLags - 1, kHarLags);
    const auto& a = models.mu_coef;
    const auto& h = models.har_coef;
    OuParams p;
    p.mu = a[0] + a[1] * hist.mu.back() + a[2] * next_open;
    p.tau = models.tau_mean;
    p.sigma2 = std::exp(h[0] + h[1] * lag1 + h[2] * mean5 + h[3] * mean22);
    return p;
}

ForecastEvaluation evaluate_forecasts(const DailyParamHistory& hist, std::size_t window) {
    validate(hist);
    const std::size_t train = window + kHarLags;
    if (hist.size() < train + 1) {
        throw Error(ErrorKind::InsufficientData, "evaluation needs window + 23 days of history");
    }
    std::vector<double> r2_mu, r2_sigma, ae_mu, ae_tau, ae_s2;
    for (std::size_t j = train; j < hist.size(); ++j) {
        const DailyParamHistory past = hist.slice(j - train, train);
        const ForecastModels m = fit_models(past, window);
        const OuParams f = forecast_day(m, past, hist.open_value[j]);
        r2_mu.push_back(m.r2_mu);
        r2_sigma.push_back(m.r2_sigma);
        ae_mu.push_back(std::abs(f.mu - hist.mu[j]));
        ae_tau.push_back(std::abs(f.tau - hist.tau[j]));
        ae_s2.push_back(std::abs(f.sigma2 - hist.sigma2[j]));
    }
    ForecastEvaluation e;
    e.forecasts = ae_mu.size();
    e.med_r2_mu = median(r2_mu);
    e.med_r2_sigma = median(r2_sigma);
    e.med_ae_mu = median(ae_mu);
    e.med_ae_tau = median(ae_tau);
    e.med_ae_sigma2 = median(ae_s2);
    return e;
}

}  // namespace ouhf
