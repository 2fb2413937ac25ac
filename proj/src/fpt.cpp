#include "ouhf/fpt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "ouhf/error.hpp"

namespace ouhf {
namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
constexpr std::size_t kMaxTerms = 400;
constexpr double kSeriesNegativeLimit = -2.0;

void check_domain(double z) {
    if (!std::isfinite(z) || std::abs(z) > kZMax) {
        throw Error(ErrorKind::Domain, "first-passage series evaluated at z = " + std::to_string(z) +
                                           " outside [-" + std::to_string(kZMax) + ", " + std::to_string(kZMax) + "]");
    }
}

// For z well below zero the alternating series cancels; these integrals are the
// same functions written as Gaussian integrals of exp(z u) - 1.
double phi1_integral(double z) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate([z](double u) { return u > 0.0 ? std::expm1(z * u) / u * std::exp(-0.5 * u * u) : z; }, 0.0,
                       40.0);
}

double phi2_integral(double z) {
    boost::math::quadrature::tanh_sinh<double> q;
    return q.integrate(
        [z](double u) {
            if (!(u > 0.0)) return 0.0;
            return std::expm1(z * u) / u * std::exp(-0.5 * u * u) * (2.0 * std::log(u) - std::numbers::ln2 + kEulerGamma);
        },
        0.0, 40.0);
}

}  // namespace

void validate(const DimensionlessLevels& levels) {
    check_domain(levels.a_t);
    check_domain(levels.b_t);
    if (levels.b_t > levels.a_t) {
        throw Error(ErrorKind::InvalidArgument, "exit level must not exceed the entry level");
    }
}

FptSeries fpt_series(double z) {
    check_domain(z);
    FptSeries s;
    if (z == 0.0) return s;
    // t_{k+2} = t_k z^2 k / ((k + 1)(k + 2)),  psi weight_{k+2} = weight_k + 2 / k.
    double t_odd = std::sqrt(2.0 * std::numbers::pi) * z;
    double t_even = z * z;
    double w_odd = -2.0 * std::numbers::ln2;
    double w_even = 0.0;
    const double peak = 2.0 * z * z + 2.0;
    for (std::size_t k = 1; k < kMaxTerms; k += 2) {
        s.odd += t_odd;
        s.odd_psi += t_odd * w_odd;
        s.even += t_even;
        s.even_psi += t_even * w_even;
        s.terms = k + 1;
        const double scale = std::abs(s.odd) + std::abs(s.even);
        const double last = std::max(std::abs(t_odd) * (1.0 + std::abs(w_odd)), std::abs(t_even) * (1.0 + std::abs(w_even)));
        s.last_ratio = last / scale;
        if (static_cast<double>(k) > peak && s.last_ratio < 1e-17) break;
        const double ko = static_cast<double>(k);
        const double ke = ko + 1.0;
        t_odd *= z * z * ko / ((ko + 1.0) * (ko + 2.0));
        w_odd += 2.0 / ko;
        t_even *= z * z * ke / ((ke + 1.0) * (ke + 2.0));
        w_even += 2.0 / ke;
    }
    return s;
}

double phi1(double z) {
    check_domain(z);
    if (z < kSeriesNegativeLimit) return phi1_integral(z);
    const FptSeries s = fpt_series(z);
    return 0.5 * (s.odd + s.even);
}

double phi2(double z) {
    check_domain(z);
    if (z < kSeriesNegativeLimit) return phi2_integral(z);
    const FptSeries s = fpt_series(z);
    return 0.5 * (s.odd_psi + s.even_psi);
}

double passage_mean(double from, double to) {
    if (from > to) throw Error(ErrorKind::InvalidArgument, "passage_mean expects from <= to");
    return phi1(to) - phi1(from);
}

double passage_variance(double from, double to) {
    if (from > to) throw Error(ErrorKind::InvalidArgument, "passage_variance expects from <= to");
    const double a = phi1(to);
    const double b = phi1(from);
    return a * a - phi2(to) - b * b + phi2(from);
}

CycleMoments cycle_moments(const DimensionlessLevels& levels) {
    validate(levels);
    if (levels.a_t == levels.b_t) return {};
    // Both legs combine into the odd parts of the series, which carry no cancellation.
    const FptSeries a = fpt_series(levels.a_t);
    const FptSeries b = fpt_series(levels.b_t);
    CycleMoments m;
    m.mean = a.odd - b.odd;
    const double w1a = a.odd * a.even;
    const double w1b = b.odd * b.even;
    m.variance = w1a - w1b - a.odd_psi + b.odd_psi;
    const double scale = std::max({1.0, std::abs(w1a), std::abs(w1b), std::abs(a.odd_psi), std::abs(b.odd_psi)});
    if (m.variance < -1e-12 * scale) {
        throw Error(ErrorKind::NumericalInconsistency,
                    "cycle variance evaluated negative (" + std::to_string(m.variance) + ")");
    }
    m.variance = std::max(m.variance, 0.0);
    return m;
}

double cycle_mean(const DimensionlessLevels& levels) { return cycle_moments(levels).mean; }

double cycle_var(const DimensionlessLevels& levels) { return cycle_moments(levels).variance; }

}  // namespace ouhf
