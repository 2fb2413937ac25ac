#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "ouhf/error.hpp"
#include "ouhf/fpt.hpp"

using namespace ouhf;
using oracle::rel_err;

namespace {

// Passage of dP = -P dt + sqrt(2) dW from `from` up to `to` via the backward equations
// m1'' - x m1' = -1 and m2'' - x m2' = -2 m1, integrated by cumulative trapezoids.
struct OdeOracle {
    double mean = 0.0;
    double variance = 0.0;
};

OdeOracle ode_passage(double from, double to) {
    const double lo = std::min(from, -12.0);
    const int n = static_cast<int>(std::ceil((to - lo) / 2e-4));
    const double h = (to - lo) / n;
    std::vector<double> x(n + 1), inner1(n + 1), m1(n + 1), inner2(n + 1), m2(n + 1);
    for (int i = 0; i <= n; ++i) x[i] = lo + i * h;
    // inner1(y) = e^{y^2/2} int_{-inf}^y e^{-u^2/2} du
    for (int i = 0; i <= n; ++i) inner1[i] = std::exp(0.5 * x[i] * x[i]) * std::sqrt(M_PI / 2) * std::erfc(-x[i] / std::sqrt(2.0));
    m1[n] = 0.0;
    for (int i = n - 1; i >= 0; --i) m1[i] = m1[i + 1] + 0.5 * h * (inner1[i] + inner1[i + 1]);
    double acc = 0.0;
    std::vector<double> g(n + 1);
    for (int i = 0; i <= n; ++i) g[i] = 2.0 * m1[i] * std::exp(-0.5 * x[i] * x[i]);
    inner2[0] = 0.0;
    for (int i = 1; i <= n; ++i) {
        acc += 0.5 * h * (g[i - 1] + g[i]);
        inner2[i] = acc * std::exp(0.5 * x[i] * x[i]);
    }
    m2[n] = 0.0;
    for (int i = n - 1; i >= 0; --i) m2[i] = m2[i + 1] + 0.5 * h * (inner2[i] + inner2[i + 1]);
    const int k = static_cast<int>(std::llround((from - lo) / h));
    return {m1[k], m2[k] - m1[k] * m1[k]};
}

}  // namespace

TEST_CASE("series match 60-digit reference values") {
    std::ifstream in(oracle::data_dir() / "fpt_reference.csv");
    REQUIRE(in);
    std::string line;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string a, b, c;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, c, ',');
        const double z = std::stod(a), p1 = std::stod(b), p2 = std::stod(c);
        CAPTURE(z);
        if (z == 0.0) {
            CHECK(phi1(z) == 0.0);
            CHECK(phi2(z) == 0.0);
        } else {
            CHECK(rel_err(phi1(z), p1) < 1e-10);
            CHECK(rel_err(phi2(z), p2) < 1e-10);
        }
        ++rows;
    }
    CHECK(rows == 20);
}

TEST_CASE("stopping rule and domain") {
    for (double z : {-8.0, -3.0, -0.5, 0.5, 1.0, 4.0, 8.0}) {
        const auto s = fpt_series(z);
        CHECK(s.last_ratio < 1e-14);
        CHECK(s.terms <= 400);
    }
    CHECK_THROWS_AS((void)phi1(8.5), Error);
    CHECK_THROWS_AS((void)phi2(-9.0), Error);
    CHECK_THROWS_AS((void)cycle_mean({9.0, 0.0}), Error);
    CHECK_THROWS_AS((void)cycle_mean({0.0, 1.0}), Error);
}

TEST_CASE("passage moments agree with the backward equations") {
    for (auto [from, to] : {std::pair{-1.0, 1.0}, {-0.5, 1.0}, {-3.0, -1.0}, {0.0, 2.0}, {-2.0, 0.5}, {1.0, 2.5}}) {
        CAPTURE(from);
        CAPTURE(to);
        const auto o = ode_passage(from, to);
        CHECK(rel_err(passage_mean(from, to), o.mean) < 1e-6);
        CHECK(rel_err(passage_variance(from, to), o.variance) < 1e-5);
    }
}

TEST_CASE("cycle moments") {
    CHECK(cycle_mean({1.3, 1.3}) == 0.0);
    CHECK(cycle_var({1.3, 1.3}) == doctest::Approx(0.0));
    CHECK(rel_err(cycle_mean({1.0, -1.0}), 2.0 * (phi1(1.0) - phi1(-1.0))) < 1e-13);

    const double leg_up = phi1(1.0) * phi1(1.0) - phi2(1.0) + phi2(-1.0) - phi1(-1.0) * phi1(-1.0);
    CHECK(rel_err(passage_variance(-1.0, 1.0), leg_up) < 1e-12);

    const double a = 1.0, b = -0.5;
    const double up = phi1(a) * phi1(a) - phi2(a) - phi1(b) * phi1(b) + phi2(b);
    const double down = phi1(-b) * phi1(-b) - phi2(-b) - phi1(-a) * phi1(-a) + phi2(-a);
    CHECK(rel_err(cycle_var({a, b}), up + down) < 1e-10);

    const auto m = cycle_moments({1.0, -1.0});
    CHECK(m.mean == doctest::Approx(5.99062932466).epsilon(1e-10));
    const auto o = ode_passage(-1.0, 1.0);
    CHECK(rel_err(m.variance, 2.0 * o.variance) < 1e-5);
}

TEST_CASE("grid properties") {
    double worst_identity = 0.0;
    for (int i = 0; i <= 30; ++i) {
        const double a = 0.1 * i;
        double prev_b_mean = -1.0;
        for (int j = 0; j <= 60; ++j) {
            const double b = a - 0.1 * j;
            if (b < -3.0 - 1e-12) break;
            const auto m = cycle_moments({a, b});
            CHECK(m.mean >= 0.0);
            CHECK(m.variance >= 0.0);
            // Lowering b lengthens the cycle.
            if (j > 0) CHECK(m.mean > prev_b_mean);
            prev_b_mean = m.mean;
            if (i > 0) CHECK(m.mean > cycle_mean({a - 0.1, std::min(b, a - 0.1)}) - (b > a - 0.1 ? 1e-12 : 0.0));
            if (a != b) {
                const double split = (phi1(-b) - phi1(-a)) + (phi1(a) - phi1(b));
                worst_identity = std::max(worst_identity, rel_err(m.mean, split));
            }
        }
    }
    CHECK(worst_identity < 1e-12);
}
