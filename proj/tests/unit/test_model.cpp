#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "ouhf/error.hpp"
#include "ouhf/model.hpp"

using namespace ouhf;
using oracle::rel_err;

namespace {
const OuParams kP{1.0, 10.0, 1e-4};
const NoisyOuParams kNp{kP, 1e-8};
}  // namespace

TEST_CASE("validation rejects bad parameters") {
    CHECK_THROWS_AS(validate(OuParams{0.0, 0.0, 1.0}), Error);
    CHECK_THROWS_AS(validate(OuParams{0.0, 1.0, -1.0}), Error);
    CHECK_THROWS_AS(validate(OuParams{NAN, 1.0, 1.0}), Error);
    CHECK_THROWS_AS(validate(NoisyOuParams{kP, -1e-9}), Error);
    CHECK(is_valid(kNp));
}

TEST_CASE("tick series invariants") {
    CHECK_THROWS_AS(TickSeries({0.0}, {1.0}), Error);
    CHECK_THROWS_AS(TickSeries({0.0, 0.0}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(TickSeries({0.0, 1.5}, {1.0, 2.0}), Error);
    CHECK_THROWS_AS(TickSeries({0.0, 0.5}, {1.0, INFINITY}), Error);
    CHECK_THROWS_AS(TickSeries({0.0, 0.5, 0.7}, {1.0, 2.0}), Error);
    const TickSeries ts({0.0, 0.25, 0.5, 0.75, 1.0}, {1, 2, 3, 4, 5});
    CHECK(ts.every_kth(2).size() == 3);
    CHECK(ts.affine(2.0, 1.0).value(4) == 11.0);
}

TEST_CASE("unconditional moments") {
    const auto m = unconditional_moments(kP, 0.0);
    CHECK(m.mean == 1.0);
    CHECK(rel_err(m.variance, 5e-6) < 1e-15);
    CHECK(rel_err(unconditional_moments(kP, 0.1).autocov, 5e-6 * std::exp(-1.0)) < 1e-14);
    CHECK(unconditional_moments(kP, 1e3).autocov == doctest::Approx(0.0));
}

TEST_CASE("conditional moments") {
    CHECK_THROWS_AS((void)conditional_moments(kP, 1.0, 0.0), Error);
    CHECK_THROWS_AS((void)conditional_moments(kP, 1.0, -1.0), Error);
    for (double t : {0.001, 0.1, 1.0, 10.0}) CHECK(conditional_moments(kP, kP.mu, t).mean == doctest::Approx(kP.mu).epsilon(1e-15));
    const auto far = conditional_moments(kP, 1.05, 100.0);
    CHECK(rel_err(far.mean, 1.0) < 1e-15);
    CHECK(rel_err(far.variance, 5e-6) < 1e-15);
}

TEST_CASE("conditional moments against Euler Monte Carlo") {
    const int paths = 100000;
    const auto mc = oracle::euler_moments(kP, 1.01, 0.05, 1e-4, paths, 7);
    const auto m = conditional_moments(kP, 1.01, 0.05);
    const double se_mean = std::sqrt(m.variance / paths);
    const double se_var = m.variance * std::sqrt(2.0 / (paths - 1));
    CHECK(std::abs(mc.mean - m.mean) < 3.0 * se_mean);
    CHECK(std::abs(mc.variance - m.variance) < 3.0 * se_var);
}

TEST_CASE("noisy unconditional moments") {
    const auto clean = noisy_unconditional_moments({kP, 0.0}, 0.3);
    const auto ref = unconditional_moments(kP, 0.3);
    CHECK(clean.mean == ref.mean);
    CHECK(clean.variance == ref.variance);
    CHECK(clean.autocov == ref.autocov);
    const auto noisy = noisy_unconditional_moments(kNp, 0.3);
    CHECK(rel_err(noisy.variance, 5.01e-6) < 1e-14);
    CHECK(noisy.autocov == ref.autocov);
    const double dt = 1.0 / 23400;
    const double want = std::exp(-10.0 * dt) * 1e-4 / (1e-4 + 2.0 * 10.0 * 1e-8);
    CHECK(rel_err(noisy_autocorrelation(kNp, dt), want) < 1e-14);
}

TEST_CASE("posterior of the initial value") {
    const auto exact = posterior_initial({kP, 0.0}, 1.3);
    CHECK(exact.mean == 1.3);
    CHECK(exact.variance == 0.0);
    const NoisyOuParams sym{{0.0, 2.0, 4.0 * 0.25}, 0.25};
    CHECK(posterior_initial(sym, 0.8).mean == doctest::Approx(0.4).epsilon(1e-15));
    CHECK_THROWS_AS((void)posterior_initial({{0.0, 1.0, 0.0}, 0.0}, 1.0), Error);
    const auto pure_noise = posterior_initial({{0.5, 1.0, 0.0}, 1e-6}, 1.0);
    CHECK(pure_noise.mean == 0.5);
    CHECK(pure_noise.variance == 0.0);
}

TEST_CASE("posterior matches numerical Bayes") {
    const auto g = oracle::grid_posterior(kNp, 1.02);
    const auto m = posterior_initial(kNp, 1.02);
    CHECK(rel_err(m.mean, g.mean) < 1e-6);
    CHECK(rel_err(m.variance, g.variance) < 1e-6);

    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const NoisyOuParams p{{u(eng) * 2.0 - 1.0, std::pow(10.0, u(eng) * 3.0 - 1.0), std::pow(10.0, u(eng) * 4.0 - 6.0)},
                              std::pow(10.0, u(eng) * 4.0 - 10.0)};
        const double x0 = p.ou.mu + std::sqrt(p.ou.sigma2 / (2 * p.ou.tau) + p.omega2) * (u(eng) * 4.0 - 2.0);
        const auto want = oracle::grid_posterior(p, x0);
        const auto got = posterior_initial(p, x0);
        CHECK(rel_err(got.mean, want.mean) < 1e-6);
        CHECK(rel_err(got.variance, want.variance) < 1e-6);
    }
}

TEST_CASE("noisy conditional moments") {
    CHECK_THROWS_AS((void)noisy_conditional_moments(kNp, 1.0, 0.0), Error);
    const double dt = 1.0 / 23400;
    const auto m = noisy_conditional_moments(kNp, 1.001, dt);
    const auto post = posterior_initial(kNp, 1.001);
    const auto step = conditional_moments(kP, post.mean, dt);
    const double e = std::exp(-2.0 * kP.tau * dt);
    CHECK(rel_err(m.mean, step.mean) < 1e-12);
    CHECK(rel_err(m.variance, post.variance * e + step.variance + kNp.omega2) < 1e-12);

    const auto far = noisy_conditional_moments(kNp, 1.05, 1e3);
    CHECK(rel_err(far.mean, 1.0) < 1e-15);
    CHECK(rel_err(far.variance, 5.01e-6) < 1e-14);
}

TEST_CASE("zero noise reduces to the latent transition") {
    for (double dt : {1e-6, 1.0 / 23400, 0.01, 0.3}) {
        for (double x : {0.9, 1.0, 1.004}) {
            const auto a = noisy_conditional_moments({kP, 0.0}, x, dt);
            const auto b = conditional_moments(kP, x, dt);
            CHECK(rel_err(a.mean, b.mean) <= 1e-15);
            CHECK(rel_err(a.variance, b.variance) <= 1e-15);
        }
    }
}

TEST_CASE("variances are non-negative and the posterior is no wider than prior or noise") {
    std::mt19937_64 eng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 500; ++k) {
        const NoisyOuParams p{{u(eng), std::pow(10.0, u(eng) * 6.0 - 3.0), std::pow(10.0, u(eng) * 8.0 - 8.0)},
                              k % 7 == 0 ? 0.0 : std::pow(10.0, u(eng) * 8.0 - 12.0)};
        const double x = u(eng);
        const double dt = std::pow(10.0, u(eng) * 6.0 - 6.0);
        const auto post = posterior_initial(p, x);
        CHECK(post.variance >= 0.0);
        CHECK(post.variance <= std::min(p.ou.sigma2 / (2 * p.ou.tau), p.omega2) * (1 + 1e-15));
        CHECK(conditional_moments(p.ou, x, dt).variance >= 0.0);
        CHECK(noisy_conditional_moments(p, x, dt).variance >= 0.0);
        CHECK(noisy_unconditional_moments(p, dt).variance >= 0.0);
    }
}

TEST_CASE("Chapman-Kolmogorov") {
    std::mt19937_64 eng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        const OuParams p{u(eng) * 2.0, std::pow(10.0, u(eng) * 4.0 - 2.0), std::pow(10.0, u(eng) * 6.0 - 6.0)};
        const double p0 = u(eng) * 2.0, t1 = u(eng) * 0.5 + 1e-4, t2 = u(eng) * 0.5 + 1e-4;
        const auto direct = conditional_moments(p, p0, t1 + t2);
        const auto first = conditional_moments(p, p0, t1);
        const auto second = conditional_moments(p, first.mean, t2);
        const double carry = std::exp(-2.0 * p.tau * t2);
        CHECK(rel_err(second.mean, direct.mean) < 1e-12);
        CHECK(rel_err(carry * first.variance + second.variance, direct.variance) < 1e-12);
    }
}
