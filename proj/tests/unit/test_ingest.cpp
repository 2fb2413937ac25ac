#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "ouhf/error.hpp"
#include "ouhf/estimate.hpp"
#include "ouhf/ingest.hpp"
#include "ouhf/sim.hpp"

using namespace ouhf;
using oracle::rel_err;

namespace {

std::vector<RawTick> fixture() {
    std::ifstream in(oracle::data_dir() / "clean_fixture.csv");
    REQUIRE(in);
    return read_raw_ticks(in);
}

RawTick tick(const char* ts, double price) { return {parse_timestamp(ts), price, "N", 0, "@", ""}; }

std::vector<RawTick> quiet_day(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::normal_distribution<double> z;
    std::vector<RawTick> v;
    double p = 50.0;
    for (std::size_t i = 0; i < n; ++i) {
        p += 0.01 * z(eng);
        v.push_back({kSessionOpen + static_cast<std::int64_t>(i + 1) * 1'000'000'000, p, "N", 0, "@", ""});
    }
    return v;
}

}  // namespace

TEST_CASE("timestamps") {
    CHECK(parse_timestamp("09:30:00") == kSessionOpen);
    CHECK(parse_timestamp("16:00:00.000000000") == kSessionClose);
    CHECK(parse_timestamp("10:00:00.5") == 10 * 3600 * kNanosPerSecond + 500'000'000);
    CHECK(format_timestamp(parse_timestamp("12:34:56.000000789")) == "12:34:56.000000789");
    for (const char* bad : {"9:30:00", "25:00:00", "10:00:00.", "10:00:00.1234567890", "10-00-00", "10:00:0x"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS((void)parse_timestamp(bad), Error);
    }
}

TEST_CASE("csv schema") {
    std::istringstream bad_header("time,price\n");
    CHECK_THROWS_AS((void)read_raw_ticks(bad_header), Error);
    std::istringstream short_row("timestamp,price,exchange,corr,cond,suffix\n10:00:00,1.0,N,0\n");
    CHECK_THROWS_AS((void)read_raw_ticks(short_row), Error);
    std::istringstream bad_price("timestamp,price,exchange,corr,cond,suffix\n10:00:00,abc,N,0,@,\n");
    try {
        (void)read_raw_ticks(bad_price);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Schema);
    }
    const auto ticks = fixture();
    std::ostringstream out;
    write_raw_ticks(out, ticks);
    std::istringstream back(out.str());
    CHECK(read_raw_ticks(back) == ticks);
}

TEST_CASE("golden fixture counts") {
    const auto raw = fixture();
    const auto expected = nlohmann::json::parse(oracle::slurp(oracle::data_dir() / "clean_expected.json"));
    const auto c = clean_ticks(raw, "N");
    CHECK(c.report.input == expected["input"].get<std::size_t>());
    CHECK(c.report.retained == expected["retained"].get<std::size_t>());
    std::size_t total = 0;
    for (std::size_t r = 0; r < kCleanRuleNames.size(); ++r) {
        CAPTURE(kCleanRuleNames[r]);
        CHECK(c.report.deleted[r] == expected["deleted"][std::string(kCleanRuleNames[r])].get<std::size_t>());
        total += c.report.deleted[r];
    }
    CHECK(total + c.report.retained == c.report.input);
    CHECK(c.ticks.size() == c.report.retained);

    const auto again = clean_ticks(c.ticks, "N");
    CHECK(again.ticks == c.ticks);
    for (std::size_t r = 0; r < kCleanRuleNames.size(); ++r) CHECK(again.report.deleted[r] == 0);

    const auto series = clean(raw, "N").series;
    CHECK(series.size() == c.report.retained);
    CHECK(series.time(0) >= 0.0);
    CHECK(series.time(series.size() - 1) <= 1.0);
    CHECK(series.value(0) == std::log(c.ticks.front().price));
}

TEST_CASE("individual rules") {
    auto v = quiet_day(20, 1);
    v.push_back(tick("09:15:00", 50.0));
    auto c = clean_ticks(v, "N");
    CHECK(c.report.deleted_by(CleanRule::OutsideSession) == 1);
    CHECK(c.report.retained == 20);

    std::vector<RawTick> pair{tick("10:00:00", 10.00), tick("10:00:00", 10.02), tick("10:00:01", 10.0)};
    c = clean_ticks(pair, "N");
    REQUIRE(c.ticks.size() == 2);
    CHECK(c.ticks[0].price == doctest::Approx(10.01).epsilon(1e-15));
    CHECK(c.report.deleted_by(CleanRule::MergedTimestamp) == 1);

    std::vector<RawTick> distinct{tick("10:00:00.000000001", 10.0), tick("10:00:00.000000002", 10.1)};
    CHECK(clean_ticks(distinct, "N").ticks.size() == 2);

    std::vector<RawTick> conds{tick("10:00:00", 1), tick("10:00:01", 1), tick("10:00:02", 1), tick("10:00:03", 1)};
    conds[0].cond = "@ E";
    conds[1].cond = "@FI";
    conds[2].cond = "@ T";
    conds[3].suffix = "PR";
    c = clean_ticks(conds, "N");
    CHECK(c.report.deleted_by(CleanRule::AbnormalCondition) == 1);
    CHECK(c.report.deleted_by(CleanRule::PreferredOrWarrant) == 1);
    CHECK(c.report.retained == 2);

    CHECK_THROWS_AS((void)clean(quiet_day(9, 2), "N"), Error);
    CHECK_NOTHROW((void)clean(quiet_day(10, 2), "N"));
}

TEST_CASE("rolling median outlier") {
    auto v = quiet_day(200, 3);
    v[100].price *= 1.05;
    v[3].price *= 0.95;
    const auto c = clean_ticks(v, "N");
    CHECK(c.report.deleted_by(CleanRule::RollingMedianOutlier) == 2);
    CHECK(c.report.retained == 198);

    auto small = quiet_day(50, 4);
    small[25].price *= 1.5;
    CHECK(clean_ticks(small, "N").report.deleted_by(CleanRule::RollingMedianOutlier) == 0);
}

TEST_CASE("spread construction") {
    const TickSeries a({0.1, 0.3}, {1.0, 1.1});
    const TickSeries b({0.2, 0.9}, {0.5, 0.5});
    const auto s = build_spread(a, b);
    REQUIRE(s.size() == 3);
    CHECK(s.time(0) == 0.2);
    CHECK(s.time(1) == 0.3);
    CHECK(s.value(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.value(1) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(s.value(2) == doctest::Approx(0.6).epsilon(1e-15));

    const auto path = simulate({{{1.0, 10.0, 1e-4}, 1e-8}, sample_poisson_grid(2000, 5), 5}).observed;
    const auto zero = build_spread(path, path);
    CHECK(zero.size() == path.size());
    for (double v : zero.values()) CHECK(v == 0.0);

    const auto other = simulate({{{0.0, 3.0, 1e-3}, 0.0}, sample_poisson_grid(1500, 6), 6}).observed;
    const auto mixed = build_spread(path, other);
    std::vector<double> all(path.times().begin(), path.times().end());
    all.insert(all.end(), other.times().begin(), other.times().end());
    std::sort(all.begin(), all.end());
    all.erase(std::unique(all.begin(), all.end()), all.end());
    CHECK(mixed.size() <= all.size());

    CHECK_THROWS_AS((void)build_spread(TickSeries({0.1, 0.2}, {1, 1}), TickSeries({0.3, 0.4}, {1, 1})), Error);
}

TEST_CASE("synchronized legs reproduce the simulated spread") {
    const NoisyOuParams truth{{0.02, 10.0, 1e-4}, 1e-8};
    const auto sp = simulate({truth, equidistant_grid(23400), 7}).observed;
    std::mt19937_64 eng(7);
    std::normal_distribution<double> z;
    std::vector<double> lb(sp.size()), la(sp.size());
    double w = std::log(40.0);
    for (std::size_t i = 0; i < sp.size(); ++i) {
        w += 1e-4 * z(eng);
        lb[i] = w;
        la[i] = w + sp.value(i);
    }
    const std::vector<double> t(sp.times().begin(), sp.times().end());
    const auto built = build_spread(TickSeries(t, la), TickSeries(t, lb));
    REQUIRE(built.size() == sp.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sp.size(); ++i) worst = std::max(worst, std::abs(built.value(i) - sp.value(i)));
    CHECK(worst < 1e-13);
    const auto direct = mom_nr_fit(sp);
    const auto via = mom_nr_fit(built);
    CHECK(rel_err(via.params.ou.tau, direct.params.ou.tau) < 1e-6);
    CHECK(rel_err(via.params.ou.sigma2, direct.params.ou.sigma2) < 1e-6);
}

TEST_CASE("jump removal") {
    const NoisyOuParams truth{{1.0, 10.0, 1e-4}, 1e-8};
    const auto obs = simulate({truth, sample_poisson_grid(23400, 9), 9}).observed;

    const auto same = remove_jump_outliers(obs, truth, 0.0);
    CHECK(same.kept == obs);
    CHECK(same.removed.empty());
    CHECK_THROWS_AS((void)remove_jump_outliers(obs, truth, 0.5), Error);

    SUBCASE("a single planted jump") {
        std::vector<double> v(obs.values().begin(), obs.values().end());
        const std::size_t at = 777;
        for (std::size_t i = at; i < v.size(); ++i) v[i] += 0.01;
        const TickSeries jumped(std::vector<double>(obs.times().begin(), obs.times().end()), v);
        const auto r = remove_jump_outliers(jumped, truth, 1.0 / static_cast<double>(v.size() - 1));
        REQUIRE(r.removed.size() == 1);
        CHECK(r.removed[0] == at);
        CHECK(r.kept.size() == v.size() - 1);
    }

    SUBCASE("one percent of transitions hit by isolated spikes") {
        std::mt19937_64 eng(10);
        std::vector<double> v(obs.values().begin(), obs.values().end());
        const std::size_t n = v.size() - 1;
        std::vector<std::size_t> idx(n - 1);
        std::iota(idx.begin(), idx.end(), std::size_t{1});
        std::shuffle(idx.begin(), idx.end(), eng);
        // Each spike spoils the transitions into and out of it.
        std::vector<char> taken(n + 2, 0);
        std::vector<std::size_t> spikes;
        for (std::size_t i : idx) {
            if (spikes.size() == n / 200) break;
            if (taken[i - 1] || taken[i] || taken[i + 1]) continue;
            taken[i] = 1;
            spikes.push_back(i);
        }
        const double size = 30.0 * std::sqrt(1e-4 / 23400.0 + 2e-8);
        for (std::size_t i : spikes) v[i] += (eng() % 2 ? size : -size);
        const TickSeries jumped(std::vector<double>(obs.times().begin(), obs.times().end()), v);
        const double before = mle_fit(jumped, true).params.ou.sigma2;
        const auto r = remove_jump_outliers(jumped, truth, 0.01);
        std::sort(spikes.begin(), spikes.end());
        std::size_t hit = 0;
        for (std::size_t q : r.removed) hit += std::binary_search(spikes.begin(), spikes.end(), q);
        CHECK(hit == spikes.size());
        const double after = mle_fit(r.kept, true).params.ou.sigma2;
        CHECK(rel_err(before, 1e-4) > 0.5);
        CHECK(rel_err(after, 1e-4) < 0.1);
    }
}
