#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "ouhf/model.hpp"

namespace ouhf {

struct RawTick {
    /// Nanoseconds since midnight, exchange local time.
    std::int64_t timestamp = 0;
    double price = 0.0;
    std::string exchange;
    int corr = 0;
    std::string cond;
    std::string suffix;

    friend bool operator==(const RawTick&, const RawTick&) = default;
};

inline constexpr std::int64_t kNanosPerSecond = 1'000'000'000;
inline constexpr std::int64_t kSessionOpen = (9 * 3600 + 30 * 60) * kNanosPerSecond;
inline constexpr std::int64_t kSessionClose = 16 * 3600 * kNanosPerSecond;

/// Parses HH:MM:SS with an optional fraction of up to nine digits. Throws Schema.
[[nodiscard]] std::int64_t parse_timestamp(std::string_view text);
[[nodiscard]] std::string format_timestamp(std::int64_t nanos);

/// CSV with header timestamp,price,exchange,corr,cond,suffix. Throws Schema on malformed rows.
[[nodiscard]] std::vector<RawTick> read_raw_ticks(std::istream& in);
void write_raw_ticks(std::ostream& out, const std::vector<RawTick>& ticks);

enum class CleanRule : std::size_t {
    OtherExchange = 0,
    OutsideSession,
    Corrected,
    AbnormalCondition,
    PreferredOrWarrant,
    MergedTimestamp,
    NonPositivePrice,
    RollingMedianOutlier,
};

inline constexpr std::array<std::string_view, 8> kCleanRuleNames{
    "other_exchange", "outside_session", "corrected",       "abnormal_condition",
    "preferred_or_warrant", "merged_timestamp", "nonpositive_price", "rolling_median_outlier"};

struct CleanReport {
    std::size_t input = 0;
    std::array<std::size_t, 8> deleted{};
    std::size_t retained = 0;

    [[nodiscard]] std::size_t deleted_by(CleanRule r) const { return deleted[static_cast<std::size_t>(r)]; }
};

struct CleanedTicks {
    /// Surviving ticks; merged entries carry the median price and the first entry's other fields.
    std::vector<RawTick> ticks;
    CleanReport report;
};

/// Applies the eight cleaning rules in order without the minimum-size check.
[[nodiscard]] CleanedTicks clean_ticks(const std::vector<RawTick>& ticks, std::string_view primary_exchange);

struct CleanResult {
    /// Times as the fraction of the 9:30-16:00 session, values as log prices.
    TickSeries series;
    CleanReport report;
};

/// clean_ticks followed by conversion; throws InsufficientData with fewer than 10 surviving ticks.
[[nodiscard]] CleanResult clean(const std::vector<RawTick>& ticks, std::string_view primary_exchange);

/// ln A - ln B on the union of event times with last-tick propagation, starting once both legs have traded.
[[nodiscard]] TickSeries build_spread(const TickSeries& a, const TickSeries& b);

struct JumpFilterResult {
    TickSeries kept;
    /// Indices (into the input series) of removed observations, ascending.
    std::vector<std::size_t> removed;
};

/// Drops the floor(frac * n) observations i = 1..n with the lowest conditional log-density at `init`.
[[nodiscard]] JumpFilterResult remove_jump_outliers(const TickSeries& ts, const NoisyOuParams& init, double frac = 0.01);

}  // namespace ouhf
