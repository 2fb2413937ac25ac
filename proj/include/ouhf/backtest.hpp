#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "ouhf/forecast.hpp"
#include "ouhf/model.hpp"
#include "ouhf/signal.hpp"

namespace ouhf {

struct BacktestConfig {
    double cost = 0.0015;
    double eta = std::numeric_limits<double>::infinity();
    double zeta = 0.0;
    std::size_t history = kDefaultWindow;
};

void validate(const BacktestConfig& cfg);

struct TradePlan {
    OuParams forecast;
    SignalPolicy policy;
    StrategyMoments expected;
};

struct PlanDecision {
    std::optional<TradePlan> plan;
    /// Why the day is skipped; empty when trading.
    std::string reason;
    /// Optimal expected profit per day under the forecast (0 for the no-trade sentinel).
    double z_m_star = 0.0;
};

/// Optimizes signals for a forecast and decides whether to trade (Z_M* >= zeta).
[[nodiscard]] PlanDecision plan_day(const OuParams& forecast, const BacktestConfig& cfg);

struct Trade {
    std::size_t entry_index = 0;
    std::size_t exit_index = 0;
    double entry_time = 0.0;
    double exit_time = 0.0;
    /// +1 long spread (entered at the lower level), -1 short spread.
    int direction = 0;
    double entry_value = 0.0;
    double exit_value = 0.0;
    double pnl = 0.0;
    /// Closed at the last tick without reaching the opposite level.
    bool forced = false;
};

struct DayResult {
    std::string pair;
    std::int64_t day = 0;
    bool traded = false;
    std::size_t n_trades = 0;
    double profit = 0.0;
    double forced_close_pnl = 0.0;
    SignalPolicy policy;
    double z_m_star = 0.0;
    std::vector<Trade> trades;
};

/// Two-sided switching execution: short at or above a, long at or below b, switch
/// sides at the opposite level and close any position at the last tick. Each closed
/// position pays the round-trip cost. A skipped plan yields an empty result.
[[nodiscard]] DayResult execute_day(const PlanDecision& decision, const TickSeries& spread);

/// One day of input for a pair. `fit` is empty when estimation failed.
struct DayData {
    std::int64_t day = 0;
    std::optional<OuParams> fit;
    TickSeries spread;
};

/// The only information planning may use: estimates of earlier days and today's opening value.
struct PlanningView {
    DailyParamHistory past;
    double today_open = 0.0;
};

/// Forecast for the day following `view.past` using the trailing `history` days.
[[nodiscard]] OuParams forecast_from_view(const PlanningView& view, std::size_t history);

struct SweepConfig {
    double cost = 0.0015;
    std::vector<double> etas{std::numeric_limits<double>::infinity()};
    std::vector<double> zetas{0.0};
    std::size_t history = kDefaultWindow;
};

struct ReportRow {
    std::string pair;
    double zeta = 0.0;
    double eta = 0.0;
    std::size_t days = 0;
    std::size_t traded_days = 0;
    double total_profit = 0.0;
    double avg_daily_profit = 0.0;
    double avg_daily_trades = 0.0;
};

struct BacktestReport {
    std::vector<ReportRow> rows;
    /// Executed days per eta for the smallest zeta (larger zetas trade a subset).
    std::vector<std::pair<double, DayResult>> day_results;
    std::size_t first_evaluated_day = 0;
    std::size_t skipped_fit_failures = 0;
};

/// Runs the daily loop over `days` (chronological). Days whose estimation failed are
/// left out of the history. Evaluation starts at the first day preceded by at least
/// history + 23 successfully estimated days; throws InvalidHistory when no such day exists.
[[nodiscard]] BacktestReport run_backtest(const std::string& pair, const std::vector<DayData>& days,
                                          const SweepConfig& cfg);

}  // namespace ouhf
