#include "ouhf/backtest.hpp"

#include <cmath>

#include "ouhf/error.hpp"

namespace ouhf {

void validate(const BacktestConfig& cfg) {
    if (!(cfg.cost >= 0.0) || !std::isfinite(cfg.cost)) throw Error(ErrorKind::InvalidArgument, "cost must be finite and >= 0");
    if (!(cfg.eta > 0.0)) throw Error(ErrorKind::InvalidArgument, "eta must be positive");
    if (!(cfg.zeta >= 0.0)) throw Error(ErrorKind::InvalidArgument, "zeta must be >= 0");
    if (cfg.history < kHarLags + 1) throw Error(ErrorKind::InvalidArgument, "history must be at least 23 days");
}

PlanDecision plan_day(const OuParams& forecast, const BacktestConfig& cfg) {
    validate(cfg);
    PlanDecision d;
    if (!is_valid(forecast) || !(forecast.sigma2 > 0.0)) {
        d.reason = "degenerate forecast";
        return d;
    }
    OptimalPolicy opt;
    try {
        opt = optimal_policy(forecast, cfg.cost, cfg.eta);
    } catch (const Error& e) {
        d.reason = std::string("optimizer: ") + e.what();
        return d;
    }
    if (!opt.dimensionless.trade) {
        d.reason = "no policy with positive expected profit";
        return d;
    }
    d.z_m_star = opt.moments.z_m;
    if (!(d.z_m_star >= cfg.zeta)) {
        d.reason = "expected profit below threshold";
        return d;
    }
    d.plan = TradePlan{forecast, opt.policy, opt.moments};
    return d;
}

DayResult execute_day(const PlanDecision& decision, const TickSeries& spread) {
    DayResult r;
    r.z_m_star = decision.z_m_star;
    if (!decision.plan) return r;
    r.traded = true;
    const SignalPolicy& pol = decision.plan->policy;
    r.policy = pol;
    const std::size_t last = spread.size() - 1;
    int position = 0;
    Trade open;
    const auto close = [&](std::size_t i, bool forced) {
        const double x = spread.value(i);
        open.exit_index = i;
        open.exit_time = spread.time(i);
        open.exit_value = x;
        open.pnl = open.direction * (x - open.entry_value) - pol.c;
        open.forced = forced;
        r.profit += open.pnl;
        if (forced) r.forced_close_pnl += open.pnl;
        r.trades.push_back(open);
        position = 0;
    };
    const auto enter = [&](std::size_t i, int direction) {
        open = Trade{};
        open.entry_index = i;
        open.entry_time = spread.time(i);
        open.entry_value = spread.value(i);
        open.direction = direction;
        position = direction;
    };
    for (std::size_t i = 0; i <= last; ++i) {
        const double x = spread.value(i);
        const bool upper = x >= pol.a;
        const bool lower = x <= pol.b;
        if (i == last) {
            if (position != 0) close(i, !(position < 0 ? lower : upper));
            break;
        }
        if (position == 0) {
            if (upper) enter(i, -1);
            else if (lower) enter(i, +1);
        } else if (position < 0 && lower) {
            close(i, false);
            enter(i, +1);
        } else if (position > 0 && upper) {
            close(i, false);
            enter(i, -1);
        }
    }
    r.n_trades = r.trades.size();
    return r;
}

OuParams forecast_from_view(const PlanningView& view, std::size_t history) {
    const std::size_t need = history + kHarLags;
    if (view.past.size() < need) throw Error(ErrorKind::InvalidHistory, "not enough estimated days to forecast");
    const DailyParamHistory tail = view.past.slice(view.past.size() - need, need);
    const ForecastModels m = fit_models(tail, history);
    return forecast_day(m, tail, view.today_open);
}

BacktestReport run_backtest(const std::string& pair, const std::vector<DayData>& days, const SweepConfig& cfg) {
    validate(BacktestConfig{cfg.cost, 1.0, 0.0, cfg.history});
    if (cfg.etas.empty() || cfg.zetas.empty()) throw Error(ErrorKind::InvalidArgument, "empty eta or zeta grid");
    BacktestReport rep;
    const std::size_t required = cfg.history + kHarLags + 1;

    DailyParamHistory past;
    std::size_t first = days.size();
    for (std::size_t i = 0; i < days.size(); ++i) {
        if (i > 0 && days[i].day <= days[i - 1].day) throw Error(ErrorKind::InvalidHistory, "days are not increasing");
        if (past.size() >= required && first == days.size()) first = i;
        if (days[i].fit) past.push_back(days[i].day, *days[i].fit, days[i].spread.value(0));
        else ++rep.skipped_fit_failures;
    }
    if (first == days.size()) {
        throw Error(ErrorKind::InvalidHistory, "need " + std::to_string(required) +
                                                   " successfully estimated days before the first evaluated day");
    }
    rep.first_evaluated_day = first;

    struct Executed {
        double eta;
        DayResult result;
    };
    std::vector<Executed> executed;
    std::size_t used = 0;
    for (std::size_t i = 0; i < days.size(); ++i) {
        if (i >= first) {
            // Planning sees estimates of earlier days and the current opening value only.
            PlanningView view{past.slice(0, used), days[i].spread.value(0)};
            const OuParams fc = forecast_from_view(view, cfg.history);
            for (double eta : cfg.etas) {
                const PlanDecision d = plan_day(fc, BacktestConfig{cfg.cost, eta, 0.0, cfg.history});
                DayResult r = execute_day(d, days[i].spread);
                r.pair = pair;
                r.day = days[i].day;
                executed.push_back({eta, std::move(r)});
            }
        }
        if (days[i].fit) ++used;
    }

    const std::size_t n_days = days.size() - first;
    for (double eta : cfg.etas) {
        for (double zeta : cfg.zetas) {
            ReportRow row;
            row.pair = pair;
            row.zeta = zeta;
            row.eta = eta;
            row.days = n_days;
            double trades = 0.0;
            for (const Executed& e : executed) {
                if (e.eta != eta || !e.result.traded || !(e.result.z_m_star >= zeta)) continue;
                ++row.traded_days;
                row.total_profit += e.result.profit;
                trades += static_cast<double>(e.result.n_trades);
            }
            row.avg_daily_profit = row.total_profit / static_cast<double>(n_days);
            row.avg_daily_trades = trades / static_cast<double>(n_days);
            rep.rows.push_back(row);
        }
    }
    for (Executed& e : executed) rep.day_results.emplace_back(e.eta, std::move(e.result));
    return rep;
}

}  // namespace ouhf
