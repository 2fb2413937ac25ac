#include "ouhf/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ouhf/backtest.hpp"
#include "ouhf/error.hpp"
#include "ouhf/estimate.hpp"
#include "ouhf/forecast.hpp"
#include "ouhf/ingest.hpp"
#include "ouhf/io.hpp"
#include "ouhf/parallel.hpp"
#include "ouhf/signal.hpp"
#include "ouhf/sim.hpp"
#include "ouhf/study.hpp"

namespace ouhf::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Writes to the given stream for "-", otherwise to a file.
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) {
        if (path.empty() || path == "-") {
            os_ = &fallback;
            return;
        }
        if (const fs::path parent = fs::path(path).parent_path(); !parent.empty()) fs::create_directories(parent);
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw Error(ErrorKind::Io, "cannot write " + path);
        os_ = file_.get();
    }
    std::ostream& operator*() { return *os_; }

private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_ = nullptr;
};

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
    return in;
}

double parse_real(const std::string& s) {
    if (s == "inf" || s == "Inf" || s == "infinity") return kInf;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != s.size() || s.empty()) throw Error(ErrorKind::InvalidArgument, "'" + s + "' is not a number");
    return v;
}

// Comma-separated values, or start:stop:step.
std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (std::count(text.begin(), text.end(), ':') == 2) {
        const auto c1 = text.find(':');
        const auto c2 = text.find(':', c1 + 1);
        const double start = parse_real(text.substr(0, c1));
        const double stop = parse_real(text.substr(c1 + 1, c2 - c1 - 1));
        const double step = parse_real(text.substr(c2 + 1));
        if (!(step > 0.0) || stop < start) throw Error(ErrorKind::InvalidArgument, "bad range '" + text + "'");
        const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
        for (std::size_t i = 0; i <= n; ++i) out.push_back(start + step * static_cast<double>(i));
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!item.empty()) out.push_back(parse_real(item));
    }
    if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty list '" + text + "'");
    return out;
}

std::vector<double> log_space(double lo, double hi, std::size_t points) {
    if (!(lo > 0.0) || !(hi >= lo) || points == 0) throw Error(ErrorKind::InvalidArgument, "bad log-spaced range");
    std::vector<double> v(points);
    for (std::size_t i = 0; i < points; ++i) {
        const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
        v[i] = lo * std::pow(hi / lo, f);
    }
    return v;
}

std::string real_text(double v) { return std::isinf(v) ? "inf" : format_double(v); }

struct Global {
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    std::string output_dir = ".";

    std::size_t workers() const { return threads == 0 ? default_threads() : threads; }
};

Metadata make_meta(const CLI::App& sub, const Global& g) {
    return {sub.get_name(), g.seed, sub.config_to_str(true, false)};
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
    double mu = 1.0, tau = 10.0, sigma2 = 1e-4, omega2 = 1e-8;
    std::string grid = "poisson";
    std::size_t n = 23400;
    std::uint64_t path = 0;
    std::optional<double> p0;
    std::string output = "-";
    std::string latent;
};

void cmd_simulate(const SimulateOpts& o, const Global& g, const CLI::App& sub, std::ostream& out) {
    SimConfig cfg;
    cfg.params = {{o.mu, o.tau, o.sigma2}, o.omega2};
    cfg.grid = o.grid == "equidistant" ? equidistant_grid(o.n) : sample_poisson_grid(o.n, g.seed, o.path);
    cfg.seed = g.seed;
    cfg.path = o.path;
    if (o.p0) cfg.init = FixedStart{*o.p0};
    const SimPath p = simulate(cfg);
    const Metadata meta = make_meta(sub, g);
    Output obs(o.output, out);
    write_metadata_comment(*obs, meta);
    write_tick_series(*obs, p.observed);
    if (!o.latent.empty()) {
        Output lat(o.latent, out);
        write_metadata_comment(*lat, meta);
        write_tick_series(*lat, p.latent);
    }
}

// ---------------------------------------------------------------------------

struct CleanOpts {
    std::string input;
    std::string leg_b;
    std::string exchange = "N";
    std::string output = "-";
    std::string report;
};

json report_json(const CleanReport& r) {
    json j{{"input", r.input}, {"retained", r.retained}};
    for (std::size_t k = 0; k < r.deleted.size(); ++k) j["deleted"][std::string(kCleanRuleNames[k])] = r.deleted[k];
    return j;
}

void cmd_clean(const CleanOpts& o, const Global& g, const CLI::App& sub, std::ostream& out) {
    auto in = open_input(o.input);
    const CleanResult a = clean(read_raw_ticks(in), o.exchange);
    json rep = report_json(a.report);
    TickSeries result = a.series;
    if (!o.leg_b.empty()) {
        auto in_b = open_input(o.leg_b);
        const CleanResult b = clean(read_raw_ticks(in_b), o.exchange);
        result = build_spread(a.series, b.series);
        rep = json{{"leg_a", rep}, {"leg_b", report_json(b.report)}, {"spread_size", result.size()}};
    }
    const Metadata meta = make_meta(sub, g);
    Output dst(o.output, out);
    write_metadata_comment(*dst, meta);
    write_tick_series(*dst, result);
    if (!o.report.empty()) {
        Output r(o.report, out);
        json j = metadata_json(meta);
        j["report"] = rep;
        *r << j.dump(2) << '\n';
    }
}

// ---------------------------------------------------------------------------

struct EstimateOpts {
    std::string method = "mle-nr";
    std::vector<std::string> inputs;
    std::string grid = "tick";
    double jump_frac = 0.0;
    std::vector<std::int64_t> days;
    std::string output = "-";
};

void cmd_estimate(const EstimateOpts& o, const Global& g, const CLI::App& sub, std::ostream& out) {
    const Method method = parse_method(o.method);
    if (!o.days.empty() && o.days.size() != o.inputs.size()) {
        throw Error(ErrorKind::InvalidArgument, "--day must be given once per input");
    }
    const std::vector<json> records = parallel_map(o.inputs.size(), g.workers(), [&](std::size_t i) {
        json rec;
        rec["day"] = o.days.empty() ? static_cast<std::int64_t>(i) : o.days[i];
        rec["input"] = o.inputs[i];
        try {
            TickSeries ts = read_tick_series_file(o.inputs[i]);
            rec["open"] = ts.value(0);
            if (o.jump_frac > 0.0) {
                const JumpFilterResult jr = remove_jump_outliers(ts, auto_initial(ts), o.jump_frac);
                rec["removed"] = jr.removed.size();
                ts = jr.kept;
            }
            if (o.grid == "1min") ts = aggregate_previous_tick(ts, 390);
            rec.update(to_json(fit(method, ts)));
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Io || e.kind() == ErrorKind::Schema) throw;
            rec["error"] = {{"kind", std::string(to_string(e.kind()))}, {"message", e.what()}};
        }
        return rec;
    });
    Output dst(o.output, out);
    *dst << metadata_json(make_meta(sub, g)).dump() << '\n';
    for (const json& r : records) *dst << r.dump() << '\n';
}

// ---------------------------------------------------------------------------

struct FitRecord {
    std::int64_t day = 0;
    std::string input;
    std::optional<OuParams> params;
    double open = 0.0;
};

std::vector<FitRecord> read_fit_records(const std::string& path) {
    auto in = open_input(path);
    std::vector<FitRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::Schema, path + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (j.contains("meta")) continue;
        if (!j.contains("day")) throw Error(ErrorKind::Schema, path + ":" + std::to_string(line_no) + ": record lacks 'day'");
        FitRecord r;
        r.day = j.at("day").get<std::int64_t>();
        r.input = j.value("input", std::string{});
        r.open = j.contains("open") && j.at("open").is_number() ? j.at("open").get<double>() : std::nan("");
        if (!j.contains("error")) {
            const OuFit f = fit_from_json(j);
            if (is_valid(f.params.ou) && f.params.ou.sigma2 > 0.0 && std::isfinite(r.open)) r.params = f.params.ou;
        }
        out.push_back(std::move(r));
    }
    std::stable_sort(out.begin(), out.end(), [](const FitRecord& a, const FitRecord& b) { return a.day < b.day; });
    return out;
}

struct ForecastOpts {
    std::string input;
    std::size_t window = kDefaultWindow;
    std::optional<double> next_open;
    std::string output = "-";
};

void cmd_forecast(const ForecastOpts& o, const Global& g, const CLI::App& sub, std::ostream& out) {
    DailyParamHistory hist;
    for (const FitRecord& r : read_fit_records(o.input))
        if (r.params) hist.push_back(r.day, *r.params, r.open);
    const std::size_t train = o.window + kHarLags;
    if (hist.size() < train) {
        throw Error(ErrorKind::InsufficientData,
                    "forecasting needs " + std::to_string(train) + " estimated days, got " + std::to_string(hist.size()));
    }
    Output dst(o.output, out);
    write_metadata_comment(*dst, make_meta(sub, g));
    *dst << "day,mu,tau,sigma2\n";
    const auto emit = [&](std::int64_t day, const OuParams& p) {
        *dst << day << ',' << format_double(p.mu) << ',' << format_double(p.tau) << ',' << format_double(p.sigma2) << '\n';
    };
    for (std::size_t j = train; j < hist.size(); ++j) {
        const DailyParamHistory past = hist.slice(j - train, train);
        emit(hist.days[j], forecast_day(fit_models(past, o.window), past, hist.open_value[j]));
    }
    if (o.next_open) {
        const DailyParamHistory past = hist.slice(hist.size() - train, train);
        emit(hist.days.back() + 1, forecast_day(fit_models(past, o.window), past, *o.next_open));
    }
}

// ---------------------------------------------------------------------------

struct OptimizeOpts {
    double mu = 1.0, tau = 10.0, sigma2 = 1e-4, cost = 0.0015;
    std::string eta = "inf";
};

void cmd_optimize(const OptimizeOpts& o, const Global& g, const CLI::App& sub, std::ostream& out) {
    const OuParams p{o.mu, o.tau, o.sigma2};
    const double eta = parse_real(o.eta);
    const OptimalPolicy opt = optimal_policy(p, o.cost, eta);
    const OptResult& d = opt.dimensionless;
    const auto num = [](double v) { return std::isfinite(v) ? json(v) : json("inf"); };
    json j = metadata_json(make_meta(sub, g));
    j["trade"] = d.trade;
    j["binding"] = d.binding;
    j["dimensionless"] = {{"a", d.levels.a_t}, {"b", d.levels.b_t}, {"c", d.c_t},        {"eta", num(d.eta_t)},
                          {"z_m", d.z_m_star},  {"z_v", d.z_v_at_opt}};
    j["original"] = {{"a", opt.policy.a}, {"b", opt.policy.b}, {"c", opt.policy.c},      {"eta", num(eta)},
                     {"z_m", opt.moments.z_m}, {"z_v", opt.moments.z_v}};
    out << j.dump(2) << '\n';
}

struct FrontierOpts {
    double mu = 1.0, tau = 10.0, sigma2 = 1e-4, cost = 0.0015;
    double eta_min = 1e-2, eta_max = 1e2;
    std::size_t points = 20;
    std::optional<double> biased_tau;
    std::string output = "-";
};

void cmd_frontier(const FrontierOpts& o, const Global& g, const CLI::App& sub, std::ostream& out) {
    const OuParams p{o.mu, o.tau, o.sigma2};
    const std::vector<double> grid_t = log_space(o.eta_min, o.eta_max, o.points);
    Output dst(o.output, out);
    write_metadata_comment(*dst, make_meta(sub, g));
    *dst << "eta,z_m_star,a_star,b_star,eta_t,z_m_star_t,a_star_t,b_star_t";
    if (o.biased_tau) *dst << ",claimed_z_m,actual_z_m";
    *dst << '\n';
    const std::vector<std::string> lines = parallel_map(grid_t.size(), g.workers(), [&](std::size_t i) {
        const double eta = 0.5 * p.sigma2 * grid_t[i];
        const OptimalPolicy opt = optimal_policy(p, o.cost, eta);
        std::string line = format_double(eta) + ',' + format_double(opt.moments.z_m) + ',' + format_double(opt.policy.a) +
                           ',' + format_double(opt.policy.b) + ',' + format_double(grid_t[i]) + ',' +
                           format_double(opt.dimensionless.z_m_star) + ',' + format_double(opt.dimensionless.levels.a_t) +
                           ',' + format_double(opt.dimensionless.levels.b_t);
        if (o.biased_tau) {
            const BiasImpact b = bias_impact(p, {p.mu, *o.biased_tau, p.sigma2}, o.cost, eta);
            line += ',' + format_double(b.claimed_z_m) + ',' + format_double(b.actual_z_m);
        }
        return line;
    });
    for (const auto& l : lines) *dst << l << '\n';
}

// ---------------------------------------------------------------------------

struct BacktestOpts {
    std::string config;
    std::optional<double> cost;
    std::string eta;
    std::string zeta;
    std::optional<std::size_t> history;
};

std::vector<DayData> load_pair(const std::string& fits_path) {
    const fs::path base = fs::path(fits_path).parent_path();
    std::vector<DayData> days;
    for (const FitRecord& r : read_fit_records(fits_path)) {
        if (r.input.empty()) throw Error(ErrorKind::Schema, fits_path + ": record for day " + std::to_string(r.day) + " lacks 'input'");
        fs::path spread = r.input;
        if (spread.is_relative() && !fs::exists(spread)) spread = base / spread;
        days.push_back({r.day, r.params, read_tick_series_file(spread)});
    }
    return days;
}

void cmd_backtest(const BacktestOpts& o, const Global& g, const CLI::App& sub, std::ostream& out) {
    std::map<std::string, std::string> kv;
    if (!o.config.empty()) {
        auto in = open_input(o.config);
        kv = read_key_values(in);
    }
    const auto get = [&](const std::string& key, const std::string& def) {
        const auto it = kv.find(key);
        return it == kv.end() ? def : it->second;
    };
    SweepConfig cfg;
    cfg.cost = o.cost ? *o.cost : parse_real(get("cost", "0.0015"));
    cfg.etas = parse_grid(!o.eta.empty() ? o.eta : get("eta", "1e-5,5e-5,inf"));
    cfg.zetas = parse_grid(!o.zeta.empty() ? o.zeta : get("zeta", "0"));
    cfg.history = o.history ? *o.history : static_cast<std::size_t>(parse_real(get("history", "132")));
    std::vector<std::string> pairs;
    {
        std::stringstream ss(get("pairs", ""));
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) pairs.push_back(item);
    }
    if (pairs.empty()) throw Error(ErrorKind::InvalidArgument, "config lists no pairs");
    const fs::path config_dir = o.config.empty() ? fs::path{} : fs::path(o.config).parent_path();
    std::vector<std::string> paths;
    for (const auto& p : pairs) {
        const std::string v = get("data." + p, "");
        if (v.empty()) throw Error(ErrorKind::InvalidArgument, "config lacks data." + p);
        fs::path path = v;
        if (path.is_relative()) path = config_dir / path;
        paths.push_back(path.string());
    }

    std::ostringstream canon;
    canon << sub.config_to_str(true, false);
    for (const auto& [k, v] : kv) canon << k << '=' << v << '\n';
    const Metadata meta{sub.get_name(), g.seed, canon.str()};

    const std::vector<BacktestReport> reports = parallel_map(pairs.size(), g.workers(), [&](std::size_t i) {
        return run_backtest(pairs[i], load_pair(paths[i]), cfg);
    });

    fs::create_directories(g.output_dir);
    Output report((fs::path(g.output_dir) / "report.csv").string(), out);
    write_metadata_comment(*report, meta);
    *report << "pair,zeta,eta,avg_daily_profit,avg_daily_trades,total_profit,traded_days,days\n";
    for (const auto& rep : reports) {
        for (const auto& r : rep.rows) {
            *report << r.pair << ',' << format_double(r.zeta) << ',' << real_text(r.eta) << ','
                    << format_double(r.avg_daily_profit) << ',' << format_double(r.avg_daily_trades) << ','
                    << format_double(r.total_profit) << ',' << r.traded_days << ',' << r.days << '\n';
        }
    }
    Output trades((fs::path(g.output_dir) / "trades.csv").string(), out);
    write_metadata_comment(*trades, meta);
    *trades << "pair,day,eta,z_m_star,a,b,direction,entry_time,exit_time,entry_value,exit_value,pnl,forced\n";
    for (const auto& rep : reports) {
        for (const auto& [eta, d] : rep.day_results) {
            for (const Trade& t : d.trades) {
                *trades << d.pair << ',' << d.day << ',' << real_text(eta) << ',' << format_double(d.z_m_star) << ','
                        << format_double(d.policy.a) << ',' << format_double(d.policy.b) << ',' << t.direction << ','
                        << format_double(t.entry_time) << ',' << format_double(t.exit_time) << ','
                        << format_double(t.entry_value) << ',' << format_double(t.exit_value) << ','
                        << format_double(t.pnl) << ',' << (t.forced ? 1 : 0) << '\n';
            }
        }
    }
}

// ---------------------------------------------------------------------------

struct SimstudyOpts {
    double mu = 1.0, tau = 10.0, sigma2 = 1e-4, omega2 = 1e-8;
    std::size_t reps = 50;
    std::size_t n = 23400;
    std::vector<std::string> methods;
    std::string output = "-";
};

void cmd_simstudy(const SimstudyOpts& o, const Global& g, const CLI::App& sub, std::ostream& out) {
    StudyConfig cfg;
    cfg.truth = {{o.mu, o.tau, o.sigma2}, o.omega2};
    cfg.reps = o.reps;
    cfg.expected_count = o.n;
    cfg.seed = g.seed;
    cfg.threads = g.workers();
    if (!o.methods.empty()) cfg.methods = o.methods;
    const std::vector<MaeRow> rows = run_simstudy(cfg);
    Output dst(o.output, out);
    write_metadata_comment(*dst, make_meta(sub, g));
    for (const MaeRow& r : rows)
        if (r.failures > 0) *dst << "# failures " << r.method << ' ' << r.param << ": " << r.failures << '\n';
    *dst << "method,param,mae\n";
    for (const MaeRow& r : rows) *dst << r.method << ',' << r.param << ',' << format_double(r.mae) << '\n';
}

struct BiasplotOpts {
    double tau = 10.0, sigma2 = 1e-4;
    std::string omega2 = "0,1e-9,1e-8,1e-7";
    double n_min = 10, n_max = 100000;
    std::size_t points = 41;
    std::string output = "-";
};

void cmd_biasplot(const BiasplotOpts& o, const Global& g, const CLI::App& sub, std::ostream& out) {
    std::vector<std::size_t> ns;
    for (double v : log_space(o.n_min, o.n_max, o.points)) {
        const auto n = static_cast<std::size_t>(std::llround(v));
        if (ns.empty() || n != ns.back()) ns.push_back(n);
    }
    const auto rows = bias_curve({0.0, o.tau, o.sigma2}, parse_grid(o.omega2), ns);
    Output dst(o.output, out);
    write_metadata_comment(*dst, make_meta(sub, g));
    *dst << "omega2,n,tau_x,sigma2_x\n";
    for (const auto& r : rows) {
        *dst << format_double(r.omega2) << ',' << r.n << ',' << format_double(r.tau_x) << ',' << format_double(r.sigma2_x)
             << '\n';
    }
}

struct SignatureOpts {
    std::string input;
    double mu = 1.0, tau = 10.0, sigma2 = 1e-4, omega2 = 1e-8;
    std::size_t n = 23400;
    std::size_t max_k = 30;
    std::string output = "-";
};

void cmd_signature(const SignatureOpts& o, const Global& g, const CLI::App& sub, std::ostream& out) {
    TickSeries ts;
    if (!o.input.empty()) {
        ts = read_tick_series_file(o.input);
    } else {
        SimConfig cfg{{{o.mu, o.tau, o.sigma2}, o.omega2}, sample_poisson_grid(o.n, g.seed), g.seed};
        ts = simulate(cfg).observed;
    }
    const auto rows = volatility_signature(ts, o.max_k, g.workers());
    Output dst(o.output, out);
    write_metadata_comment(*dst, make_meta(sub, g));
    *dst << "k,n,sigma2_mle,sigma2_mle_nr,rv\n";
    for (const auto& r : rows) {
        *dst << r.k << ',' << r.n << ',' << format_double(r.sigma2_mle) << ',' << format_double(r.sigma2_mle_nr) << ','
             << format_double(r.rv) << '\n';
    }
}

void add_ou_options(CLI::App* s, double& mu, double& tau, double& sigma2) {
    s->add_option("--mu", mu, "Long-term mean")->capture_default_str();
    s->add_option("--tau", tau, "Reversion speed per day")->capture_default_str()->check(CLI::PositiveNumber);
    s->add_option("--sigma2", sigma2, "Instantaneous variance per day")->capture_default_str()->check(CLI::NonNegativeNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Noisy Ornstein-Uhlenbeck estimation and pairs-trading signals", "ouhf"};
    app.require_subcommand(1);
    Global g;
    app.add_option("--seed", g.seed, "Random seed recorded in every output")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
    app.add_option("--output-dir", g.output_dir, "Directory for multi-file outputs")->capture_default_str();

    SimulateOpts sim;
    auto* s_sim = app.add_subcommand("simulate", "Simulate a noisy OU path");
    add_ou_options(s_sim, sim.mu, sim.tau, sim.sigma2);
    s_sim->add_option("--omega2", sim.omega2, "Noise variance")->capture_default_str()->check(CLI::NonNegativeNumber);
    s_sim->add_option("--grid", sim.grid, "Sampling grid")->capture_default_str()->check(CLI::IsMember({"equidistant", "poisson"}));
    s_sim->add_option("--n", sim.n, "Intervals (equidistant) or expected count (poisson)")->capture_default_str()->check(CLI::Range(2, 100000000));
    s_sim->add_option("--path", sim.path, "Path index for the random stream")->capture_default_str();
    s_sim->add_option("--p0", sim.p0, "Fixed latent start instead of the stationary draw");
    s_sim->add_option("--output,-o", sim.output, "Observed series CSV")->capture_default_str();
    s_sim->add_option("--latent", sim.latent, "Also write the latent series here");

    CleanOpts cl;
    auto* s_clean = app.add_subcommand("clean", "Clean raw trades (and build a spread with --leg-b)");
    s_clean->add_option("--input,-i", cl.input, "Raw tick CSV")->required();
    s_clean->add_option("--leg-b", cl.leg_b, "Second leg raw tick CSV; output becomes ln A - ln B");
    s_clean->add_option("--exchange", cl.exchange, "Primary exchange code")->capture_default_str();
    s_clean->add_option("--output,-o", cl.output, "Cleaned series CSV")->capture_default_str();
    s_clean->add_option("--report", cl.report, "Per-rule deletion counts as JSON");

    EstimateOpts est;
    auto* s_est = app.add_subcommand("estimate", "Estimate OU parameters from series CSVs");
    s_est->add_option("--method", est.method, "Estimator")->capture_default_str()->check(
        CLI::IsMember({"mom", "mom-nr", "ar", "arma-nr", "mle", "mle-nr", "rv"}));
    s_est->add_option("--input,-i", est.inputs, "Series CSV (repeatable)")->required();
    s_est->add_option("--grid", est.grid, "Use all ticks or the one-minute previous-tick series")->capture_default_str()->check(
        CLI::IsMember({"tick", "1min"}));
    s_est->add_option("--jump-frac", est.jump_frac, "Fraction of lowest-likelihood observations removed first")
        ->capture_default_str()->check(CLI::Range(0.0, 0.49));
    s_est->add_option("--day", est.days, "Day label per input (repeatable)");
    s_est->add_option("--output,-o", est.output, "JSON lines output")->capture_default_str();

    ForecastOpts fc;
    auto* s_fc = app.add_subcommand("forecast", "One-step-ahead parameter forecasts from estimate records");
    s_fc->add_option("--input,-i", fc.input, "JSON lines written by estimate")->required();
    s_fc->add_option("--window", fc.window, "Rolling window in days")->capture_default_str()->check(CLI::Range(23, 100000));
    s_fc->add_option("--next-open", fc.next_open, "Opening value of the day after the last record");
    s_fc->add_option("--output,-o", fc.output, "Forecast CSV")->capture_default_str();

    OptimizeOpts op;
    auto* s_opt = app.add_subcommand("optimize", "Mean-variance optimal entry and exit levels");
    add_ou_options(s_opt, op.mu, op.tau, op.sigma2);
    s_opt->add_option("--cost", op.cost, "Round-trip transaction cost")->capture_default_str()->check(CLI::NonNegativeNumber);
    s_opt->add_option("--eta", op.eta, "Maximum variance of profit per day (inf for none)")->capture_default_str();

    FrontierOpts fr;
    auto* s_fr = app.add_subcommand("frontier", "Efficient frontier over dimensionless variance caps");
    add_ou_options(s_fr, fr.mu, fr.tau, fr.sigma2);
    s_fr->add_option("--cost", fr.cost, "Round-trip transaction cost")->capture_default_str()->check(CLI::NonNegativeNumber);
    s_fr->add_option("--eta-min", fr.eta_min, "Smallest dimensionless cap")->capture_default_str()->check(CLI::PositiveNumber);
    s_fr->add_option("--eta-max", fr.eta_max, "Largest dimensionless cap")->capture_default_str()->check(CLI::PositiveNumber);
    s_fr->add_option("--points", fr.points, "Grid points")->capture_default_str()->check(CLI::Range(1, 10000));
    s_fr->add_option("--biased-tau", fr.biased_tau, "Also report claimed and actual profit when optimizing with this tau");
    s_fr->add_option("--output,-o", fr.output, "Frontier CSV")->capture_default_str();

    BacktestOpts bt;
    auto* s_bt = app.add_subcommand("backtest", "Daily pairs-trading backtest over estimated days");
    s_bt->add_option("--config,-c", bt.config, "Key-value config file")->required();
    s_bt->add_option("--cost", bt.cost, "Override cost");
    s_bt->add_option("--eta", bt.eta, "Override eta list");
    s_bt->add_option("--zeta", bt.zeta, "Override zeta list or start:stop:step");
    s_bt->add_option("--history", bt.history, "Override history length");

    SimstudyOpts ss;
    auto* s_ss = app.add_subcommand("simstudy", "Monte Carlo comparison of estimators");
    add_ou_options(s_ss, ss.mu, ss.tau, ss.sigma2);
    s_ss->add_option("--omega2", ss.omega2, "Noise variance")->capture_default_str()->check(CLI::NonNegativeNumber);
    s_ss->add_option("--reps", ss.reps, "Replications")->capture_default_str()->check(CLI::Range(1, 10000000));
    s_ss->add_option("--n", ss.n, "Expected observations per path")->capture_default_str()->check(CLI::Range(20, 100000000));
    s_ss->add_option("--methods", ss.methods, "Subset of method labels");
    s_ss->add_option("--output,-o", ss.output, "MAE CSV")->capture_default_str();

    BiasplotOpts bp;
    auto* s_bp = app.add_subcommand("biasplot", "Limits of the noise-sensitive moment estimator versus n");
    s_bp->add_option("--tau", bp.tau, "Reversion speed")->capture_default_str()->check(CLI::PositiveNumber);
    s_bp->add_option("--sigma2", bp.sigma2, "Variance")->capture_default_str()->check(CLI::PositiveNumber);
    s_bp->add_option("--omega2", bp.omega2, "Comma-separated noise variances")->capture_default_str();
    s_bp->add_option("--n-min", bp.n_min, "Smallest n")->capture_default_str()->check(CLI::Range(1.0, 1e9));
    s_bp->add_option("--n-max", bp.n_max, "Largest n")->capture_default_str()->check(CLI::Range(1.0, 1e9));
    s_bp->add_option("--points", bp.points, "Log-spaced points")->capture_default_str()->check(CLI::Range(1, 10000));
    s_bp->add_option("--output,-o", bp.output, "CSV output")->capture_default_str();

    SignatureOpts sg;
    auto* s_sg = app.add_subcommand("signature", "Volatility signature: sigma2 from every k-th tick");
    s_sg->add_option("--input,-i", sg.input, "Series CSV (simulated when omitted)");
    add_ou_options(s_sg, sg.mu, sg.tau, sg.sigma2);
    s_sg->add_option("--omega2", sg.omega2, "Noise variance for simulation")->capture_default_str()->check(CLI::NonNegativeNumber);
    s_sg->add_option("--n", sg.n, "Expected observations for simulation")->capture_default_str()->check(CLI::Range(20, 100000000));
    s_sg->add_option("--max-k", sg.max_k, "Largest subsampling interval")->capture_default_str()->check(CLI::Range(1, 100000));
    s_sg->add_option("--output,-o", sg.output, "CSV output")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: usage: " << e.what() << '\n';
        return 2;
    }

    try {
        if (*s_sim) cmd_simulate(sim, g, *s_sim, out);
        else if (*s_clean) cmd_clean(cl, g, *s_clean, out);
        else if (*s_est) cmd_estimate(est, g, *s_est, out);
        else if (*s_fc) cmd_forecast(fc, g, *s_fc, out);
        else if (*s_opt) cmd_optimize(op, g, *s_opt, out);
        else if (*s_fr) cmd_frontier(fr, g, *s_fr, out);
        else if (*s_bt) cmd_backtest(bt, g, *s_bt, out);
        else if (*s_ss) cmd_simstudy(ss, g, *s_ss, out);
        else if (*s_bp) cmd_biasplot(bp, g, *s_bp, out);
        else if (*s_sg) cmd_signature(sg, g, *s_sg, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: internal: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace ouhf::cli
