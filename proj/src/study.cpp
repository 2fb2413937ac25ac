#include "ouhf/study.hpp"

#include <cmath>
#include <optional>

#include "ouhf/error.hpp"
#include "ouhf/parallel.hpp"
#include "ouhf/sim.hpp"

namespace ouhf {

const std::vector<std::string>& study_methods() {
    static const std::vector<std::string> labels{"1MIN-MOM",    "1MIN-MOM-NR", "1MIN-AR",  "1MIN-ARMA-NR",
                                                 "1MIN-MLE",    "TICK-MLE",    "1MIN-MLE-NR", "TICK-MLE-NR",
                                                 "1MIN-RV",     "TICK-RV"};
    return labels;
}

OuFit fit_labelled(const std::string& label, const TickSeries& ticks) {
    const auto dash = label.find('-');
    if (dash == std::string::npos) throw Error(ErrorKind::InvalidArgument, "unknown study method '" + label + "'");
    const std::string grid = label.substr(0, dash);
    std::string name = label.substr(dash + 1);
    for (char& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    const Method m = parse_method(name);
    if (grid == "TICK") return fit(m, ticks);
    if (grid == "1MIN") return fit(m, aggregate_previous_tick(ticks, 390));
    throw Error(ErrorKind::InvalidArgument, "unknown sampling prefix in '" + label + "'");
}

std::vector<MaeRow> run_simstudy(const StudyConfig& cfg) {
    validate(cfg.truth);
    if (cfg.reps == 0) throw Error(ErrorKind::InvalidArgument, "simstudy needs at least one replication");
    const std::size_t nm = cfg.methods.size();
    using RepFits = std::vector<std::optional<OuFit>>;
    const std::vector<RepFits> fits = parallel_map(cfg.reps, cfg.threads, [&](std::size_t rep) {
        const SimConfig sc{cfg.truth, sample_poisson_grid(cfg.expected_count, cfg.seed, rep), cfg.seed, rep};
        const SimPath path = simulate(sc);
        RepFits out(nm);
        for (std::size_t k = 0; k < nm; ++k) {
            try {
                out[k] = fit_labelled(cfg.methods[k], path.observed);
            } catch (const Error&) {
            }
        }
        return out;
    });

    const NoisyOuParams& t = cfg.truth;
    std::vector<MaeRow> rows;
    for (std::size_t k = 0; k < nm; ++k) {
        const std::string& label = cfg.methods[k];
        const bool rv = label.ends_with("-RV");
        const bool robust = label.ends_with("-NR");
        struct Param {
            const char* name;
            double truth;
            double (*get)(const OuFit&);
            bool wanted;
        };
        const Param params[] = {
            {"mu", t.ou.mu, [](const OuFit& f) { return f.params.ou.mu; }, !rv},
            {"tau", t.ou.tau, [](const OuFit& f) { return f.params.ou.tau; }, !rv},
            {"sigma", std::sqrt(t.ou.sigma2), [](const OuFit& f) { return std::sqrt(f.params.ou.sigma2); }, true},
            {"omega", std::sqrt(t.omega2), [](const OuFit& f) { return std::sqrt(f.params.omega2); }, robust},
        };
        for (const Param& p : params) {
            if (!p.wanted) continue;
            MaeRow row{label, p.name, 0.0, 0, 0};
            for (const RepFits& rep : fits) {
                if (!rep[k]) {
                    ++row.failures;
                    continue;
                }
                row.mae += std::abs(p.get(*rep[k]) - p.truth);
                ++row.reps_used;
            }
            row.mae = row.reps_used ? row.mae / static_cast<double>(row.reps_used) : std::nan("");
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<BiasPoint> bias_curve(const OuParams& p, const std::vector<double>& omega2s,
                                  const std::vector<std::size_t>& ns) {
    std::vector<BiasPoint> out;
    for (double w : omega2s) {
        for (std::size_t n : ns) {
            const MomBias b = predict_mom_bias({p, w}, n);
            out.push_back({w, n, b.tau_x, b.sigma2_x});
        }
    }
    return out;
}

std::vector<SignaturePoint> volatility_signature(const TickSeries& ts, std::size_t max_k, std::size_t threads) {
    if (max_k == 0) throw Error(ErrorKind::InvalidArgument, "max_k must be positive");
    return parallel_map(max_k, threads, [&](std::size_t i) {
        const std::size_t k = i + 1;
        const TickSeries sub = ts.every_kth(k);
        SignaturePoint p;
        p.k = k;
        p.n = sub.size();
        p.rv = realized_variance(sub);
        p.sigma2_mle = mle_fit(sub, false).params.ou.sigma2;
        p.sigma2_mle_nr = mle_fit(sub, true).params.ou.sigma2;
        return p;
    });
}

}  // namespace ouhf
