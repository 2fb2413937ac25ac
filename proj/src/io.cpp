#include "ouhf/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <vector>

#include "ouhf/error.hpp"
#include "ouhf/rng.hpp"

namespace ouhf {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view s, std::size_t line) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorKind::Schema, "line " + std::to_string(line) + ": '" + std::string(s) + "' is not a number");
    }
    return v;
}

double number_or_nan(const nlohmann::json& j, const char* key) {
    if (!j.contains(key)) throw Error(ErrorKind::Schema, std::string("fit record lacks '") + key + "'");
    const auto& v = j.at(key);
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!v.is_number()) throw Error(ErrorKind::Schema, std::string("fit field '") + key + "' is not a number");
    return v.get<double>();
}

}  // namespace

std::string fnv1a_hex(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_metadata_comment(std::ostream& out, const Metadata& meta) {
    out << "# ouhf " << kVersion << '\n'
        << "# command: " << meta.command << '\n'
        << "# seed: " << meta.seed << '\n'
        << "# config_hash: " << fnv1a_hex(meta.config) << '\n'
        << "# rng: " << kRngId << '\n';
}

nlohmann::json metadata_json(const Metadata& meta) {
    return {{"meta",
             {{"tool", "ouhf"},
              {"version", kVersion},
              {"command", meta.command},
              {"seed", meta.seed},
              {"config_hash", fnv1a_hex(meta.config)},
              {"rng", kRngId}}}};
}

TickSeries read_tick_series(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<double> times, values;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        if (!header) {
            if (s != "time,value") throw Error(ErrorKind::Schema, "expected header 'time,value'");
            header = true;
            continue;
        }
        const std::size_t comma = s.find(',');
        if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos) {
            throw Error(ErrorKind::Schema, "line " + std::to_string(line_no) + ": expected two fields");
        }
        times.push_back(parse_double(s.substr(0, comma), line_no));
        values.push_back(parse_double(s.substr(comma + 1), line_no));
    }
    if (!header) throw Error(ErrorKind::Schema, "missing header 'time,value'");
    try {
        return TickSeries(std::move(times), std::move(values));
    } catch (const Error& e) {
        throw Error(ErrorKind::Schema, std::string("invalid series: ") + e.what());
    }
}

void write_tick_series(std::ostream& out, const TickSeries& ts) {
    out << "time,value\n";
    char buf[80];
    for (std::size_t i = 0; i < ts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", ts.time(i), ts.value(i));
        out << buf;
    }
}

TickSeries read_tick_series_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
    return read_tick_series(in);
}

std::string format_double(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ec == std::errc() ? ptr : buf);
}

nlohmann::json to_json(const OuFit& fit) {
    const auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    nlohmann::json j;
    j["method"] = std::string(to_string(fit.method));
    j["mu"] = num(fit.params.ou.mu);
    j["tau"] = num(fit.params.ou.tau);
    j["sigma2"] = num(fit.params.ou.sigma2);
    j["omega2"] = num(fit.params.omega2);
    j["loglik"] = fit.loglik ? num(*fit.loglik) : nlohmann::json(nullptr);
    j["n_used"] = fit.n_used;
    j["converged"] = fit.converged;
    j["diagnostics"] = {{"iterations", fit.diagnostics.iterations},
                        {"evaluations", fit.diagnostics.evaluations},
                        {"final_tolerance", fit.diagnostics.final_tolerance},
                        {"omega2_clamped", fit.diagnostics.omega2_clamped},
                        {"note", fit.diagnostics.note}};
    return j;
}

OuFit fit_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorKind::Schema, "fit record is not an object");
    OuFit f;
    try {
        f.method = parse_method(j.at("method").get<std::string>());
        f.params.ou.mu = number_or_nan(j, "mu");
        f.params.ou.tau = number_or_nan(j, "tau");
        f.params.ou.sigma2 = number_or_nan(j, "sigma2");
        f.params.omega2 = number_or_nan(j, "omega2");
        if (j.contains("loglik") && !j.at("loglik").is_null()) f.loglik = j.at("loglik").get<double>();
        f.n_used = j.value("n_used", std::size_t{0});
        f.converged = j.value("converged", true);
        if (j.contains("diagnostics")) {
            const auto& d = j.at("diagnostics");
            f.diagnostics.iterations = d.value("iterations", std::size_t{0});
            f.diagnostics.evaluations = d.value("evaluations", std::size_t{0});
            f.diagnostics.final_tolerance = d.value("final_tolerance", 0.0);
            f.diagnostics.omega2_clamped = d.value("omega2_clamped", false);
            f.diagnostics.note = d.value("note", std::string{});
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::Schema, std::string("fit record: ") + e.what());
    }
    return f;
}

std::map<std::string, std::string> read_key_values(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view s = line;
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorKind::Schema, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key(trim(s.substr(0, eq)));
        if (key.empty()) throw Error(ErrorKind::Schema, "config line " + std::to_string(line_no) + ": empty key");
        kv[key] = std::string(trim(s.substr(eq + 1)));
    }
    return kv;
}

}  // namespace ouhf
