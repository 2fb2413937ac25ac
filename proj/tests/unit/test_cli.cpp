#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "ouhf/cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run ouhf_run(std::vector<std::string> args) {
    args.insert(args.begin(), "ouhf");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = ouhf::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ouhf_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::string> data_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

bool single_line(const std::string& s) { return !s.empty() && s.find('\n') == s.size() - 1; }

}  // namespace

TEST_CASE("usage and runtime errors") {
    CHECK(ouhf_run({"--help"}).code == 0);

    auto r = ouhf_run({});
    CHECK(r.code == 2);
    CHECK(r.err.rfind("error: usage:", 0) == 0);
    CHECK(single_line(r.err));

    r = ouhf_run({"bogus"});
    CHECK(r.code == 2);
    CHECK(single_line(r.err));

    r = ouhf_run({"simulate", "--tau", "-1"});
    CHECK(r.code == 2);

    r = ouhf_run({"clean", "-i", "/nonexistent/ticks.csv"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: io:", 0) == 0);
    CHECK(single_line(r.err));

    r = ouhf_run({"optimize", "--eta", "abc"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: invalid-argument:", 0) == 0);

    r = ouhf_run({"optimize", "--sigma2", "0"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: degenerate-input:", 0) == 0);
    CHECK(r.out.empty());
}

TEST_CASE("simulate is reproducible and carries metadata") {
    const auto a = ouhf_run({"--seed", "5", "simulate", "--n", "500"});
    REQUIRE(a.code == 0);
    CHECK(a.out.rfind("# ouhf ", 0) == 0);
    CHECK(a.out.find("# seed: 5\n") != std::string::npos);
    CHECK(a.out.find("# config_hash: ") != std::string::npos);
    CHECK(a.out.find("# rng: ") != std::string::npos);
    const auto lines = data_lines(a.out);
    REQUIRE(lines.size() > 100);
    CHECK(lines[0] == "time,value");

    CHECK(ouhf_run({"--seed", "5", "simulate", "--n", "500"}).out == a.out);
    CHECK(ouhf_run({"--seed", "5", "--threads", "3", "simulate", "--n", "500"}).out == a.out);
    CHECK(ouhf_run({"--seed", "6", "simulate", "--n", "500"}).out != a.out);

    const auto eq = ouhf_run({"simulate", "--grid", "equidistant", "--n", "100", "--omega2", "0"});
    CHECK(data_lines(eq.out).size() == 102);

    const fs::path dir = scratch("sim");
    const auto files = ouhf_run({"simulate", "--n", "300", "-o", (dir / "obs.csv").string(), "--latent", (dir / "lat.csv").string()});
    REQUIRE(files.code == 0);
    CHECK(files.out.empty());
    CHECK(data_lines(oracle::slurp(dir / "obs.csv")).size() == data_lines(oracle::slurp(dir / "lat.csv")).size());
}

TEST_CASE("clean reports per-rule counts") {
    const fs::path dir = scratch("clean");
    const auto r = ouhf_run({"clean", "-i", (oracle::data_dir() / "clean_fixture.csv").string(), "-o",
                             (dir / "clean.csv").string(), "--report", (dir / "report.json").string()});
    REQUIRE(r.code == 0);
    const auto rep = json::parse(oracle::slurp(dir / "report.json"));
    const auto expected = json::parse(oracle::slurp(oracle::data_dir() / "clean_expected.json"));
    CHECK(rep["report"]["retained"] == expected["retained"]);
    CHECK(rep["report"]["deleted"] == expected["deleted"]);
    CHECK(rep.contains("meta"));
    CHECK(data_lines(oracle::slurp(dir / "clean.csv")).size() == expected["retained"].get<std::size_t>() + 1);

    const auto spread = ouhf_run({"clean", "-i", (oracle::data_dir() / "clean_fixture.csv").string(), "--leg-b",
                                  (oracle::data_dir() / "clean_fixture.csv").string()});
    REQUIRE(spread.code == 0);
    const auto lines = data_lines(spread.out);
    for (std::size_t i = 1; i < lines.size(); ++i) CHECK(lines[i].substr(lines[i].find(',') + 1) == "0");
}

TEST_CASE("optimize and frontier") {
    const auto r = ouhf_run({"optimize", "--cost", "0.0015", "--eta", "inf"});
    REQUIRE(r.code == 0);
    const auto j = json::parse(r.out);
    CHECK(j["trade"] == true);
    CHECK(j["binding"] == false);
    CHECK(j["dimensionless"]["eta"] == "inf");
    CHECK(std::abs(j["dimensionless"]["a"].get<double>() + j["dimensionless"]["b"].get<double>()) < 1e-5);
    CHECK(j["original"]["a"].get<double>() > 1.0);
    CHECK(j["meta"]["command"] == "optimize");

    const auto f = ouhf_run({"frontier", "--points", "5", "--biased-tau", "15"});
    REQUIRE(f.code == 0);
    const auto lines = data_lines(f.out);
    REQUIRE(lines.size() == 6);
    CHECK(lines[0] == "eta,z_m_star,a_star,b_star,eta_t,z_m_star_t,a_star_t,b_star_t,claimed_z_m,actual_z_m");
    CHECK(ouhf_run({"--threads", "1", "frontier", "--points", "5", "--biased-tau", "15"}).out == f.out);
}

TEST_CASE("study outputs") {
    const auto b = ouhf_run({"biasplot", "--points", "5", "--omega2", "0,1e-8"});
    REQUIRE(b.code == 0);
    CHECK(data_lines(b.out).size() == 11);

    const auto s = ouhf_run({"signature", "--n", "2000", "--max-k", "3"});
    REQUIRE(s.code == 0);
    CHECK(data_lines(s.out).size() == 4);

    const auto m = ouhf_run({"simstudy", "--reps", "3", "--n", "2000", "--methods", "1MIN-MOM", "--methods", "1MIN-MOM-NR"});
    REQUIRE(m.code == 0);
    const auto lines = data_lines(m.out);
    CHECK(lines[0] == "method,param,mae");
    CHECK(lines.size() > 2);
    CHECK(ouhf_run({"simstudy", "--reps", "3", "--n", "2000", "--methods", "1MIN-MOM", "--methods", "1MIN-MOM-NR"}).out == m.out);
}

TEST_CASE("estimate, forecast and backtest pipeline") {
    const fs::path dir = scratch("pipeline");
    const int n_days = 60;
    std::vector<std::string> est{"estimate", "--method", "mom-nr", "-o", (dir / "fits.jsonl").string()};
    for (int d = 0; d < n_days; ++d) {
        const std::string file = (dir / ("day" + std::to_string(d) + ".csv")).string();
        const double mu = 0.01 * std::sin(0.3 * d);
        const auto r = ouhf_run({"--seed", "9", "simulate", "--grid", "equidistant", "--n", "2000", "--path",
                                 std::to_string(d), "--mu", std::to_string(mu), "--omega2", "1e-9", "-o", file});
        REQUIRE(r.code == 0);
        est.insert(est.end(), {"-i", file, "--day", std::to_string(1000 + d)});
    }
    auto r = ouhf_run(est);
    REQUIRE(r.code == 0);
    const auto fits = data_lines(oracle::slurp(dir / "fits.jsonl"));
    REQUIRE(fits.size() == n_days + 1);
    CHECK(json::parse(fits[0]).contains("meta"));
    const auto rec = json::parse(fits[1]);
    CHECK(rec["day"] == 1000);
    CHECK(rec.contains("open"));

    const auto bad = ouhf_run({"estimate", "-i", (dir / "missing.csv").string()});
    CHECK(bad.code == 1);
    CHECK(single_line(bad.err));

    r = ouhf_run({"forecast", "-i", (dir / "fits.jsonl").string(), "--window", "23", "--next-open", "0.0"});
    REQUIRE(r.code == 0);
    auto lines = data_lines(r.out);
    CHECK(lines[0] == "day,mu,tau,sigma2");
    CHECK(lines.size() == 1 + (n_days - 45) + 1);
    CHECK(lines.back().rfind(std::to_string(1000 + n_days) + ",", 0) == 0);
    CHECK(ouhf_run({"forecast", "-i", (dir / "fits.jsonl").string(), "--window", "50"}).code == 1);

    {
        std::ofstream cfg(dir / "bt.cfg");
        cfg << "# pipeline check\ncost = 0.0015\neta = 5e-5, inf\nzeta = 0:0.01:0.005\nhistory = 23\npairs = AB\n"
               "data.AB = fits.jsonl\n";
    }
    const fs::path out1 = dir / "out1", out2 = dir / "out2";
    r = ouhf_run({"--output-dir", out1.string(), "backtest", "-c", (dir / "bt.cfg").string()});
    REQUIRE(r.code == 0);
    lines = data_lines(oracle::slurp(out1 / "report.csv"));
    REQUIRE(lines.size() == 1 + 2 * 3);
    CHECK(lines[0] == "pair,zeta,eta,avg_daily_profit,avg_daily_trades,total_profit,traded_days,days");
    CHECK(lines[1].rfind("AB,0,5e-05,", 0) == 0);
    CHECK(data_lines(oracle::slurp(out1 / "trades.csv"))[0].rfind("pair,day,eta,", 0) == 0);

    r = ouhf_run({"--output-dir", out2.string(), "backtest", "-c", (dir / "bt.cfg").string()});
    REQUIRE(r.code == 0);
    CHECK(oracle::slurp(out1 / "report.csv") == oracle::slurp(out2 / "report.csv"));
    CHECK(oracle::slurp(out1 / "trades.csv") == oracle::slurp(out2 / "trades.csv"));

    r = ouhf_run({"--output-dir", out2.string(), "backtest", "-c", (dir / "bt.cfg").string(), "--zeta", "inf"});
    REQUIRE(r.code == 0);
    lines = data_lines(oracle::slurp(out2 / "report.csv"));
    REQUIRE(lines.size() == 3);
    CHECK(lines[1].find(",0,0,0,0,") != std::string::npos);

    r = ouhf_run({"--output-dir", out2.string(), "backtest", "-c", (dir / "bt.cfg").string(), "--history", "40"});
    CHECK(r.code == 1);
    CHECK(r.err.rfind("error: invalid-history:", 0) == 0);
}
