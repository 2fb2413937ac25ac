#include "ouhf/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>

#include "ouhf/error.hpp"
#include "ouhf/estimate.hpp"

namespace ouhf {
namespace {

constexpr std::size_t kHalfWindow = 25;
constexpr std::size_t kMinWindow = 25;
constexpr double kMadMultiple = 10.0;
constexpr std::size_t kMinClean = 10;

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = line.find(',', pos);
        std::string_view field = line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
        while (!field.empty() && (field.front() == ' ' || field.front() == '"')) field.remove_prefix(1);
        while (!field.empty() && (field.back() == ' ' || field.back() == '"' || field.back() == '\r')) field.remove_suffix(1);
        out.push_back(field);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

double median_of(std::vector<double>& v) {
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    return 0.5 * (hi + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

bool abnormal_condition(std::string_view cond) {
    return std::any_of(cond.begin(), cond.end(), [](char ch) {
        const bool letter = (ch >= 'A' && ch <= 'Z') || (ch >= 'a' && ch <= 'z');
        return letter && ch != 'E' && ch != 'F' && ch != 'I';
    });
}

// Neighbour index range [lo, hi) around i, excluding i itself.
std::pair<std::size_t, std::size_t> neighbour_range(std::size_t i, std::size_t n) {
    const std::size_t left = i;
    const std::size_t right = n - 1 - i;
    std::size_t take_left = std::min({kHalfWindow, left, right});
    std::size_t take_right = take_left;
    if (take_left + take_right < kMinWindow) {
        if (left < right) take_right = kMinWindow - take_left;
        else take_left = kMinWindow - take_right;
    }
    return {i - take_left, i + take_right + 1};
}

}  // namespace

std::int64_t parse_timestamp(std::string_view text) {
    const auto bad = [&] { return Error(ErrorKind::Schema, "malformed timestamp '" + std::string(text) + "'"); };
    if (text.size() < 8 || text[2] != ':' || text[5] != ':') throw bad();
    int h = 0, m = 0, s = 0;
    if (!parse_number(text.substr(0, 2), h) || !parse_number(text.substr(3, 2), m) || !parse_number(text.substr(6, 2), s)) {
        throw bad();
    }
    if (h > 23 || m > 59 || s > 59) throw bad();
    std::int64_t frac = 0;
    if (text.size() > 8) {
        if (text[8] != '.') throw bad();
        const std::string_view digits = text.substr(9);
        if (digits.empty() || digits.size() > 9) throw bad();
        for (char ch : digits) {
            if (ch < '0' || ch > '9') throw bad();
            frac = frac * 10 + (ch - '0');
        }
        for (std::size_t k = digits.size(); k < 9; ++k) frac *= 10;
    }
    return ((static_cast<std::int64_t>(h) * 60 + m) * 60 + s) * kNanosPerSecond + frac;
}

std::string format_timestamp(std::int64_t nanos) {
    const std::int64_t secs = nanos / kNanosPerSecond;
    const std::int64_t frac = nanos % kNanosPerSecond;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02lld:%02lld:%02lld.%09lld", static_cast<long long>(secs / 3600),
                  static_cast<long long>(secs / 60 % 60), static_cast<long long>(secs % 60), static_cast<long long>(frac));
    return buf;
}

std::vector<RawTick> read_raw_ticks(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool header = false;
    std::vector<RawTick> out;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        const auto f = split(line);
        if (!header) {
            static const std::vector<std::string_view> expected{"timestamp", "price", "exchange", "corr", "cond", "suffix"};
            if (f != expected) throw Error(ErrorKind::Schema, "expected header timestamp,price,exchange,corr,cond,suffix");
            header = true;
            continue;
        }
        if (f.size() != 6) {
            throw Error(ErrorKind::Schema, "line " + std::to_string(line_no) + ": expected 6 fields, got " + std::to_string(f.size()));
        }
        RawTick t;
        t.timestamp = parse_timestamp(f[0]);
        if (!parse_number(f[1], t.price) || !std::isfinite(t.price)) {
            throw Error(ErrorKind::Schema, "line " + std::to_string(line_no) + ": bad price");
        }
        t.exchange = std::string(f[2]);
        if (f[3].empty()) t.corr = 0;
        else if (!parse_number(f[3], t.corr)) throw Error(ErrorKind::Schema, "line " + std::to_string(line_no) + ": bad corr");
        t.cond = std::string(f[4]);
        t.suffix = std::string(f[5]);
        out.push_back(std::move(t));
    }
    if (!header) throw Error(ErrorKind::Schema, "missing header");
    return out;
}

void write_raw_ticks(std::ostream& out, const std::vector<RawTick>& ticks) {
    out << "timestamp,price,exchange,corr,cond,suffix\n";
    char buf[64];
    for (const RawTick& t : ticks) {
        std::snprintf(buf, sizeof buf, "%.17g", t.price);
        out << format_timestamp(t.timestamp) << ',' << buf << ',' << t.exchange << ',' << t.corr << ',' << t.cond << ','
            << t.suffix << '\n';
    }
}

CleanedTicks clean_ticks(const std::vector<RawTick>& ticks, std::string_view primary_exchange) {
    CleanedTicks out;
    CleanReport& rep = out.report;
    rep.input = ticks.size();
    const auto drop = [&](std::vector<RawTick>& v, CleanRule rule, auto&& pred) {
        const auto it = std::stable_partition(v.begin(), v.end(), [&](const RawTick& t) { return !pred(t); });
        rep.deleted[static_cast<std::size_t>(rule)] += static_cast<std::size_t>(v.end() - it);
        v.erase(it, v.end());
    };

    std::vector<RawTick> v = ticks;
    drop(v, CleanRule::OtherExchange, [&](const RawTick& t) { return t.exchange != primary_exchange; });
    drop(v, CleanRule::OutsideSession,
         [](const RawTick& t) { return t.timestamp < kSessionOpen || t.timestamp > kSessionClose; });
    drop(v, CleanRule::Corrected, [](const RawTick& t) { return t.corr != 0; });
    drop(v, CleanRule::AbnormalCondition, [](const RawTick& t) { return abnormal_condition(t.cond); });
    drop(v, CleanRule::PreferredOrWarrant, [](const RawTick& t) { return !t.suffix.empty(); });

    std::stable_sort(v.begin(), v.end(), [](const RawTick& a, const RawTick& b) { return a.timestamp < b.timestamp; });
    std::vector<RawTick> merged;
    merged.reserve(v.size());
    std::vector<double> prices;
    for (std::size_t i = 0; i < v.size();) {
        std::size_t j = i;
        prices.clear();
        while (j < v.size() && v[j].timestamp == v[i].timestamp) prices.push_back(v[j++].price);
        RawTick t = v[i];
        t.price = median_of(prices);
        merged.push_back(std::move(t));
        rep.deleted[static_cast<std::size_t>(CleanRule::MergedTimestamp)] += j - i - 1;
        i = j;
    }
    v = std::move(merged);

    drop(v, CleanRule::NonPositivePrice, [](const RawTick& t) { return !(t.price > 0.0); });

    const std::size_t n = v.size();
    if (n >= 2 * kHalfWindow + 1) {
        std::vector<char> outlier(n, 0);
        std::vector<double> window;
        for (std::size_t i = 0; i < n; ++i) {
            const auto [lo, hi] = neighbour_range(i, n);
            window.clear();
            for (std::size_t j = lo; j < hi; ++j)
                if (j != i) window.push_back(v[j].price);
            const double med = median_of(window);
            double mad = 0.0;
            for (std::size_t j = lo; j < hi; ++j)
                if (j != i) mad += std::abs(v[j].price - med);
            mad /= static_cast<double>(window.size());
            if (mad > 0.0 && std::abs(v[i].price - med) > kMadMultiple * mad) outlier[i] = 1;
        }
        std::vector<RawTick> kept;
        kept.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (outlier[i]) ++rep.deleted[static_cast<std::size_t>(CleanRule::RollingMedianOutlier)];
            else kept.push_back(std::move(v[i]));
        }
        v = std::move(kept);
    }

    rep.retained = v.size();
    out.ticks = std::move(v);
    return out;
}

CleanResult clean(const std::vector<RawTick>& ticks, std::string_view primary_exchange) {
    CleanedTicks c = clean_ticks(ticks, primary_exchange);
    if (c.ticks.size() < kMinClean) {
        throw Error(ErrorKind::InsufficientData,
                    "only " + std::to_string(c.ticks.size()) + " ticks survive cleaning (need " + std::to_string(kMinClean) + ")");
    }
    std::vector<double> times, values;
    times.reserve(c.ticks.size());
    values.reserve(c.ticks.size());
    constexpr double session = static_cast<double>(kSessionClose - kSessionOpen);
    for (const RawTick& t : c.ticks) {
        times.push_back(static_cast<double>(t.timestamp - kSessionOpen) / session);
        values.push_back(std::log(t.price));
    }
    return {TickSeries(std::move(times), std::move(values)), c.report};
}

TickSeries build_spread(const TickSeries& a, const TickSeries& b) {
    const auto ta = a.times();
    const auto tb = b.times();
    if (std::max(ta.front(), tb.front()) > std::min(ta.back(), tb.back())) {
        throw Error(ErrorKind::InsufficientData, "legs do not overlap in time");
    }
    std::vector<double> times, values;
    times.reserve(ta.size() + tb.size());
    values.reserve(ta.size() + tb.size());
    std::size_t i = 0, j = 0;
    double last_a = std::numeric_limits<double>::quiet_NaN();
    double last_b = last_a;
    while (i < ta.size() || j < tb.size()) {
        const double t = j >= tb.size() || (i < ta.size() && ta[i] <= tb[j]) ? ta[i] : tb[j];
        if (i < ta.size() && ta[i] == t) last_a = a.value(i++);
        if (j < tb.size() && tb[j] == t) last_b = b.value(j++);
        if (!std::isnan(last_a) && !std::isnan(last_b)) {
            times.push_back(t);
            values.push_back(last_a - last_b);
        }
    }
    if (times.size() < 2) throw Error(ErrorKind::InsufficientData, "legs do not overlap in time");
    return TickSeries(std::move(times), std::move(values));
}

JumpFilterResult remove_jump_outliers(const TickSeries& ts, const NoisyOuParams& init, double frac) {
    if (!(frac >= 0.0 && frac < 0.5)) throw Error(ErrorKind::InvalidArgument, "outlier fraction must be in [0, 0.5)");
    const std::vector<double> ll = per_observation_loglik(ts, init);
    const std::size_t n = ll.size();
    const auto k = static_cast<std::size_t>(std::floor(frac * static_cast<double>(n)));
    JumpFilterResult r;
    if (k == 0) {
        r.kept = ts;
        return r;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ll[x] < ll[y]; });
    std::vector<char> drop(ts.size(), 0);
    for (std::size_t q = 0; q < k; ++q) {
        drop[order[q] + 1] = 1;
        r.removed.push_back(order[q] + 1);
    }
    std::sort(r.removed.begin(), r.removed.end());
    std::vector<double> times, values;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (drop[i]) continue;
        times.push_back(ts.time(i));
        values.push_back(ts.value(i));
    }
    r.kept = TickSeries(std::move(times), std::move(values));
    return r;
}

}  // namespace ouhf
