#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ouhf/estimate.hpp"
#include "ouhf/model.hpp"

namespace ouhf {

inline constexpr std::string_view kVersion = "0.1.0";

/// 64-bit FNV-1a, as 16 lowercase hex digits.
[[nodiscard]] std::string fnv1a_hex(std::string_view data);

struct Metadata {
    std::string command;
    std::uint64_t seed = 0;
    /// Canonical "key=value" lines of the effective configuration.
    std::string config;
};

/// "# key: value" lines: tool version, command, seed, config hash, rng.
void write_metadata_comment(std::ostream& out, const Metadata& meta);
[[nodiscard]] nlohmann::json metadata_json(const Metadata& meta);

/// CSV with header "time,value"; lines starting with '#' are skipped.
[[nodiscard]] TickSeries read_tick_series(std::istream& in);
void write_tick_series(std::ostream& out, const TickSeries& ts);

[[nodiscard]] TickSeries read_tick_series_file(const std::filesystem::path& path);

/// Shortest representation that round-trips a double.
[[nodiscard]] std::string format_double(double v);

[[nodiscard]] nlohmann::json to_json(const OuFit& fit);
/// Parses the record written by to_json. Throws Schema on missing fields.
[[nodiscard]] OuFit fit_from_json(const nlohmann::json& j);

/// Flat "key = value" text; '#' starts a comment. Throws Schema on malformed lines.
[[nodiscard]] std::map<std::string, std::string> read_key_values(std::istream& in);

}  // namespace ouhf
