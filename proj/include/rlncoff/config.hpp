// Scenario / sweep configuration files: flat `key = value` text grouped
// into [scenario], [channel] and [sweep] sections, plus the CSV loader for
// measured channel tables. Every diagnostic names the file, the line and
// the offending key.
#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rlncoff/sim.hpp"
#include "rlncoff/sweep.hpp"

namespace rlncoff::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return std::string(s.substr(first, last - first + 1));
}

inline std::string strip_comment(std::string_view s) {
    const auto hash = s.find('#');
    return trim(hash == std::string_view::npos ? s : s.substr(0, hash));
}

}  // namespace detail

struct ConfigEntry {
    std::string value;
    std::size_t line = 0;
};

// A parsed file: sections of key/value pairs with their source lines kept
// around for diagnostics. Duplicate keys and unknown sections are rejected
// at read time; unknown keys are rejected by the typed loaders below.
struct ParsedConfig {
    std::filesystem::path path;
    std::map<std::string, std::map<std::string, ConfigEntry>> sections;

    bool has_section(const std::string& name) const { return sections.count(name) != 0; }

    const ConfigEntry* find(const std::string& section, const std::string& key) const {
        const auto sec = sections.find(section);
        if (sec == sections.end()) return nullptr;
        const auto entry = sec->second.find(key);
        return entry == sec->second.end() ? nullptr : &entry->second;
    }

    [[noreturn]] void fail(std::size_t line, const std::string& message) const {
        throw ConfigError(path.string() + ":" + std::to_string(line) + ": " + message);
    }
};

inline ParsedConfig read_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    ParsedConfig parsed;
    parsed.path = path;
    static const char* kSections[] = {"scenario", "channel", "sweep"};
    std::string current;
    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = detail::strip_comment(raw);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                parsed.fail(line_no, "unterminated section header '" + line + "'");
            const std::string name = detail::trim(line.substr(1, line.size() - 2));
            if (std::find_if(std::begin(kSections), std::end(kSections),
                             [&](const char* s) { return name == s; }) == std::end(kSections))
                parsed.fail(line_no, "unknown section '[" + name + "]'");
            if (parsed.sections.count(name))
                parsed.fail(line_no, "section '[" + name + "]' given twice");
            parsed.sections[name];
            current = name;
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            parsed.fail(line_no, "expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(std::string_view(line).substr(0, eq));
        const std::string value = detail::trim(std::string_view(line).substr(eq + 1));
        if (key.empty()) parsed.fail(line_no, "missing key before '='");
        if (current.empty())
            parsed.fail(line_no, "key '" + key + "' appears before any section header");
        auto [it, inserted] = parsed.sections[current].emplace(key, ConfigEntry{value, line_no});
        if (!inserted)
            parsed.fail(line_no, "duplicate key '" + key + "' in [" + current + "]");
    }
    return parsed;
}

namespace detail {

template <typename T>
inline T parse_integer(const ParsedConfig& cfg, const ConfigEntry& entry,
                       const std::string& key, std::string_view text) {
    T out{};
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end)
        cfg.fail(entry.line, "key '" + key + "': '" + std::string(text) +
                                 "' is not a valid non-negative integer");
    return out;
}

inline double parse_number(const ParsedConfig& cfg, const ConfigEntry& entry,
                           const std::string& key, std::string_view text) {
    double out = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end)
        cfg.fail(entry.line, "key '" + key + "': '" + std::string(text) +
                                 "' is not a valid number");
    return out;
}

inline std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> items;
    if (trim(text).empty()) return items;
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        items.push_back(trim(text.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return items;
}

// Typed access to one section, with defaults for absent keys and a strict
// check that every present key was recognised.
class SectionReader {
public:
    SectionReader(const ParsedConfig& cfg, std::string section)
        : cfg_(cfg), section_(std::move(section)) {}

    template <typename T>
    T integer(const std::string& key, T fallback) {
        const ConfigEntry* entry = note(key);
        return entry ? parse_integer<T>(cfg_, *entry, key, entry->value) : fallback;
    }

    double number(const std::string& key, double fallback) {
        const ConfigEntry* entry = note(key);
        return entry ? parse_number(cfg_, *entry, key, entry->value) : fallback;
    }

    std::string text(const std::string& key, std::string fallback) {
        const ConfigEntry* entry = note(key);
        return entry ? entry->value : std::move(fallback);
    }

    bool present(const std::string& key) const {
        return cfg_.find(section_, key) != nullptr;
    }

    const ConfigEntry* note(const std::string& key) {
        seen_.push_back(key);
        return cfg_.find(section_, key);
    }

    // Call after reading every supported key: any leftover is a typo.
    void reject_unknown() const {
        const auto sec = cfg_.sections.find(section_);
        if (sec == cfg_.sections.end()) return;
        for (const auto& [key, entry] : sec->second)
            if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
                cfg_.fail(entry.line, "unknown key '" + key + "' in [" + section_ + "]");
    }

private:
    const ParsedConfig& cfg_;
    std::string section_;
    std::vector<std::string> seen_;
};

}  // namespace detail

// Measured channel table: CSV with header `distance_m,pep`, strictly
// increasing distances, pep in [0,1].
inline std::vector<std::pair<double, double>> load_pep_table(
    const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open channel table '" + path.string() + "'");
    const auto fail = [&](std::size_t line, const std::string& message) {
        throw ConfigError(path.string() + ":" + std::to_string(line) + ": " + message);
    };
    std::string raw;
    if (!std::getline(in, raw)) fail(1, "empty channel table");
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (detail::trim(raw) != "distance_m,pep")
        fail(1, "header must be 'distance_m,pep', got '" + raw + "'");
    std::vector<std::pair<double, double>> table;
    for (std::size_t line_no = 2; std::getline(in, raw); ++line_no) {
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = detail::trim(raw);
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) fail(line_no, "expected 'distance,pep'");
        double dist = 0.0, pep = 0.0;
        try {
            std::size_t used = 0;
            dist = std::stod(line.substr(0, comma), &used);
            if (used != comma) throw std::invalid_argument("");
            const std::string rest = detail::trim(line.substr(comma + 1));
            pep = std::stod(rest, &used);
            if (used != rest.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            fail(line_no, "malformed number in '" + line + "'");
        }
        if (!table.empty() && dist <= table.back().first)
            fail(line_no, "distances must be strictly increasing");
        if (dist < 0.0) fail(line_no, "distance must be non-negative");
        if (!(pep >= 0.0 && pep <= 1.0)) fail(line_no, "pep must lie in [0,1]");
        table.emplace_back(dist, pep);
    }
    if (table.empty()) fail(1, "channel table has no samples");
    return table;
}

// Builds a scenario from [scenario] and [channel]. Absent keys keep the
// library defaults; a relative channel table path is resolved against the
// config file's directory.
inline sim::ScenarioConfig load_scenario(const ParsedConfig& parsed) {
    sim::ScenarioConfig cfg;
    detail::SectionReader scenario(parsed, "scenario");
    cfg.rsu_count = scenario.integer<std::size_t>("rsu_count", cfg.rsu_count);
    cfg.isd_m = scenario.number("isd_m", cfg.isd_m);
    cfg.road_width_m = scenario.number("width_m", cfg.road_width_m);
    cfg.generation_size = scenario.integer<std::size_t>("K", cfg.generation_size);
    cfg.transmissions_per_message =
        scenario.integer<std::size_t>("N", cfg.transmissions_per_message);
    cfg.interleaved_messages = scenario.integer<std::size_t>("d", cfg.interleaved_messages);
    cfg.reset_area_span = scenario.integer<std::size_t>("C", cfg.reset_area_span);
    cfg.field_order = scenario.integer<unsigned>("q", cfg.field_order);
    cfg.eaves_pos_m = scenario.number("eaves_pos_m", cfg.eaves_pos_m);
    cfg.eaves_range_m = scenario.number("eaves_range_m", cfg.eaves_range_m);
    cfg.packet_len = scenario.integer<std::size_t>("packet_len", cfg.packet_len);
    cfg.trials = scenario.integer<std::size_t>("trials", cfg.trials);
    cfg.seed = scenario.integer<std::uint64_t>("seed", cfg.seed);
    scenario.reject_unknown();

    detail::SectionReader channel(parsed, "channel");
    const std::string kind = channel.text("kind", "disk");
    if (kind == "disk") {
        if (const ConfigEntry* entry = parsed.find("channel", "file"))
            parsed.fail(entry->line, "key 'file' only applies to the table channel");
        channel.note("file");
        cfg.channel = sim::ChannelModel::disk(channel.number("eps", cfg.channel.eps),
                                              channel.number("radius_m", cfg.channel.radius_m));
    } else if (kind == "table") {
        for (const char* key : {"eps", "radius_m"})
            if (const ConfigEntry* entry = parsed.find("channel", key))
                parsed.fail(entry->line,
                            std::string("key '") + key + "' only applies to the disk channel");
        channel.note("eps");
        channel.note("radius_m");
        const ConfigEntry* entry = channel.note("file");
        if (!entry) throw ConfigError(parsed.path.string() +
                                      ": table channel needs a 'file' key in [channel]");
        std::filesystem::path table_path(entry->value);
        if (table_path.is_relative())
            table_path = parsed.path.parent_path() / table_path;
        cfg.channel = sim::ChannelModel::from_table(load_pep_table(table_path));
    } else {
        const ConfigEntry* entry = parsed.find("channel", "kind");
        parsed.fail(entry ? entry->line : 0,
                    "key 'kind': expected 'disk' or 'table', got '" + kind + "'");
    }
    channel.reject_unknown();

    try {
        cfg.validate();
    } catch (const std::domain_error& e) {
        throw ConfigError(parsed.path.string() + ": " + e.what());
    }
    return cfg;
}

namespace detail {

template <typename T>
inline std::vector<T> integer_list(const ParsedConfig& cfg, SectionReader& reader,
                                   const std::string& key, std::vector<T> fallback) {
    const ConfigEntry* entry = reader.note(key);
    if (!entry) return fallback;
    std::vector<T> out;
    for (const std::string& item : split_list(entry->value)) {
        if (item.empty())
            cfg.fail(entry->line, "key '" + key + "': empty list item");
        out.push_back(parse_integer<T>(cfg, *entry, key, item));
    }
    return out;
}

}  // namespace detail

// Builds the sweep grid from [sweep]. Axes not listed there collapse to the
// scenario's own value, so a config without a [sweep] section still sweeps
// its single point. An explicitly empty axis yields an empty grid.
inline sweep::Grid load_grid(const ParsedConfig& parsed, const sim::ScenarioConfig& scenario) {
    sweep::Grid grid;
    detail::SectionReader sweep_section(parsed, "sweep");
    grid.field_orders = detail::integer_list<unsigned>(parsed, sweep_section, "q",
                                                       {scenario.field_order});
    grid.generation_sizes = detail::integer_list<std::size_t>(
        parsed, sweep_section, "K", {scenario.generation_size});
    grid.interleavings = detail::integer_list<std::size_t>(
        parsed, sweep_section, "d", {scenario.interleaved_messages});
    grid.reset_spans = detail::integer_list<std::size_t>(parsed, sweep_section, "C",
                                                         {scenario.reset_area_span});
    grid.overheads = detail::integer_list<std::size_t>(
        parsed, sweep_section, "overhead",
        {scenario.transmissions_per_message - scenario.generation_size});
    sweep_section.reject_unknown();
    return grid;
}

}  // namespace rlncoff::config
