// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The chanest Authors

#include "chanest/config.hpp"

#include "chanest/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace chanest {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text)
{
    T value{};
    const auto* begin = text.data();
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || text.empty())
        throw ConfigError("cannot parse value '" + std::string(text) + "' for key '" + std::string(key) + "'");
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value))
            throw ConfigError("non-finite value for key '" + std::string(key) + "'");
    }
    return value;
}

bool parse_bool(std::string_view key, std::string_view text)
{
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError("cannot parse boolean '" + std::string(text) + "' for key '" + std::string(key) + "'");
}

std::string format_double(double v)
{
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(17) << v;
    return os.str();
}

struct Field {
    const char* key;
    std::function<void(SystemConfig&, std::string_view)> set;
    std::function<std::string(const SystemConfig&)> get;
};

#define CHANEST_INT_FIELD(name)                                                                    \
    Field{#name, [](SystemConfig& c, std::string_view v) { c.name = parse_number<int>(#name, v); }, \
          [](const SystemConfig& c) { return std::to_string(c.name); }}
#define CHANEST_REAL_FIELD(name)                                                                      \
    Field{#name, [](SystemConfig& c, std::string_view v) { c.name = parse_number<double>(#name, v); }, \
          [](const SystemConfig& c) { return format_double(c.name); }}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = {
        CHANEST_INT_FIELD(n_rx),
        CHANEST_INT_FIELD(n_tx),
        CHANEST_REAL_FIELD(uplink_power_db),
        CHANEST_REAL_FIELD(noise_var),
        CHANEST_REAL_FIELD(carrier_hz),
        CHANEST_REAL_FIELD(velocity_mps),
        CHANEST_REAL_FIELD(block_duration_s),
        Field{"alpha",
              [](SystemConfig& c, std::string_view v) {
                  if (v == "jakes" || v.empty())
                      c.alpha.reset();
                  else
                      c.alpha = parse_number<double>("alpha", v);
              },
              [](const SystemConfig& c) { return c.alpha ? format_double(*c.alpha) : std::string("jakes"); }},
        CHANEST_REAL_FIELD(shadow_std_db),
        CHANEST_REAL_FIELD(pathloss_exp),
        CHANEST_REAL_FIELD(ref_distance_m),
        CHANEST_REAL_FIELD(min_distance_m),
        CHANEST_REAL_FIELD(max_distance_m),
        CHANEST_INT_FIELD(n_blocks),
        CHANEST_INT_FIELD(n_inner_iters),
        CHANEST_INT_FIELD(n_ensemble),
        CHANEST_INT_FIELD(n_particles),
        CHANEST_INT_FIELD(n_mc_runs),
        CHANEST_REAL_FIELD(pseudo_noise_scale),
        CHANEST_REAL_FIELD(anneal_factor),
        Field{"temper_inner_updates",
              [](SystemConfig& c, std::string_view v) { c.temper_inner_updates = parse_bool("temper_inner_updates", v); },
              [](const SystemConfig& c) { return std::string(c.temper_inner_updates ? "true" : "false"); }},
        Field{"master_seed",
              [](SystemConfig& c, std::string_view v) { c.master_seed = parse_number<std::uint64_t>("master_seed", v); },
              [](const SystemConfig& c) { return std::to_string(c.master_seed); }},
        CHANEST_INT_FIELD(track_rx),
        CHANEST_INT_FIELD(track_tx),
        CHANEST_INT_FIELD(conv_rx),
        CHANEST_INT_FIELD(conv_tx),
        Field{"shared_trajectory",
              [](SystemConfig& c, std::string_view v) { c.shared_trajectory = parse_bool("shared_trajectory", v); },
              [](const SystemConfig& c) { return std::string(c.shared_trajectory ? "true" : "false"); }},
    };
    return table;
}

#undef CHANEST_INT_FIELD
#undef CHANEST_REAL_FIELD

void require(bool ok, const char* key, const char* condition)
{
    if (!ok)
        throw ConfigError(std::string("value out of range for '") + key + "': requires " + condition);
}

void apply_line(SystemConfig& config, std::string_view line)
{
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
        throw ConfigError("expected 'key = value', got '" + std::string(line) + "'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty())
        throw ConfigError("missing key before '='");
    apply_setting(config, key, trim(line.substr(eq + 1)));
}

} // namespace

void apply_setting(SystemConfig& config, std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    for (const auto& f : fields()) {
        if (key == f.key) {
            f.set(config, value);
            return;
        }
    }
    throw ConfigError("unknown key '" + std::string(key) + "'");
}

void validate(const SystemConfig& c)
{
    require(c.n_rx >= 1, "n_rx", ">= 1");
    require(c.n_tx >= 1, "n_tx", ">= 1");
    require(c.noise_var > 0.0, "noise_var", "> 0");
    require(c.carrier_hz > 0.0, "carrier_hz", "> 0");
    require(c.velocity_mps > 0.0, "velocity_mps", "> 0");
    require(c.block_duration_s > 0.0, "block_duration_s", "> 0");
    if (c.alpha)
        require(std::abs(*c.alpha) <= 1.0, "alpha", "|alpha| <= 1");
    require(c.shadow_std_db >= 0.0, "shadow_std_db", ">= 0");
    require(c.pathloss_exp >= 0.0, "pathloss_exp", ">= 0");
    require(c.ref_distance_m > 0.0, "ref_distance_m", "> 0");
    require(c.min_distance_m >= c.ref_distance_m, "min_distance_m", ">= ref_distance_m");
    require(c.max_distance_m >= c.min_distance_m, "max_distance_m", ">= min_distance_m");
    require(c.n_blocks >= 1, "n_blocks", ">= 1");
    require(c.n_inner_iters >= 1, "n_inner_iters", ">= 1");
    require(c.n_ensemble >= 2, "n_ensemble", ">= 2");
    require(c.n_particles >= 1, "n_particles", ">= 1");
    require(c.n_mc_runs >= 1, "n_mc_runs", ">= 1");
    require(c.pseudo_noise_scale >= 0.0, "pseudo_noise_scale", ">= 0");
    require(c.anneal_factor > 0.0 && c.anneal_factor <= 1.0, "anneal_factor", "0 < anneal_factor <= 1");
    require(c.track_rx >= 1 && c.track_rx <= c.n_rx, "track_rx", "1 <= track_rx <= n_rx");
    require(c.track_tx >= 1 && c.track_tx <= c.n_tx, "track_tx", "1 <= track_tx <= n_tx");
    require(c.conv_rx >= 1 && c.conv_rx <= c.n_rx, "conv_rx", "1 <= conv_rx <= n_rx");
    require(c.conv_tx >= 1 && c.conv_tx <= c.n_tx, "conv_tx", "1 <= conv_tx <= n_tx");
}

SystemConfig parse_config(std::string_view text, const std::vector<std::string>& overrides, SystemConfig base)
{
    SystemConfig config = std::move(base);
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        try {
            apply_line(config, line);
        } catch (const ConfigError& e) {
            throw ConfigError(e.what(), line_no);
        }
    }
    for (std::size_t i = 0; i < overrides.size(); ++i) {
        try {
            apply_line(config, trim(overrides[i]));
        } catch (const ConfigError& e) {
            throw ConfigError(std::string("override #") + std::to_string(i + 1) + ": " + e.what());
        }
    }
    validate(config);
    return config;
}

SystemConfig load_config(const std::string& path, const std::vector<std::string>& overrides, SystemConfig base)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), overrides, std::move(base));
}

std::string to_text(const SystemConfig& config)
{
    std::string out;
    for (const auto& f : fields())
        out += std::string(f.key) + " = " + f.get(config) + "\n";
    return out;
}

std::string config_digest(const SystemConfig& config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : to_text(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

SystemConfig desk_config()
{
    SystemConfig c;
    c.n_rx = 32;
    c.n_tx = 8;
    c.n_mc_runs = 50;
    c.n_blocks = 50;
    c.n_inner_iters = 32;
    return c;
}

} // namespace chanest
