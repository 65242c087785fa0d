#include "relayopt/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string_view>

namespace relayopt {

namespace {

std::string_view trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

struct RawEntry {
    double value;
    int line;
};

[[noreturn]] void fail(const std::string& name, int line, const std::string& message) {
    throw config_error(name + ":" + std::to_string(line) + ": " + message);
}

double to_double(const std::string& name, int line, std::string_view text) {
    const std::string token(text);
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &consumed);
    } catch (const std::exception&) {
        fail(name, line, "malformed number '" + token + "'");
    }
    if (consumed != token.size() || !std::isfinite(value)) {
        fail(name, line, "malformed number '" + token + "'");
    }
    return value;
}

int to_int(const std::string& name, int line, const std::string& key, double value) {
    const double rounded = std::rint(value);
    if (rounded != value) {
        fail(name, line, key + " must be an integer");
    }
    return static_cast<int>(rounded);
}

constexpr std::string_view kKnownKeys[] = {
    "D_m",  "H_m",  "d1_m",      "d2_m",   "L_bits", "M_symbols", "B_hz",
    "Tmax_s", "P1_w", "P2_w", "beta0_db", "noise", "delta", "zeta", "n_max", "t_max",
};

bool is_known(std::string_view key) {
    for (const auto known : kKnownKeys) {
        if (key == known) return true;
    }
    return false;
}

}  // namespace

Scenario reference_scenario() {
    Scenario s;
    s.params.distance_m = 200.0;
    s.params.altitude_m = 120.0;
    s.params.x_min_m = 30.0;
    s.params.x_max_m = 130.0;
    s.params.packet_bits = 100;
    s.params.total_blocklength = 100;
    s.params.bandwidth_hz = 1e6;
    s.params.latency_s = 100e-6;
    s.params.power1_w = 3.0;
    s.params.power2_w = 1.0;
    s.params.beta0_db = 50.0;
    s.params.noise_power = 1.0;
    s.solver = SolverConfig{};
    return s;
}

Scenario parse_scenario(std::istream& in, const std::string& name) {
    std::map<std::string, RawEntry, std::less<>> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view text(line);
        if (const auto hash = text.find('#'); hash != std::string_view::npos) {
            text = text.substr(0, hash);
        }
        text = trim(text);
        if (text.empty()) continue;

        const auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            fail(name, line_no, "expected key = value");
        }
        const std::string key(trim(text.substr(0, eq)));
        const std::string_view value_text = trim(text.substr(eq + 1));
        if (key.empty()) fail(name, line_no, "empty key");
        if (!is_known(key)) fail(name, line_no, "unknown key '" + key + "'");
        if (entries.contains(key)) fail(name, line_no, "duplicate key '" + key + "'");
        if (value_text.empty()) fail(name, line_no, "missing value for '" + key + "'");
        entries.emplace(key, RawEntry{to_double(name, line_no, value_text), line_no});
    }

    const auto lookup = [&](std::string_view key) -> std::optional<RawEntry> {
        if (const auto it = entries.find(key); it != entries.end()) return it->second;
        return std::nullopt;
    };
    const auto require = [&](std::string_view key) -> RawEntry {
        if (const auto entry = lookup(key)) return *entry;
        throw config_error(name + ": required key '" + std::string(key) + "' missing");
    };

    Scenario s;
    ScenarioParams& p = s.params;
    p.distance_m = require("D_m").value;
    p.altitude_m = require("H_m").value;
    p.x_min_m = require("d1_m").value;
    p.x_max_m = require("d2_m").value;
    {
        const RawEntry e = require("L_bits");
        p.packet_bits = to_int(name, e.line, "L_bits", e.value);
    }
    p.power1_w = require("P1_w").value;
    p.power2_w = require("P2_w").value;
    p.beta0_db = require("beta0_db").value;
    if (const auto e = lookup("noise")) p.noise_power = e->value;

    const auto m_entry = lookup("M_symbols");
    const auto b_entry = lookup("B_hz");
    const auto t_entry = lookup("Tmax_s");
    if (b_entry) p.bandwidth_hz = b_entry->value;
    if (t_entry) p.latency_s = t_entry->value;
    if (m_entry) {
        p.total_blocklength = to_int(name, m_entry->line, "M_symbols", m_entry->value);
    } else if (b_entry && t_entry) {
        p.total_blocklength =
            static_cast<int>(std::llround(b_entry->value * t_entry->value));
    } else {
        throw config_error(name + ": required key 'M_symbols' (or both B_hz and Tmax_s) missing");
    }

    SolverConfig& cfg = s.solver;
    if (const auto e = lookup("delta")) cfg.blocklength_tol = e->value;
    if (const auto e = lookup("zeta")) cfg.location_tol = e->value;
    if (const auto e = lookup("n_max")) cfg.perturbation_max = to_int(name, e->line, "n_max", e->value);
    if (const auto e = lookup("t_max")) cfg.max_iterations = to_int(name, e->line, "t_max", e->value);

    try {
        p.validate();
        cfg.validate();
    } catch (const config_error& err) {
        throw config_error(name + ": " + err.what());
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file '" + path.string() + "'");
    }
    return parse_scenario(in, path.filename().string());
}

}  // namespace relayopt
