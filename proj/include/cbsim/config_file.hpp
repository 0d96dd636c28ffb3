// SPDX-License-Identifier: Apache-2.0
//
// cbsim: two-cell coordinated zero-forcing downlink with limited-backhaul
// CSI exchange and per-user quantization bit allocation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cbsim/geometry.hpp"

namespace cbsim {

// Key-value scenario files:
//
//   # comment
//   users_per_cell = 8
//   user_positions = 200, 400, 600
//
// Keys match the ScenarioConfig field names. Unknown keys are errors.

namespace detail {

inline std::string trim(const std::string &s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string &v, const std::string &key, int line) {
    try {
        size_t used = 0;
        double x = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception &) {
        throw ConfigError("bad numeric value '" + v + "' for " + key + " (line " +
                          std::to_string(line) + ")");
    }
}

inline long long parse_int(const std::string &v, const std::string &key, int line) {
    try {
        size_t used = 0;
        long long x = std::stoll(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception &) {
        throw ConfigError("bad integer value '" + v + "' for " + key + " (line " +
                          std::to_string(line) + ")");
    }
}

inline std::vector<double> parse_list(const std::string &v, const std::string &key, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty())
            throw ConfigError("empty element in list for " + key + " (line " +
                              std::to_string(line) + ")");
        out.push_back(parse_double(item, key, line));
    }
    if (out.empty())
        throw ConfigError("empty list for " + key + " (line " + std::to_string(line) + ")");
    return out;
}

} // namespace detail

inline void apply_config_line(ScenarioConfig &cfg, const std::string &key,
                              const std::string &value, int line) {
    using namespace detail;
    if (key == "users_per_cell")
        cfg.users_per_cell = int(parse_int(value, key, line));
    else if (key == "antennas")
        cfg.antennas = int(parse_int(value, key, line));
    else if (key == "per_user_tx_power")
        cfg.per_user_tx_power = parse_double(value, key, line);
    else if (key == "noise_power")
        cfg.noise_power = parse_double(value, key, line);
    else if (key == "path_loss_exponent")
        cfg.path_loss_exponent = parse_double(value, key, line);
    else if (key == "reference_distance")
        cfg.reference_distance = parse_double(value, key, line);
    else if (key == "reference_loss")
        cfg.reference_loss = parse_double(value, key, line);
    else if (key == "bs_separation")
        cfg.bs_separation = parse_double(value, key, line);
    else if (key == "user_positions")
        cfg.user_positions = parse_list(value, key, line);
    else if (key == "cell2_positions")
        cfg.cell2_positions = parse_list(value, key, line);
    else if (key == "rng_seed")
        cfg.rng_seed = std::uint64_t(parse_int(value, key, line));
    else if (key == "trials")
        cfg.trials = int(parse_int(value, key, line));
    else if (key == "clip_sigma")
        cfg.clip_sigma = parse_double(value, key, line);
    else if (key == "quantizer_model") {
        if (value == "analytic")
            cfg.quantizer_model = QuantizerModel::analytic;
        else if (value == "uniform")
            cfg.quantizer_model = QuantizerModel::uniform;
        else
            throw ConfigError("quantizer_model must be 'analytic' or 'uniform' (line " +
                              std::to_string(line) + ")");
    } else if (key == "array_gain") {
        if (value == "auto")
            cfg.array_gain = 0.0;
        else
            cfg.array_gain = detail::parse_double(value, key, line);
    } else if (key == "region_rho_hi")
        cfg.region_rho_hi = parse_double(value, key, line);
    else if (key == "region_rho_lo")
        cfg.region_rho_lo = parse_double(value, key, line);
    else
        throw ConfigError("unknown config key '" + key + "' (line " + std::to_string(line) + ")");
}

inline ScenarioConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path);
    ScenarioConfig cfg;
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        if (hash != std::string::npos)
            raw.erase(hash);
        raw = detail::trim(raw);
        if (raw.empty())
            continue;
        auto eq = raw.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value' in " + path + " (line " +
                              std::to_string(line) + ")");
        std::string key = detail::trim(raw.substr(0, eq));
        std::string value = detail::trim(raw.substr(eq + 1));
        apply_config_line(cfg, key, value, line);
    }
    return cfg;
}

} // namespace cbsim
