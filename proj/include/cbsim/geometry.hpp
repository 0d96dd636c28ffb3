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

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cbsim/errors.hpp"

namespace cbsim {

// How the Monte-Carlo pipeline produces the quantized cross-cell channels.
//
//  analytic : Gaussian test-channel matched to the Q = const*2^(-2l) noise
//             law, with the quantized vector and the error statistically
//             orthogonal. This is the model the closed-form interference
//             expression assumes, and it is the default.
//  uniform  : scalar uniform mid-rise quantizer per real dimension with a
//             finite clip range. Physical, but its error correlates with the
//             quantized output, so the nulled interference falls below the
//             analytic law at coarse resolutions and a clipping floor breaks
//             the 2^(-2l) decay at fine resolutions.
enum class QuantizerModel { analytic, uniform };

// Full experiment description. Linear two-cell layout: both base stations
// are bs_separation apart, user i of a cell sits user_positions[i] meters
// from its own base station on the segment between the two.
struct ScenarioConfig {
    int users_per_cell = 8;             // N
    int antennas = 16;                  // M, needs M >= 2N
    double per_user_tx_power = 10.0;    // P, watts (linear)
    double noise_power = 1.0;           // sigma^2, watts (linear)
    double path_loss_exponent = 3.8;    // gamma
    double reference_distance = 1600.0; // d_o, meters (also the cell radius)
    double reference_loss = 1.0;        // k, gain at the reference distance
    double bs_separation = 3200.0;      // meters; default 2*d_o
    std::vector<double> user_positions;  // empty -> i*d_o/N, i = 1..N
    std::vector<double> cell2_positions; // empty -> mirror of user_positions
    std::uint64_t rng_seed = 12345;
    int trials = 10000;

    // quantizer and analytic-model knobs
    double clip_sigma = 4.0;   // clip range in per-dimension std deviations
    QuantizerModel quantizer_model = QuantizerModel::analytic;
    double array_gain = 0.0;   // <= 0 selects M - 2N + 1
    double region_rho_hi = 10.0; // "much less than" threshold
    double region_rho_lo = 3.0;  // "comparable to" threshold

    std::vector<double> positions() const {
        if (!user_positions.empty())
            return user_positions;
        std::vector<double> p(users_per_cell);
        for (int i = 0; i < users_per_cell; ++i)
            p[i] = reference_distance * double(i + 1) / double(users_per_cell);
        return p;
    }

    std::vector<double> positions_cell2() const {
        return cell2_positions.empty() ? positions() : cell2_positions;
    }

    // Beam gain factor of the analytic model. With 2N-1 nulling constraints
    // the zero-forced beam keeps M-2N+1 degrees of freedom, which is what
    // the simulator measures; a different value can be pinned explicitly.
    double gain_factor() const {
        if (array_gain > 0.0)
            return array_gain;
        return double(antennas - 2 * users_per_cell + 1);
    }

    void validate() const {
        if (users_per_cell < 1)
            throw ConfigError("users_per_cell must be >= 1");
        if (antennas < 2 * users_per_cell)
            throw ConfigError("antennas must be >= 2*users_per_cell (got M=" +
                              std::to_string(antennas) + ", N=" + std::to_string(users_per_cell) + ")");
        if (per_user_tx_power <= 0.0)
            throw ConfigError("per_user_tx_power must be > 0");
        if (noise_power <= 0.0)
            throw ConfigError("noise_power must be > 0");
        if (path_loss_exponent <= 0.0)
            throw ConfigError("path_loss_exponent must be > 0");
        if (reference_distance <= 0.0)
            throw ConfigError("reference_distance must be > 0");
        if (reference_loss <= 0.0)
            throw ConfigError("reference_loss must be > 0");
        if (bs_separation <= 0.0)
            throw ConfigError("bs_separation must be > 0");
        if (trials < 1)
            throw ConfigError("trials must be >= 1");
        if (clip_sigma <= 0.0)
            throw ConfigError("clip_sigma must be > 0");
        if (region_rho_hi <= 1.0 || region_rho_lo <= 1.0)
            throw ConfigError("region thresholds must be > 1");
        for (const auto *list : {&user_positions, &cell2_positions}) {
            if (!list->empty() && int(list->size()) != users_per_cell)
                throw ConfigError("position list must have exactly users_per_cell entries");
            for (double d : *list)
                if (!(d > 0.0) || !(d < bs_separation))
                    throw ConfigError("user positions must lie in (0, bs_separation)");
        }
    }
};

// Per-user distances to both base stations and the received powers they
// imply. d_own + d_other == bs_separation on the linear layout.
struct UserGeometry {
    int user_id = 0;
    double d_own = 0.0;        // distance to the serving base station
    double d_other = 0.0;      // distance to the interfering base station
    double rx_power_own = 0.0; // P * k * (d_own/d_o)^(-gamma)
    double rx_power_other = 0.0;
};

// Received power after distance-based loss: P * k * (d/d_o)^(-gamma).
// Strictly decreasing in d; equals P*k at the reference distance.
inline double path_loss(double power, double distance, const ScenarioConfig &cfg) {
    if (!(distance > 0.0))
        throw std::domain_error("path_loss: distance must be > 0");
    return power * cfg.reference_loss *
           std::pow(distance / cfg.reference_distance, -cfg.path_loss_exponent);
}

inline std::vector<UserGeometry> make_geometry(const ScenarioConfig &cfg,
                                               const std::vector<double> &pos) {
    std::vector<UserGeometry> out;
    out.reserve(pos.size());
    for (int i = 0; i < int(pos.size()); ++i) {
        UserGeometry u;
        u.user_id = i;
        u.d_own = pos[i];
        u.d_other = cfg.bs_separation - pos[i];
        u.rx_power_own = path_loss(cfg.per_user_tx_power, u.d_own, cfg);
        u.rx_power_other = path_loss(cfg.per_user_tx_power, u.d_other, cfg);
        out.push_back(u);
    }
    return out;
}

// Geometry of the reported (first) cell.
inline std::vector<UserGeometry> build_geometry(const ScenarioConfig &cfg) {
    cfg.validate();
    return make_geometry(cfg, cfg.positions());
}

// Geometry of the second cell; mirrors the first unless overridden.
inline std::vector<UserGeometry> build_geometry_cell2(const ScenarioConfig &cfg) {
    cfg.validate();
    return make_geometry(cfg, cfg.positions_cell2());
}

} // namespace cbsim
