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
#include <span>
#include <vector>

#include "cbsim/channel.hpp"
#include "cbsim/geometry.hpp"

namespace cbsim {

// Closed-form average behaviour of the coordinated system. After perfect
// same-cell nulling the only interference left is quantization-induced:
//
//   I_i(l)    = N * P * Q_i(l),            Q_i(l) = const_i * 2^(-2l)
//   SINR_i(l) = G * P * P1_i / (sigma^2 + I_i(l))
//
// with P1_i, P2_i the received powers of user i from the serving and the
// interfering station, const_i = clip_sigma^2 * P2_i / 3 and G the beam
// gain factor (see ScenarioConfig::gain_factor). Uniform per-user transmit
// power P at both stations is assumed.
class AnalyticalModel {
  public:
    AnalyticalModel(std::span<const UserGeometry> geom, const ScenarioConfig &cfg)
        : users_(geom.begin(), geom.end()), tx_power_(cfg.per_user_tx_power),
          noise_(cfg.noise_power), gain_(cfg.gain_factor()) {
        qconst_.reserve(users_.size());
        for (const auto &u : users_)
            qconst_.push_back(quantizer_noise_const(u.rx_power_other, cfg.clip_sigma));
    }

    int n_users() const { return int(users_.size()); }
    double gain() const { return gain_; }
    double noise_power() const { return noise_; }
    double tx_power() const { return tx_power_; }
    const UserGeometry &user(int i) const { return users_[size_t(i)]; }
    double noise_const(int i) const { return qconst_[size_t(i)]; }

    double interference(int i, double bits) const {
        return double(n_users()) * tx_power_ * analytic_q(bits, qconst_[size_t(i)]);
    }

    // mean received signal power of user i (numerator of the average SINR)
    double signal(int i) const { return gain_ * tx_power_ * users_[size_t(i)].rx_power_own; }

    double sinr(int i, double bits) const {
        return signal(i) / (noise_ + interference(i, bits));
    }

    double rate(int i, double bits) const { return std::log1p(sinr(i, bits)) / M_LN2; }

    std::vector<double> rates(std::span<const double> bits) const {
        std::vector<double> r(static_cast<size_t>(n_users()));
        for (int i = 0; i < n_users(); ++i)
            r[size_t(i)] = rate(i, bits[size_t(i)]);
        return r;
    }

    std::vector<double> interference_all(std::span<const double> bits) const {
        std::vector<double> v(static_cast<size_t>(n_users()));
        for (int i = 0; i < n_users(); ++i)
            v[size_t(i)] = interference(i, bits[size_t(i)]);
        return v;
    }

    double sum_rate(std::span<const double> bits) const {
        double s = 0.0;
        for (int i = 0; i < n_users(); ++i)
            s += rate(i, bits[size_t(i)]);
        return s;
    }

    template <typename IntLike>
    double sum_rate_int(std::span<const IntLike> bits) const {
        double s = 0.0;
        for (int i = 0; i < n_users(); ++i)
            s += rate(i, double(bits[size_t(i)]));
        return s;
    }

  private:
    std::vector<UserGeometry> users_;
    double tx_power_, noise_, gain_;
    std::vector<double> qconst_;
};

// Distance form of the average SINR, computed from the two distances alone.
// Algebraically identical to building the geometry first and evaluating the
// model; kept as an independent route for cross-checks.
inline double analytic_sinr_from_distances(double d_own, double d_other, double bits, int n_users,
                                           const ScenarioConfig &cfg) {
    const double p1 = path_loss(cfg.per_user_tx_power, d_own, cfg);
    const double p2 = path_loss(cfg.per_user_tx_power, d_other, cfg);
    const double q = analytic_q(bits, quantizer_noise_const(p2, cfg.clip_sigma));
    return cfg.gain_factor() * cfg.per_user_tx_power * p1 /
           (cfg.noise_power + double(n_users) * cfg.per_user_tx_power * q);
}

struct RateStats {
    double mean = 0.0;
    double variance = 0.0; // population variance (divide by N)
};

inline RateStats rate_stats(std::span<const double> rates) {
    if (rates.empty())
        throw std::domain_error("rate_stats: empty rate list");
    RateStats s;
    for (double r : rates)
        s.mean += r;
    s.mean /= double(rates.size());
    for (double r : rates)
        s.variance += (r - s.mean) * (r - s.mean);
    s.variance /= double(rates.size());
    return s;
}

// Operating regimes of the quantization interference relative to noise and
// signal. region1: noise << interference << signal. region2: interference
// comparable to noise and still well below the signal.
enum class Region { region1, region2, neither };

inline const char *region_name(Region r) {
    switch (r) {
    case Region::region1:
        return "region1";
    case Region::region2:
        return "region2";
    default:
        return "neither";
    }
}

struct RegionReport {
    std::vector<Region> per_user;
    Region aggregate = Region::neither; // shared label, or neither
};

inline Region classify_user(const AnalyticalModel &model, int user, double bits, double rho_hi,
                            double rho_lo) {
    const double intf = model.interference(user, bits);
    const double noise = model.noise_power();
    const double sig = model.signal(user);
    const bool below_signal = intf < sig / rho_hi;
    if (intf > rho_hi * noise && below_signal)
        return Region::region1;
    if (intf >= noise / rho_lo && intf <= rho_lo * noise && below_signal)
        return Region::region2;
    return Region::neither;
}

inline RegionReport classify_region(const AnalyticalModel &model, std::span<const double> bits,
                                    double rho_hi, double rho_lo) {
    RegionReport rep;
    rep.per_user.reserve(size_t(model.n_users()));
    for (int i = 0; i < model.n_users(); ++i)
        rep.per_user.push_back(classify_user(model, i, bits[size_t(i)], rho_hi, rho_lo));
    rep.aggregate = rep.per_user.empty() ? Region::neither : rep.per_user.front();
    for (Region r : rep.per_user)
        if (r != rep.aggregate)
            rep.aggregate = Region::neither;
    return rep;
}

} // namespace cbsim
