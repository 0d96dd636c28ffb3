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

#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

#include "cbsim/allocation.hpp"
#include "cbsim/beamforming.hpp"

namespace cbsim {

struct TrialOutput {
    std::vector<double> rate;       // per cell-1 user
    std::vector<double> cross_intf; // per cell-1 user
    long clip_events = 0;
    int redraws = 0;
};

// One full pipeline pass: draw, quantize the cross channels with the
// integer bit allocation, build both precoders, evaluate rates.
// Deterministic given (seed, trial_index). A rank-deficient stack triggers
// a redraw on a fresh attempt stream; five failures escalate.
inline TrialOutput run_trial(const ScenarioConfig &cfg, const std::vector<UserGeometry> &geom1,
                             const std::vector<UserGeometry> &geom2, const std::vector<int> &bits,
                             std::uint64_t trial_index) {
    constexpr int max_attempts = 5;
    for (int attempt = 0;; ++attempt) {
        GaussianRng rng(trial_stream_seed(cfg.rng_seed, trial_index, std::uint64_t(attempt)));
        ChannelRealization ch = draw_channels(geom1, geom2, cfg.antennas, rng);
        quantize_cross_channels(ch, geom1, geom2, bits, cfg, rng);
        try {
            PrecoderSet prec = build_precoders(ch, cfg.antennas);
            auto terms = instantaneous_sinr(ch, prec, cfg, Cell::one);
            TrialOutput out;
            out.redraws = attempt;
            out.clip_events = ch.clip_events;
            out.rate.reserve(terms.size());
            out.cross_intf.reserve(terms.size());
            for (const auto &t : terms) {
                out.rate.push_back(per_user_rate(t.sinr));
                out.cross_intf.push_back(t.cross_cell);
            }
            return out;
        } catch (const SingularityError &e) {
            if (attempt + 1 >= max_attempts)
                throw SingularityError(std::string(e.what()) + " (trial " +
                                       std::to_string(trial_index) + ", " +
                                       std::to_string(max_attempts) + " attempts)");
        }
    }
}

inline TrialOutput run_trial(const ScenarioConfig &cfg, const std::vector<UserGeometry> &geom,
                             const BitAllocation &alloc, std::uint64_t trial_index) {
    return run_trial(cfg, geom, build_geometry_cell2(cfg), alloc.integer, trial_index);
}

// Aggregate outcome of one (scheme, budget) simulation.
struct SimulationResult {
    Scheme scheme = Scheme::conventional;
    double budget = 0.0;
    std::uint64_t seed = 0;
    long trials = 0;
    long redraws = 0;
    long clip_events = 0;
    int clipped_users = 0; // zero-pinned users in the fractional allocation

    std::vector<int> bits_integer;
    std::vector<double> bits_fractional;

    // empirical, per user
    std::vector<double> rate_user_mean, rate_user_se, intf_user_mean;
    // analytic, per user (fractional bits)
    std::vector<double> rate_user_analytic, intf_user_analytic;

    // empirical aggregates
    double rate_mean = 0.0, rate_mean_se = 0.0;
    double rate_variance = 0.0, rate_variance_se = 0.0;
    double intf_mean = 0.0, intf_mean_se = 0.0;
    // analytic aggregates
    double rate_mean_analytic = 0.0, rate_variance_analytic = 0.0;
};

// Runs cfg.trials independent trials and reduces them in trial order.
// Trials are stored per index and reduced serially, so the aggregate is
// bit-identical for any thread count.
inline SimulationResult simulate(const ScenarioConfig &cfg, const AnalyticalModel &model,
                                 const BitAllocation &alloc, unsigned threads = 0) {
    if (alloc.integer.size() != alloc.fractional.size())
        throw ConfigError("simulate: allocation has no integer form (integer-valued budget "
                          "required)");
    const auto geom1 = build_geometry(cfg);
    const auto geom2 = build_geometry_cell2(cfg);
    const int n = int(geom1.size());
    const long t_count = cfg.trials;
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());

    std::vector<std::vector<double>> rates(static_cast<size_t>(t_count));
    std::vector<std::vector<double>> intfs(static_cast<size_t>(t_count));
    std::vector<long> clips(size_t(t_count), 0);
    std::vector<int> redraws(size_t(t_count), 0);

    std::atomic<long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        for (;;) {
            long t = next.fetch_add(1);
            if (t >= t_count)
                return;
            try {
                TrialOutput out = run_trial(cfg, geom1, geom2, alloc.integer, std::uint64_t(t));
                rates[size_t(t)] = std::move(out.rate);
                intfs[size_t(t)] = std::move(out.cross_intf);
                clips[size_t(t)] = out.clip_events;
                redraws[size_t(t)] = out.redraws;
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                    failure = std::current_exception();
                next.store(t_count);
                return;
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w)
            pool.emplace_back(worker);
        for (auto &th : pool)
            th.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    // ordered reduction
    std::vector<double> sum(size_t(n), 0.0), sumsq(size_t(n), 0.0), isum(size_t(n), 0.0);
    std::vector<double> cross(size_t(n) * size_t(n), 0.0); // sum of r_i r_j
    double tm_sum = 0.0, tm_sumsq = 0.0;                   // per-trial user-mean rate
    double ti_sum = 0.0, ti_sumsq = 0.0;                   // per-trial user-mean interference
    long clip_total = 0, redraw_total = 0;
    for (long t = 0; t < t_count; ++t) {
        const auto &r = rates[size_t(t)];
        const auto &iv = intfs[size_t(t)];
        double rm = 0.0, im = 0.0;
        for (int i = 0; i < n; ++i) {
            sum[size_t(i)] += r[size_t(i)];
            sumsq[size_t(i)] += r[size_t(i)] * r[size_t(i)];
            isum[size_t(i)] += iv[size_t(i)];
            rm += r[size_t(i)];
            im += iv[size_t(i)];
            for (int j = 0; j < n; ++j)
                cross[size_t(i) * size_t(n) + size_t(j)] += r[size_t(i)] * r[size_t(j)];
        }
        rm /= double(n);
        im /= double(n);
        tm_sum += rm;
        tm_sumsq += rm * rm;
        ti_sum += im;
        ti_sumsq += im * im;
        clip_total += clips[size_t(t)];
        redraw_total += redraws[size_t(t)];
    }

    SimulationResult res;
    res.scheme = alloc.scheme;
    res.budget = alloc.budget;
    res.seed = cfg.rng_seed;
    res.trials = t_count;
    res.redraws = redraw_total;
    res.clip_events = clip_total;
    res.clipped_users = alloc.clipped_users;
    res.bits_integer = alloc.integer;
    res.bits_fractional = alloc.fractional;

    const double tn = double(t_count);
    res.rate_user_mean.resize(size_t(n));
    res.rate_user_se.resize(size_t(n));
    res.intf_user_mean.resize(size_t(n));
    for (int i = 0; i < n; ++i) {
        const double m = sum[size_t(i)] / tn;
        res.rate_user_mean[size_t(i)] = m;
        const double var_t =
            t_count > 1 ? (sumsq[size_t(i)] - tn * m * m) / (tn - 1.0) : 0.0;
        res.rate_user_se[size_t(i)] = std::sqrt(std::max(0.0, var_t) / tn);
        res.intf_user_mean[size_t(i)] = isum[size_t(i)] / tn;
    }

    res.rate_mean = tm_sum / tn;
    const double tm_var =
        t_count > 1 ? (tm_sumsq - tn * res.rate_mean * res.rate_mean) / (tn - 1.0) : 0.0;
    res.rate_mean_se = std::sqrt(std::max(0.0, tm_var) / tn);
    res.intf_mean = ti_sum / tn;
    const double ti_var =
        t_count > 1 ? (ti_sumsq - tn * res.intf_mean * res.intf_mean) / (tn - 1.0) : 0.0;
    res.intf_mean_se = std::sqrt(std::max(0.0, ti_var) / tn);

    // population variance of the per-user mean rates; its standard error by
    // the delta method with the full covariance of the user means
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
        double d = res.rate_user_mean[size_t(i)] - res.rate_mean;
        v += d * d;
    }
    res.rate_variance = v / double(n);
    if (t_count > 1) {
        double se2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const double gi = 2.0 * (res.rate_user_mean[size_t(i)] - res.rate_mean) / double(n);
            for (int j = 0; j < n; ++j) {
                const double gj =
                    2.0 * (res.rate_user_mean[size_t(j)] - res.rate_mean) / double(n);
                const double cij = (cross[size_t(i) * size_t(n) + size_t(j)] -
                                    sum[size_t(i)] * sum[size_t(j)] / tn) /
                                   (tn - 1.0);
                se2 += gi * gj * cij / tn;
            }
        }
        res.rate_variance_se = std::sqrt(std::max(0.0, se2));
    }

    // analytic side, evaluated on the fractional allocation
    res.rate_user_analytic = model.rates(alloc.fractional);
    res.intf_user_analytic = model.interference_all(alloc.fractional);
    RateStats st = rate_stats(res.rate_user_analytic);
    res.rate_mean_analytic = st.mean;
    res.rate_variance_analytic = st.variance;
    return res;
}

// Allocation + simulation for each budget in the sweep, in the given order.
inline std::vector<SimulationResult> run_experiment(const ScenarioConfig &cfg, Scheme scheme,
                                                    std::span<const double> budgets,
                                                    unsigned threads = 0) {
    cfg.validate();
    const auto geom = build_geometry(cfg);
    AnalyticalModel model(geom, cfg);
    std::vector<SimulationResult> out;
    out.reserve(budgets.size());
    for (double d : budgets) {
        BitAllocation alloc = allocate(scheme, geom, model, d);
        out.push_back(simulate(cfg, model, alloc, threads));
    }
    return out;
}

} // namespace cbsim
