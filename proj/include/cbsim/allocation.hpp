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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cbsim/analysis.hpp"
#include "cbsim/geometry.hpp"

namespace cbsim {

enum class Scheme { conventional, equal_sir, equal_interference, oracle, greedy };

inline Scheme scheme_from_name(std::string_view name) {
    if (name == "conventional")
        return Scheme::conventional;
    if (name == "equal-sir")
        return Scheme::equal_sir;
    if (name == "equal-interference")
        return Scheme::equal_interference;
    if (name == "oracle")
        return Scheme::oracle;
    if (name == "greedy")
        return Scheme::greedy;
    throw ConfigError("unknown scheme '" + std::string(name) +
                      "' (expected conventional | equal-sir | equal-interference | oracle | greedy)");
}

inline const char *scheme_name(Scheme s) {
    switch (s) {
    case Scheme::conventional:
        return "conventional";
    case Scheme::equal_sir:
        return "equal-sir";
    case Scheme::equal_interference:
        return "equal-interference";
    case Scheme::oracle:
        return "oracle";
    default:
        return "greedy";
    }
}

// Per-user backhaul quantization bits under a total budget D.
// fractional sums to D (within fp rounding); integer sums to round(D)
// exactly once round_allocation has run.
struct BitAllocation {
    Scheme scheme = Scheme::conventional;
    double budget = 0.0;
    std::vector<double> fractional;
    std::vector<int> integer;
    double water_level = std::numeric_limits<double>::quiet_NaN();
    int clipped_users = 0; // users pinned to zero by the water filler
};

// ---------------------------------------------------------------------------
// water filling
// ---------------------------------------------------------------------------

// Solves l_i = a + offset_i, sum l_i = D, l_i >= 0. Users whose level goes
// negative are pinned at zero and the level is re-solved over the rest;
// pinning only ever lowers the level, so removed users stay removed.
inline std::vector<double> solve_water_fill(double budget, std::span<const double> offsets,
                                            double *water_level = nullptr,
                                            int *clipped_users = nullptr) {
    const size_t n = offsets.size();
    std::vector<bool> active(n, true);
    std::vector<double> bits(n, 0.0);
    double level = 0.0;
    for (size_t pass = 0; pass <= n; ++pass) {
        double off_sum = 0.0;
        size_t k = 0;
        for (size_t i = 0; i < n; ++i)
            if (active[i]) {
                off_sum += offsets[i];
                ++k;
            }
        if (k == 0)
            break;
        level = (budget - off_sum) / double(k);
        bool removed = false;
        for (size_t i = 0; i < n; ++i) {
            if (!active[i])
                continue;
            bits[i] = level + offsets[i];
            if (bits[i] < 0.0) {
                active[i] = false;
                bits[i] = 0.0;
                removed = true;
            }
        }
        if (!removed)
            break;
    }
    if (water_level)
        *water_level = level;
    if (clipped_users)
        *clipped_users = int(std::count(active.begin(), active.end(), false));
    return bits;
}

// ---------------------------------------------------------------------------
// integer conversion
// ---------------------------------------------------------------------------

// Largest-remainder rounding: floors everyone, then hands the leftover bits
// to the largest fractional remainders, lowest user index first on ties.
// Preserves the (integer-valued) sum exactly and never goes negative.
inline void round_allocation(BitAllocation &alloc) {
    const size_t n = alloc.fractional.size();
    const double total = std::accumulate(alloc.fractional.begin(), alloc.fractional.end(), 0.0);
    const long long target = std::llround(total);
    if (std::abs(total - double(target)) > 1e-9)
        throw ConfigError("round_allocation: fractional bits must sum to an integer budget");

    alloc.integer.assign(n, 0);
    std::vector<double> rem(n);
    long long floored = 0;
    for (size_t i = 0; i < n; ++i) {
        double f = std::floor(alloc.fractional[i]);
        // guard against 3.0 stored as 2.999999999...
        if (alloc.fractional[i] - f > 1.0 - 1e-9)
            f += 1.0;
        alloc.integer[i] = int(f);
        rem[i] = alloc.fractional[i] - f;
        floored += alloc.integer[i];
    }
    long long leftover = target - floored;
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t(0));
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return rem[a] > rem[b]; });
    for (long long j = 0; j < leftover; ++j)
        alloc.integer[order[size_t(j)]] += 1;
}

// ---------------------------------------------------------------------------
// the four schemes plus the greedy stand-in
// ---------------------------------------------------------------------------

namespace detail {

// the integer form exists only for integer-valued budgets
inline void round_if_integral(BitAllocation &a) {
    if (std::abs(a.budget - double(std::llround(a.budget))) <= 1e-9)
        round_allocation(a);
}

} // namespace detail

// Equal share for everyone: l_i = D / N.
inline BitAllocation conventional(int n_users, double budget) {
    if (budget < 0.0)
        throw ConfigError("conventional: budget must be >= 0");
    BitAllocation a;
    a.scheme = Scheme::conventional;
    a.budget = budget;
    a.fractional.assign(size_t(n_users), budget / double(n_users));
    a.water_level = budget / double(n_users);
    detail::round_if_integral(a);
    return a;
}

// Water-filling on the received-power ratio: l_i = a + 0.5 log2(P2_i/P1_i).
// With no clipping this makes the analytic SIR identical for all users.
inline BitAllocation equal_sir(std::span<const UserGeometry> geom, double budget) {
    if (budget < 0.0)
        throw ConfigError("equal_sir: budget must be >= 0");
    std::vector<double> off(geom.size());
    for (size_t i = 0; i < geom.size(); ++i)
        off[i] = 0.5 * std::log2(geom[i].rx_power_other / geom[i].rx_power_own);
    BitAllocation a;
    a.scheme = Scheme::equal_sir;
    a.budget = budget;
    a.fractional = solve_water_fill(budget, off, &a.water_level, &a.clipped_users);
    detail::round_if_integral(a);
    return a;
}

// Water-filling on the interfering power alone: l_i = a + 0.5 log2(P2_i).
// With no clipping this equalizes the analytic interference N*P*Q_i.
inline BitAllocation equal_interference(std::span<const UserGeometry> geom, double budget) {
    if (budget < 0.0)
        throw ConfigError("equal_interference: budget must be >= 0");
    std::vector<double> off(geom.size());
    for (size_t i = 0; i < geom.size(); ++i)
        off[i] = 0.5 * std::log2(geom[i].rx_power_other);
    BitAllocation a;
    a.scheme = Scheme::equal_interference;
    a.budget = budget;
    a.fractional = solve_water_fill(budget, off, &a.water_level, &a.clipped_users);
    detail::round_if_integral(a);
    return a;
}

// Distance forms of the offsets, for cross-checking against the
// received-power forms (identical up to fp rounding: the common factor
// P*k*d_o^gamma cancels into the water level).
inline std::vector<double> equal_sir_offsets_from_distances(std::span<const UserGeometry> geom,
                                                            double gamma) {
    std::vector<double> off(geom.size());
    for (size_t i = 0; i < geom.size(); ++i)
        off[i] = 0.5 * std::log2(std::pow(geom[i].d_other / geom[i].d_own, -gamma));
    return off;
}

inline std::vector<double>
equal_interference_offsets_from_distances(std::span<const UserGeometry> geom, double gamma) {
    std::vector<double> off(geom.size());
    for (size_t i = 0; i < geom.size(); ++i)
        off[i] = 0.5 * std::log2(std::pow(geom[i].d_other, -gamma));
    return off;
}

namespace detail {

inline double compositions_count(int budget, int n_users) {
    // C(budget + n - 1, n - 1), computed in floating point
    double c = 1.0;
    for (int i = 1; i <= n_users - 1; ++i)
        c *= double(budget + i) / double(i);
    return c;
}

template <typename Fn>
void for_each_composition(int budget, int n_users, std::vector<int> &work, int pos, Fn &&fn) {
    if (pos == n_users - 1) {
        work[size_t(pos)] = budget;
        fn(work);
        return;
    }
    for (int take = 0; take <= budget; ++take) {
        work[size_t(pos)] = take;
        for_each_composition(budget - take, n_users, work, pos + 1, fn);
    }
}

} // namespace detail

// Enumerates every non-negative integer allocation summing to the budget
// and keeps the analytic-sum-rate maximizer; lexicographically smallest on
// ties. Guarded: the enumeration must stay within 10^7 compositions.
inline BitAllocation exhaustive_oracle(const AnalyticalModel &model, int budget) {
    if (budget < 0)
        throw ConfigError("exhaustive_oracle: budget must be >= 0");
    const int n = model.n_users();
    if (detail::compositions_count(budget, n) > 1e7)
        throw SizeGuardError("exhaustive_oracle: " + std::to_string(budget) + " bits over " +
                             std::to_string(n) +
                             " users exceeds the enumeration guard; use greedy_bitload");
    BitAllocation a;
    a.scheme = Scheme::oracle;
    a.budget = budget;
    std::vector<int> work(size_t(n), 0);
    std::vector<int> best;
    double best_rate = -std::numeric_limits<double>::infinity();
    detail::for_each_composition(budget, n, work, 0, [&](const std::vector<int> &cand) {
        double r = model.sum_rate_int(std::span<const int>(cand));
        if (r > best_rate) { // strict: first (lexicographically smallest) max wins
            best_rate = r;
            best = cand;
        }
    });
    a.integer = best;
    a.fractional.assign(best.begin(), best.end());
    return a;
}

// Hands out the budget one bit at a time to the user with the largest
// marginal analytic sum-rate gain; lowest index on ties.
inline BitAllocation greedy_bitload(const AnalyticalModel &model, int budget) {
    if (budget < 0)
        throw ConfigError("greedy_bitload: budget must be >= 0");
    const int n = model.n_users();
    BitAllocation a;
    a.scheme = Scheme::greedy;
    a.budget = budget;
    a.integer.assign(size_t(n), 0);
    std::vector<double> current(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i)
        current[size_t(i)] = model.rate(i, 0.0);
    for (int step = 0; step < budget; ++step) {
        int best = 0;
        double best_gain = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            double gain = model.rate(i, double(a.integer[size_t(i)] + 1)) - current[size_t(i)];
            if (gain > best_gain) {
                best_gain = gain;
                best = i;
            }
        }
        a.integer[size_t(best)] += 1;
        current[size_t(best)] += best_gain;
    }
    a.fractional.assign(a.integer.begin(), a.integer.end());
    return a;
}

// Scheme dispatch by name tag. The discrete allocators need an integer
// budget; the water-filling schemes accept any non-negative budget.
inline BitAllocation allocate(Scheme scheme, std::span<const UserGeometry> geom,
                              const AnalyticalModel &model, double budget) {
    switch (scheme) {
    case Scheme::conventional:
        return conventional(int(geom.size()), budget);
    case Scheme::equal_sir:
        return equal_sir(geom, budget);
    case Scheme::equal_interference:
        return equal_interference(geom, budget);
    case Scheme::oracle:
    case Scheme::greedy: {
        long long d = std::llround(budget);
        if (std::abs(budget - double(d)) > 1e-9)
            throw ConfigError("discrete allocators need an integer budget");
        return scheme == Scheme::oracle ? exhaustive_oracle(model, int(d))
                                        : greedy_bitload(model, int(d));
    }
    }
    throw ConfigError("unreachable scheme");
}

} // namespace cbsim
