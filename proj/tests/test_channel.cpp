// SPDX-License-Identifier: Apache-2.0
//
// cbsim: two-cell coordinated zero-forcing downlink with limited-backhaul
// CSI exchange and per-user quantization bit allocation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <catch2/catch_amalgamated.hpp>

#include "cbsim/channel.hpp"

using namespace cbsim;
using Catch::Approx;

namespace {

ScenarioConfig edge_user_config() {
    // one user at the reference distance: rx_power_own = P = 10
    ScenarioConfig cfg;
    cfg.users_per_cell = 1;
    cfg.antennas = 2;
    cfg.user_positions = {1600.0};
    return cfg;
}

} // namespace

TEST_CASE("identical rng state gives identical realizations") {
    auto cfg = edge_user_config();
    auto geom = build_geometry(cfg);
    GaussianRng a(42), b(42);
    auto ca = draw_channels(geom, 8, a);
    auto cb = draw_channels(geom, 8, b);
    REQUIRE(ca.own1[0] == cb.own1[0]);
    REQUIRE(ca.cross1[0] == cb.cross1[0]);
    REQUIRE(ca.own2[0] == cb.own2[0]);
    REQUIRE(ca.cross2[0] == cb.cross2[0]);
}

TEST_CASE("channel entries carry the received power as variance") {
    auto cfg = edge_user_config();
    auto geom = build_geometry(cfg);
    REQUIRE(geom[0].rx_power_own == Approx(10.0));

    const int m = 100;
    const int draws = 1000; // 1e5 entries total
    GaussianRng rng(7);
    double power_sum = 0.0;
    std::complex<double> mean_sum = 0.0;
    for (int t = 0; t < draws; ++t) {
        auto ch = draw_channels(geom, m, rng);
        power_sum += ch.own1[0].squaredNorm();
        mean_sum += ch.own1[0].sum();
    }
    const double n_entries = double(m) * draws;
    const double mean_power = power_sum / n_entries;
    REQUIRE(mean_power == Approx(10.0).epsilon(0.01));
    // zero-mean check at the same sample size
    REQUIRE(std::abs(mean_sum / n_entries) < 0.05 * std::sqrt(10.0));
}

TEST_CASE("analytic_q follows the 6 dB per bit law") {
    REQUIRE(analytic_q(0.0, 3.25) == Approx(3.25));
    for (double l = 0.0; l < 12.0; l += 1.0)
        REQUIRE(analytic_q(l, 1.0) / analytic_q(l + 1.0, 1.0) == Approx(4.0).epsilon(1e-12));
    REQUIRE(analytic_q(2.5, 8.0) == Approx(8.0 * std::exp2(-5.0)));
    REQUIRE_THROWS_AS(analytic_q(-0.1, 1.0), std::domain_error);
}

TEST_CASE("noise constant matches the step-size law") {
    // const = 2 c^2 / 3 with c = clip_sigma * sqrt(P/2)
    const double p = 6.4, clip = 4.0;
    const double c = clip * std::sqrt(p / 2.0);
    REQUIRE(quantizer_noise_const(p, clip) == Approx(2.0 * c * c / 3.0).epsilon(1e-12));
}

TEST_CASE("uniform quantizer becomes transparent at high resolution") {
    QuantizerSpec spec;
    spec.bits = 30;
    spec.clip_range = 4.0;
    GaussianRng rng(3);
    cvec h(16);
    for (int k = 0; k < 16; ++k)
        h[k] = rng.cnormal(1.0);
    auto res = quantize_vector(h, spec);
    for (int k = 0; k < 16; ++k) {
        REQUIRE(std::abs(res.nq[k].real()) < 1e-8 * spec.clip_range);
        REQUIRE(std::abs(res.nq[k].imag()) < 1e-8 * spec.clip_range);
    }
}

TEST_CASE("reconstruction levels are fixed points") {
    QuantizerSpec spec;
    spec.bits = 3;
    spec.clip_range = 2.0;
    const double delta = spec.step();
    for (int m = 0; m < 8; ++m) {
        const double level = -spec.clip_range + (m + 0.5) * delta;
        cvec h(1);
        h[0] = {level, level};
        auto res = quantize_vector(h, spec);
        REQUIRE(res.hq[0].real() == Approx(level).margin(1e-15));
        REQUIRE(res.hq[0].imag() == Approx(level).margin(1e-15));
        REQUIRE(res.clip_events == 0);
    }
}

TEST_CASE("the error vector is exactly h minus hq") {
    QuantizerSpec spec;
    spec.bits = 4;
    spec.clip_range = 3.0;
    GaussianRng rng(11);
    cvec h(64);
    for (int k = 0; k < 64; ++k)
        h[k] = rng.cnormal(2.0);
    auto res = quantize_vector(h, spec);
    for (int k = 0; k < 64; ++k) {
        REQUIRE(res.nq[k] == h[k] - res.hq[k]); // bit-for-bit, not approximate
        // re-adding rounds at most once per component
        REQUIRE(std::abs(res.hq[k] + res.nq[k] - h[k]) <= 1e-15 * spec.clip_range);
    }
}

TEST_CASE("uniform quantizer noise variance matches step^2/12 in range") {
    const double p = 2.0; // per-dimension sigma = 1
    const double clip = 4.0;
    auto spec = QuantizerSpec::for_power(p, 4, clip);
    const double delta = spec.step();
    GaussianRng rng(19);
    double err_sq = 0.0;
    long n_in = 0;
    const long total = 100000;
    for (long s = 0; s < total; ++s) {
        const double x = std::sqrt(p / 2.0) * rng.normal();
        if (std::abs(x) > spec.clip_range)
            continue; // in-range statistics only
        cvec h(1);
        h[0] = {x, 0.0};
        auto res = quantize_vector(h, spec);
        err_sq += res.nq[0].real() * res.nq[0].real();
        ++n_in;
    }
    const double var = err_sq / double(n_in);
    REQUIRE(var == Approx(delta * delta / 12.0).epsilon(0.05));
}

TEST_CASE("one extra bit quarters the in-range error energy") {
    const double p = 2.0, clip = 4.0;
    GaussianRng rng(23);
    std::vector<double> xs(30000);
    for (auto &x : xs)
        x = std::sqrt(p / 2.0) * rng.normal();
    auto var_at = [&](int bits) {
        auto spec = QuantizerSpec::for_power(p, bits, clip);
        double e = 0.0;
        long n = 0;
        for (double x : xs) {
            if (std::abs(x) > spec.clip_range)
                continue;
            cvec h(1);
            h[0] = {x, 0.0};
            auto res = quantize_vector(h, spec);
            e += std::norm(res.nq[0]);
            ++n;
        }
        return e / double(n);
    };
    for (int l = 3; l <= 7; ++l) {
        const double ratio = var_at(l) / var_at(l + 1);
        REQUIRE(ratio > 3.6);
        REQUIRE(ratio < 4.4);
    }
}

TEST_CASE("clipping is counted and saturates to the boundary cell") {
    QuantizerSpec spec;
    spec.bits = 2;
    spec.clip_range = 1.0;
    cvec h(2);
    h[0] = {5.0, 0.0};  // far beyond the range
    h[1] = {-2.0, 0.4}; // one clipped dimension
    auto res = quantize_vector(h, spec);
    REQUIRE(res.clip_events == 2);
    const double top = spec.clip_range - spec.step() / 2.0;
    REQUIRE(res.hq[0].real() == Approx(top));
    REQUIRE(res.hq[1].real() == Approx(-top));
}

TEST_CASE("noise law constant is validated by the uniform quantizer at l = 6") {
    const double p = 10.0, clip = 4.0;
    auto spec = QuantizerSpec::for_power(p, 6, clip);
    GaussianRng rng(31);
    double e = 0.0;
    const long total = 100000;
    for (long s = 0; s < total; ++s) {
        cvec h(1);
        h[0] = rng.cnormal(p);
        auto res = quantize_vector(h, spec);
        e += std::norm(res.nq[0]);
    }
    const double empirical = e / double(total);
    const double modeled = analytic_q(6.0, quantizer_noise_const(p, clip));
    REQUIRE(empirical == Approx(modeled).epsilon(0.05));
}

TEST_CASE("quantization error has zero empirical mean") {
    const double p = 4.0, clip = 4.0;
    auto spec = QuantizerSpec::for_power(p, 3, clip);
    GaussianRng rng(37);
    std::complex<double> mean = 0.0;
    double var = 0.0;
    const long total = 100000;
    for (long s = 0; s < total; ++s) {
        cvec h(1);
        h[0] = rng.cnormal(p);
        auto res = quantize_vector(h, spec);
        mean += res.nq[0];
        var += std::norm(res.nq[0]);
    }
    var /= double(total);
    const double se = std::sqrt(var / 2.0 / double(total)); // per real dimension
    REQUIRE(std::abs(mean.real() / double(total)) < 3.0 * se);
    REQUIRE(std::abs(mean.imag() / double(total)) < 3.0 * se);
}

TEST_CASE("analytic channel copies obey the noise law exactly in distribution") {
    auto cfg = edge_user_config(); // analytic quantizer model by default
    auto geom = build_geometry(cfg);
    const int m = 16;
    const int bits = 4;
    const double p2 = geom[0].rx_power_other;
    const double q = analytic_q(double(bits), quantizer_noise_const(p2, cfg.clip_sigma));

    GaussianRng rng(41);
    double nq_power = 0.0;
    std::complex<double> corr = 0.0;
    double hq_power = 0.0;
    const int draws = 3000; // 48e3 coefficients
    for (int t = 0; t < draws; ++t) {
        auto ch = draw_channels(geom, m, rng);
        quantize_cross_channels(ch, geom, geom, {bits}, cfg, rng);
        REQUIRE(ch.nq_cross1[0] == ch.cross1[0] - ch.hq_cross1[0]);
        nq_power += ch.nq_cross1[0].squaredNorm();
        hq_power += ch.hq_cross1[0].squaredNorm();
        corr += ch.hq_cross1[0].dot(ch.nq_cross1[0]);
    }
    const double n_coeff = double(m) * draws;
    REQUIRE(nq_power / n_coeff == Approx(q).epsilon(0.03));
    REQUIRE(hq_power / n_coeff == Approx(p2 - q).epsilon(0.03));
    // error orthogonal to the reconstruction
    const double corr_scale = std::sqrt(q * (p2 - q));
    REQUIRE(std::abs(corr / n_coeff) < 3.0 * corr_scale / std::sqrt(n_coeff));
}

TEST_CASE("analytic copies saturate gracefully at starved bit budgets") {
    auto cfg = edge_user_config();
    auto geom = build_geometry(cfg);
    GaussianRng rng(43);
    auto ch = draw_channels(geom, 8, rng);
    quantize_cross_channels(ch, geom, geom, {0}, cfg, rng);
    // the law exceeds the channel power at zero bits, so the copy conveys
    // (nearly) nothing but keeps a usable random direction
    REQUIRE(ch.hq_cross1[0].squaredNorm() > 0.0);
    REQUIRE(ch.hq_cross1[0].squaredNorm() < 1e-6 * geom[0].rx_power_other * 8);
    REQUIRE(ch.nq_cross1[0] == ch.cross1[0] - ch.hq_cross1[0]);
}

TEST_CASE("trial stream seeds separate trials and attempts") {
    const std::uint64_t base = 99;
    REQUIRE(trial_stream_seed(base, 0) != trial_stream_seed(base, 1));
    REQUIRE(trial_stream_seed(base, 5, 0) != trial_stream_seed(base, 5, 1));
    REQUIRE(trial_stream_seed(base, 7) == trial_stream_seed(base, 7));
}
