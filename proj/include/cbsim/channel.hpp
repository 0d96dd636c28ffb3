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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "cbsim/geometry.hpp"
#include "cbsim/rng.hpp"

namespace cbsim {

using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

// ---------------------------------------------------------------------------
// quantizer noise law
// ---------------------------------------------------------------------------

// Per-complex-coefficient noise power of an l-bit-per-dimension uniform
// quantizer: Q(l) = const * 2^(-2l). One extra bit per dimension cuts the
// noise by exactly 6 dB.
inline double analytic_q(double bits, double noise_const) {
    if (bits < 0.0)
        throw std::domain_error("analytic_q: bits must be >= 0");
    return noise_const * std::exp2(-2.0 * bits);
}

// The constant of the law for a channel of per-coefficient power rx_power,
// quantized per real dimension over [-c, c] with c = clip_sigma * stddev:
// two dimensions of step^2/12 give 2c^2/3 = clip_sigma^2 * rx_power / 3.
inline double quantizer_noise_const(double rx_power, double clip_sigma) {
    return clip_sigma * clip_sigma * rx_power / 3.0;
}

// ---------------------------------------------------------------------------
// scalar uniform quantizer (the physical reference for the law above)
// ---------------------------------------------------------------------------

struct QuantizerSpec {
    int bits = 0;           // l, per real dimension
    double clip_range = 1.0; // c > 0

    double step() const { return 2.0 * clip_range / std::exp2(bits); }

    void validate() const {
        if (bits < 0)
            throw ConfigError("QuantizerSpec: bits must be >= 0");
        if (!(clip_range > 0.0))
            throw ConfigError("QuantizerSpec: clip_range must be > 0");
    }

    static QuantizerSpec for_power(double rx_power, int bits, double clip_sigma) {
        QuantizerSpec s;
        s.bits = bits;
        s.clip_range = clip_sigma * std::sqrt(rx_power * 0.5);
        return s;
    }
};

struct QuantizeResult {
    cvec hq; // reconstructed vector
    cvec nq; // h - hq, bit-exact
    long clip_events = 0;
};

// Mid-rise uniform quantization applied independently to every real and
// imaginary component: 2^l cells over [-c, c], reconstruction at the cell
// midpoint. Components beyond the range land in the boundary cell and are
// counted as clip events.
inline QuantizeResult quantize_vector(const cvec &h, const QuantizerSpec &spec) {
    spec.validate();
    const double c = spec.clip_range;
    const double delta = spec.step();
    const double levels = std::exp2(spec.bits);
    QuantizeResult out;
    out.hq.resize(h.size());
    out.nq.resize(h.size());
    auto q1 = [&](double x) {
        if (x < -c || x > c)
            ++out.clip_events;
        double idx = std::floor((x + c) / delta);
        if (idx < 0.0)
            idx = 0.0;
        if (idx > levels - 1.0)
            idx = levels - 1.0;
        return -c + (idx + 0.5) * delta;
    };
    for (Eigen::Index k = 0; k < h.size(); ++k) {
        double re = q1(h[k].real());
        double im = q1(h[k].imag());
        out.hq[k] = {re, im};
        out.nq[k] = h[k] - out.hq[k];
    }
    return out;
}

// ---------------------------------------------------------------------------
// channel realizations
// ---------------------------------------------------------------------------

// One Monte-Carlo draw of every channel vector in the two-cell system.
// own*  : serving-station channels, known perfectly at the serving station.
// cross*: interfering-station channels, conveyed over the backhaul in
//         quantized form (hq = true - nq with h = hq + nq bit-exact).
struct ChannelRealization {
    std::vector<cvec> own1, cross1; // cell-1 users
    std::vector<cvec> own2, cross2; // cell-2 users
    std::vector<cvec> hq_cross1, nq_cross1;
    std::vector<cvec> hq_cross2, nq_cross2;
    std::vector<int> bits; // per user, applied to both cells' cross channels
    long clip_events = 0;
};

// ZMCSCG channels with the received power folded into the entry variance.
// Draw order is fixed (own1, cross1, own2, cross2; per user; per component;
// real then imaginary) so a given rng state always yields the same draw.
inline ChannelRealization draw_channels(const std::vector<UserGeometry> &geom1,
                                        const std::vector<UserGeometry> &geom2, int M,
                                        GaussianRng &rng) {
    auto draw_set = [&](const std::vector<UserGeometry> &g, bool own) {
        std::vector<cvec> vs;
        vs.reserve(g.size());
        for (const auto &u : g) {
            const double var = own ? u.rx_power_own : u.rx_power_other;
            cvec v(M);
            for (int k = 0; k < M; ++k)
                v[k] = rng.cnormal(var);
            vs.push_back(std::move(v));
        }
        return vs;
    };
    ChannelRealization ch;
    ch.own1 = draw_set(geom1, true);
    ch.cross1 = draw_set(geom1, false);
    ch.own2 = draw_set(geom2, true);
    ch.cross2 = draw_set(geom2, false);
    return ch;
}

// Convenience overload for the mirror-symmetric layout.
inline ChannelRealization draw_channels(const std::vector<UserGeometry> &geom, int M,
                                        GaussianRng &rng) {
    return draw_channels(geom, geom, M, rng);
}

namespace detail {

// Gaussian test channel matched to Q = analytic_q(l, const):
//   hq = (1 - Q/P) h + z,  z ~ CN(0, (P - Q) Q / P)
// so that E|hq|^2 = P - Q, E|nq|^2 = Q and, unlike a scalar quantizer,
// E[nq hq*] = 0 exactly. The orthogonality is what makes nulling hq leave
// the full noise power as residual interference at every bit count. Q is
// capped just below P: at bit counts where the law exceeds the channel
// power the backhaul conveys nothing, and the constraint row degenerates
// to an independent random direction instead of vanishing.
inline cvec model_quantize(const cvec &h, double rx_power, double q, GaussianRng &rng) {
    const double cap = (1.0 - 1e-9) * rx_power;
    const double qe = q < cap ? q : cap;
    const double shrink = 1.0 - qe / rx_power;
    const double zvar = (rx_power - qe) * qe / rx_power;
    cvec hq(h.size());
    for (Eigen::Index k = 0; k < h.size(); ++k)
        hq[k] = shrink * h[k] + rng.cnormal(zvar);
    return hq;
}

} // namespace detail

// Produces the quantized cross-channel copies for both cells with the
// per-user bit allocation. Stream order: cell-1 cross vectors first, then
// cell-2, one user at a time.
inline void quantize_cross_channels(ChannelRealization &ch,
                                    const std::vector<UserGeometry> &geom1,
                                    const std::vector<UserGeometry> &geom2,
                                    const std::vector<int> &bits, const ScenarioConfig &cfg,
                                    GaussianRng &rng) {
    auto run = [&](const std::vector<cvec> &cross, const std::vector<UserGeometry> &g,
                   std::vector<cvec> &hq_out, std::vector<cvec> &nq_out) {
        hq_out.clear();
        nq_out.clear();
        for (size_t i = 0; i < cross.size(); ++i) {
            const double p = g[i].rx_power_other;
            if (cfg.quantizer_model == QuantizerModel::analytic) {
                const double q = analytic_q(double(bits[i]),
                                            quantizer_noise_const(p, cfg.clip_sigma));
                cvec hq = detail::model_quantize(cross[i], p, q, rng);
                nq_out.push_back(cross[i] - hq);
                hq_out.push_back(std::move(hq));
            } else {
                auto res = quantize_vector(cross[i],
                                           QuantizerSpec::for_power(p, bits[i], cfg.clip_sigma));
                ch.clip_events += res.clip_events;
                hq_out.push_back(std::move(res.hq));
                nq_out.push_back(std::move(res.nq));
            }
        }
    };
    ch.bits = bits;
    run(ch.cross1, geom1, ch.hq_cross1, ch.nq_cross1);
    run(ch.cross2, geom2, ch.hq_cross2, ch.nq_cross2);
}

} // namespace cbsim
