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
#include <span>
#include <string>
#include <vector>

#include "cbsim/channel.hpp"

namespace cbsim {

// Coordinated zero-forcing precoder for one base station. The constraint
// stack holds the station's own users' true channels followed by the other
// cell's quantized cross channels; beam j is the normalized j-th column of
// the stack's pseudo-inverse, serving own user j and nulling the remaining
// rows as represented in the CSI given. Exactly-zero quantized rows carry
// no constraint and are dropped (they only arise from the scalar quantizer
// at zero bits).
inline cmat build_zf_precoder(std::span<const cvec> own_csi, std::span<const cvec> other_cell_csi,
                              int M) {
    const int n = int(own_csi.size());
    std::vector<const cvec *> rows;
    rows.reserve(own_csi.size() + other_cell_csi.size());
    for (const auto &v : own_csi)
        rows.push_back(&v);
    for (const auto &v : other_cell_csi)
        if (v.squaredNorm() > 0.0)
            rows.push_back(&v);

    const int k = int(rows.size());
    cmat stack(k, M);
    for (int r = 0; r < k; ++r)
        stack.row(r) = rows[r]->adjoint();

    Eigen::CompleteOrthogonalDecomposition<cmat> cod(stack);
    if (cod.rank() < k)
        throw SingularityError("zero-forcing stack is rank-deficient (rank " +
                               std::to_string(cod.rank()) + " of " + std::to_string(k) + ")");
    cmat pinv = cod.pseudoInverse();
    cmat w = pinv.leftCols(n);
    for (int j = 0; j < n; ++j)
        w.col(j).normalize();
    return w;
}

struct PrecoderSet {
    cmat bs1; // M x N, beams serving cell-1 users
    cmat bs2;
};

inline PrecoderSet build_precoders(const ChannelRealization &ch, int M) {
    PrecoderSet p;
    p.bs1 = build_zf_precoder(ch.own1, ch.hq_cross2, M);
    p.bs2 = build_zf_precoder(ch.own2, ch.hq_cross1, M);
    return p;
}

struct SinrTerms {
    double sinr = 0.0;
    double signal = 0.0;     // P |h_own^H w_own|^2
    double same_cell = 0.0;  // P sum_{j != i} |h_own^H w_j|^2, zero up to rounding
    double cross_cell = 0.0; // P sum_j |h_cross^H w_other,j|^2
};

enum class Cell { one, two };

// Instantaneous per-user SINR. Path loss is folded into the channel
// variances, so the explicit power factors are the per-user transmit powers.
inline std::vector<SinrTerms> instantaneous_sinr(const ChannelRealization &ch,
                                                 const PrecoderSet &prec,
                                                 const ScenarioConfig &cfg,
                                                 Cell cell = Cell::one) {
    const auto &own = (cell == Cell::one) ? ch.own1 : ch.own2;
    const auto &cross = (cell == Cell::one) ? ch.cross1 : ch.cross2;
    const cmat &w_serving = (cell == Cell::one) ? prec.bs1 : prec.bs2;
    const cmat &w_other = (cell == Cell::one) ? prec.bs2 : prec.bs1;
    const double p = cfg.per_user_tx_power;
    const int n = int(own.size());

    std::vector<SinrTerms> out(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        Eigen::RowVectorXcd go = own[size_t(i)].adjoint() * w_serving;
        Eigen::RowVectorXcd gc = cross[size_t(i)].adjoint() * w_other;
        SinrTerms t;
        t.signal = p * std::norm(go[i]);
        double same = 0.0; // summed directly: the residuals are ~1e-30 of the
        for (int j = 0; j < n; ++j) // signal and would vanish in a subtraction
            if (j != i)
                same += std::norm(go[j]);
        t.same_cell = p * same;
        t.cross_cell = p * gc.squaredNorm();
        t.sinr = t.signal / (cfg.noise_power + t.same_cell + t.cross_cell);
        out[size_t(i)] = t;
    }
    return out;
}

// r = log2(1 + sinr), bits/symbol/Hz
inline double per_user_rate(double sinr) {
    if (sinr < 0.0)
        throw std::domain_error("per_user_rate: sinr must be >= 0");
    return std::log1p(sinr) / M_LN2;
}

} // namespace cbsim
