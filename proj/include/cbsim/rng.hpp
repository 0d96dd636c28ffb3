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
#include <complex>
#include <cstdint>
#include <random>

namespace cbsim {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Stream-splitting rule: every Monte-Carlo trial (and every redraw attempt
// within a trial) gets its own generator seeded by a splitmix64 mix of
// (scenario seed, trial index, attempt). Serial and parallel execution of
// the trial loop therefore produce bit-identical results.
inline std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t trial,
                                       std::uint64_t attempt = 0) {
    return splitmix64(splitmix64(seed ^ splitmix64(trial + 1)) + attempt);
}

// mt19937_64 with an explicit Box-Muller transform. The standard library's
// normal_distribution has an unspecified sample sequence, which would break
// the byte-identical-output contract across toolchains.
class GaussianRng {
  public:
    explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

    // uniform on (0, 1]; never 0, so log() below is safe
    double uniform() { return (double(eng_() >> 11) + 1.0) * 0x1.0p-53; }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    // CN(0, variance): independent real and imaginary parts of variance/2
    std::complex<double> cnormal(double variance) {
        double s = std::sqrt(variance * 0.5);
        double re = s * normal();
        double im = s * normal();
        return {re, im};
    }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace cbsim
