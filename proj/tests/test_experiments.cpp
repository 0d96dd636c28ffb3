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

#include <sstream>

#include "cbsim/experiments.hpp"

using namespace cbsim;
using Catch::Approx;

namespace {

ScenarioConfig quick8() {
    ScenarioConfig cfg;
    cfg.trials = 400;
    return cfg;
}

std::vector<std::string> lines_of(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string line;
    while (std::getline(ss, line))
        out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("interference validation sweep") {
    auto cfg = quick8();
    cfg.trials = 1500;
    auto pts = run_interference_validate(cfg, 3, 6);
    REQUIRE(pts.size() == 4);
    for (size_t k = 0; k < pts.size(); ++k) {
        REQUIRE(pts[k].bits == 3 + int(k));
        REQUIRE(pts[k].rel_error <= 0.10);
        REQUIRE(pts[k].stderr_ > 0.0);
        if (k > 0) {
            REQUIRE(pts[k].analytic < pts[k - 1].analytic);
            REQUIRE(pts[k].empirical < pts[k - 1].empirical);
        }
    }
}

TEST_CASE("interference CSV bytes are reproducible") {
    auto cfg = quick8();
    cfg.trials = 120;
    auto a = to_csv(run_interference_validate(cfg, 4, 6)).to_string();
    auto b = to_csv(run_interference_validate(cfg, 4, 6)).to_string();
    REQUIRE(a == b);
    auto ls = lines_of(a);
    REQUIRE(ls[0] == "# cbsim-csv/1 interference-validate");
    REQUIRE(ls[1] == "l,analytic_interference,empirical_interference,rel_error,stderr");
    REQUIRE(ls.size() == 2 + 3);
    REQUIRE(ls[2].substr(0, 2) == "4,");
}

TEST_CASE("sum-rate comparison table") {
    ScenarioConfig cfg;
    cfg.users_per_cell = 4;
    cfg.antennas = 8;
    cfg.user_positions = {400.0, 800.0, 1200.0, 1600.0};
    cfg.noise_power = 30.0;
    cfg.array_gain = 5.0;
    auto pts = run_sumrate_compare(cfg, 3, 12);
    REQUIRE(pts.size() == 10);
    for (size_t k = 0; k < pts.size(); ++k) {
        REQUIRE(pts[k].sumrate_oracle >= pts[k].sumrate_conventional);
        REQUIRE(pts[k].gap_percent <= 5.0);
        if (k > 0) {
            REQUIRE(pts[k].sumrate_oracle >= pts[k - 1].sumrate_oracle);
            REQUIRE(pts[k].sumrate_conventional >= pts[k - 1].sumrate_conventional);
        }
    }
    auto csv = to_csv(pts).to_string();
    auto ls = lines_of(csv);
    REQUIRE(ls[0] == "# cbsim-csv/1 sumrate-compare");
    REQUIRE(ls[1] == "avg_bits,sumrate_conventional,sumrate_oracle,gap_percent");
}

TEST_CASE("mean sweep covers every scheme and budget") {
    auto cfg = quick8();
    cfg.trials = 100;
    auto pts = run_mean_sweep(cfg, 5, 7);
    REQUIRE(pts.size() == 3 * 3);
    int idx = 0;
    for (int avg = 5; avg <= 7; ++avg)
        for (auto s : fairness_schemes()) {
            REQUIRE(pts[size_t(idx)].avg_bits == avg);
            REQUIRE(pts[size_t(idx)].scheme == s);
            REQUIRE(pts[size_t(idx)].sim.rate_mean > 0.0);
            ++idx;
        }
    auto csv = mean_sweep_csv(pts);
    REQUIRE(csv.columns == std::vector<std::string>{"avg_bits", "scheme", "rate_mean", "stderr"});
    REQUIRE(csv.rows.size() == 9);
    REQUIRE(csv.rows[0][1] == "conventional");
    REQUIRE(csv.rows[1][1] == "equal-sir");
    REQUIRE(csv.rows[2][1] == "equal-interference");
}

TEST_CASE("fairness frontier reports analytic and empirical statistics") {
    auto cfg = quick8();
    cfg.trials = 100;
    cfg.noise_power = 1e-12;
    cfg.array_gain = 9.0;
    auto pts = run_mean_sweep(cfg, 8, 8);
    auto csv = fairness_frontier_csv(pts);
    REQUIRE(csv.columns.size() == 7);
    // the equal-SIR row should show (near) zero analytic variance, others not
    double var_sir = -1.0, var_conv = -1.0;
    for (size_t r = 0; r < csv.rows.size(); ++r) {
        if (csv.rows[r][1] == "equal-sir")
            var_sir = std::stod(csv.rows[r][3]);
        if (csv.rows[r][1] == "conventional")
            var_conv = std::stod(csv.rows[r][3]);
        REQUIRE(csv.rows[r][6] == "0"); // no clipping at 8 bits per user
    }
    REQUIRE(var_sir >= 0.0);
    REQUIRE(var_sir < 1e-6);
    REQUIRE(var_conv > 1.0);
}

TEST_CASE("allocation report") {
    SECTION("conventional gives a flat bit column") {
        auto cfg = quick8();
        auto rep = allocation_report(cfg, Scheme::conventional, 64.0);
        for (const auto &row : rep.rows) {
            REQUIRE(row.bits_integer == 8);
            REQUIRE(row.bits_fractional == Approx(8.0));
        }
    }
    SECTION("symmetric geometry gives a flat bit column for every scheme") {
        auto cfg = quick8();
        cfg.user_positions.assign(8, 1600.0);
        for (auto s : fairness_schemes()) {
            auto rep = allocation_report(cfg, s, 48.0);
            for (const auto &row : rep.rows)
                REQUIRE(row.bits_fractional == Approx(6.0).margin(1e-9));
        }
    }
    SECTION("equal-SIR column of analytic SINR is constant") {
        auto cfg = quick8();
        cfg.noise_power = 1e-15;
        auto rep = allocation_report(cfg, Scheme::equal_sir, 64.0);
        REQUIRE(rep.clipped_users == 0);
        for (const auto &row : rep.rows)
            REQUIRE(row.sinr_analytic ==
                    Approx(rep.rows[0].sinr_analytic).epsilon(1e-6));
    }
    SECTION("rendering carries the header and one line per user") {
        auto cfg = quick8();
        auto rep = allocation_report(cfg, Scheme::equal_interference, 40.0);
        auto text = render_allocation_report(rep);
        REQUIRE(text.find("scheme=equal-interference") != std::string::npos);
        REQUIRE(lines_of(text).size() == 2 + 8);
    }
}

TEST_CASE("gnuplot companions reference the data file") {
    auto cfg = quick8();
    cfg.trials = 60;
    auto t = to_csv(run_interference_validate(cfg, 4, 5));
    auto script = gnuplot_script(t, "data.csv");
    REQUIRE(script.find("set datafile separator ','") != std::string::npos);
    REQUIRE(script.find("'data.csv'") != std::string::npos);
    REQUIRE(script.find("logscale") != std::string::npos);

    auto sweep = mean_sweep_csv(run_mean_sweep(cfg, 5, 5));
    auto script2 = gnuplot_script(sweep, "m.csv");
    REQUIRE(script2.find("equal-sir") != std::string::npos);
    REQUIRE(script2.find("equal-interference") != std::string::npos);
}

TEST_CASE("full-precision doubles survive the round trip") {
    const double x = 0.1234567890123456789;
    REQUIRE(std::stod(fmt_double(x)) == x);
    REQUIRE(fmt_double(2.0) == "2");
}
