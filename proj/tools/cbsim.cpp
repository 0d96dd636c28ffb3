// SPDX-License-Identifier: Apache-2.0
//
// cbsim: two-cell coordinated zero-forcing downlink with limited-backhaul
// CSI exchange and per-user quantization bit allocation
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cbsim/cbsim.hpp"

namespace {

// exit codes: 0 ok, 2 config error, 3 numerical guard, 4 I/O
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;
constexpr int kExitIo = 4;

struct BitsRange {
    int lo = 0;
    int hi = 0;
};

BitsRange parse_bits(const std::string &text) {
    BitsRange r;
    auto colon = text.find(':');
    try {
        if (colon == std::string::npos) {
            r.lo = r.hi = std::stoi(text);
        } else {
            r.lo = std::stoi(text.substr(0, colon));
            r.hi = std::stoi(text.substr(colon + 1));
        }
    } catch (const std::exception &) {
        throw cbsim::ConfigError("bad --bits value '" + text + "' (expected N or A:B)");
    }
    if (r.lo < 0 || r.hi < r.lo)
        throw cbsim::ConfigError("bad --bits range '" + text + "'");
    return r;
}

struct CliOptions {
    std::string config_path;
    std::string out_path;
    std::string gnuplot_path;
    std::string bits_text;
    std::string scheme = "conventional";
    std::optional<int> users, antennas, trials;
    std::optional<double> gamma, d0, separation, power, noise, clip, gain;
    std::optional<std::uint64_t> seed;
};

void add_common_flags(CLI::App *cmd, CliOptions &o) {
    cmd->add_option("--config", o.config_path, "scenario file (key = value)");
    cmd->add_option("--users", o.users, "users per cell N");
    cmd->add_option("--antennas", o.antennas, "base-station antennas M");
    cmd->add_option("--gamma", o.gamma, "path loss exponent");
    cmd->add_option("--d0", o.d0, "reference distance [m]");
    cmd->add_option("--separation", o.separation, "base-station separation [m]");
    cmd->add_option("--power", o.power, "per-user transmit power [W]");
    cmd->add_option("--noise", o.noise, "noise power [W]");
    cmd->add_option("--trials", o.trials, "Monte-Carlo trials");
    cmd->add_option("--seed", o.seed, "rng seed");
    cmd->add_option("--clip", o.clip, "quantizer clip range [per-dim std devs]");
    cmd->add_option("--gain", o.gain, "analytic beam gain factor (0 = auto)");
    cmd->add_option("--out", o.out_path, "output file (default: stdout)");
    cmd->add_option("--gnuplot", o.gnuplot_path, "also write a gnuplot script (needs --out)");
}

cbsim::ScenarioConfig resolve_config(const CliOptions &o) {
    cbsim::ScenarioConfig cfg;
    if (!o.config_path.empty())
        cfg = cbsim::load_config(o.config_path);
    if (o.users)
        cfg.users_per_cell = *o.users;
    if (o.antennas)
        cfg.antennas = *o.antennas;
    if (o.gamma)
        cfg.path_loss_exponent = *o.gamma;
    if (o.d0)
        cfg.reference_distance = *o.d0;
    if (o.separation)
        cfg.bs_separation = *o.separation;
    if (o.power)
        cfg.per_user_tx_power = *o.power;
    if (o.noise)
        cfg.noise_power = *o.noise;
    if (o.trials)
        cfg.trials = *o.trials;
    if (o.seed)
        cfg.rng_seed = *o.seed;
    if (o.clip)
        cfg.clip_sigma = *o.clip;
    if (o.gain)
        cfg.array_gain = *o.gain;
    cfg.validate();
    return cfg;
}

void emit(const CliOptions &o, const cbsim::CsvTable &table) {
    if (o.out_path.empty())
        std::cout << table.to_string();
    else
        cbsim::write_file(o.out_path, table.to_string());
    if (!o.gnuplot_path.empty()) {
        if (o.out_path.empty())
            throw cbsim::ConfigError("--gnuplot needs --out so the script can point at the data");
        cbsim::write_file(o.gnuplot_path, cbsim::gnuplot_script(table, o.out_path));
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"two-cell coordinated beamforming simulator with backhaul bit allocation"};
    app.require_subcommand(1);

    CliOptions oi, os, om, of, oa;

    auto *c_intf = app.add_subcommand("interference-validate",
                                      "analytic vs simulated cross-cell interference sweep");
    add_common_flags(c_intf, oi);
    oi.bits_text = "3:12";
    c_intf->add_option("--bits", oi.bits_text, "bit sweep, single value or A:B");

    auto *c_sum = app.add_subcommand("sumrate-compare",
                                     "exhaustive-search vs conventional analytic sum rate");
    add_common_flags(c_sum, os);
    os.bits_text = "3:12";
    c_sum->add_option("--bits", os.bits_text, "average bits per user, single value or A:B");

    auto *c_mean = app.add_subcommand("mean-sweep", "empirical rate mean per scheme and budget");
    add_common_flags(c_mean, om);
    om.bits_text = "3:40";
    c_mean->add_option("--bits", om.bits_text, "average bits per user, single value or A:B");

    auto *c_fair = app.add_subcommand("fairness-frontier",
                                      "rate mean and rate variance per scheme and budget");
    add_common_flags(c_fair, of);
    of.bits_text = "3:40";
    c_fair->add_option("--bits", of.bits_text, "average bits per user, single value or A:B");

    auto *c_alloc = app.add_subcommand("allocate", "inspect one allocation");
    add_common_flags(c_alloc, oa);
    oa.bits_text = "8";
    c_alloc->add_option("--bits", oa.bits_text, "average bits per user");
    c_alloc->add_option("--scheme", oa.scheme,
                        "conventional | equal-sir | equal-interference | oracle | greedy");

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_intf->parsed()) {
            auto cfg = resolve_config(oi);
            auto range = parse_bits(oi.bits_text);
            auto pts = cbsim::run_interference_validate(cfg, range.lo, range.hi);
            emit(oi, cbsim::to_csv(pts));
        } else if (c_sum->parsed()) {
            // the comparison defaults to the 4-user, 8-antenna setup
            if (!os.users)
                os.users = 4;
            if (!os.antennas)
                os.antennas = 8;
            auto cfg = resolve_config(os);
            auto range = parse_bits(os.bits_text);
            auto pts = cbsim::run_sumrate_compare(cfg, range.lo, range.hi);
            emit(os, cbsim::to_csv(pts));
        } else if (c_mean->parsed()) {
            auto cfg = resolve_config(om);
            auto range = parse_bits(om.bits_text);
            auto pts = cbsim::run_mean_sweep(cfg, range.lo, range.hi);
            emit(om, cbsim::mean_sweep_csv(pts));
        } else if (c_fair->parsed()) {
            auto cfg = resolve_config(of);
            auto range = parse_bits(of.bits_text);
            auto pts = cbsim::run_mean_sweep(cfg, range.lo, range.hi);
            emit(of, cbsim::fairness_frontier_csv(pts));
        } else if (c_alloc->parsed()) {
            auto cfg = resolve_config(oa);
            auto range = parse_bits(oa.bits_text);
            if (range.lo != range.hi)
                throw cbsim::ConfigError("allocate expects a single --bits value");
            auto rep = cbsim::allocation_report(cfg, cbsim::scheme_from_name(oa.scheme),
                                                double(range.lo) * cfg.users_per_cell);
            std::cout << cbsim::render_allocation_report(rep);
        }
    } catch (const cbsim::ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const cbsim::SizeGuardError &e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const cbsim::SingularityError &e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitGuard;
    } catch (const cbsim::IoError &e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    }
    return 0;
}
