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

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cbsim/montecarlo.hpp"

namespace cbsim {

// CSV output contract: first line is the schema token "# cbsim-csv/1 <name>",
// second line the fixed column header, then one row per record. UTF-8, LF
// line endings, '.' decimal separator, doubles at full precision (%.17g),
// so identical inputs produce identical bytes.

inline std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct CsvTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_string() const {
        std::ostringstream os;
        os << "# cbsim-csv/1 " << name << "\n";
        for (size_t c = 0; c < columns.size(); ++c)
            os << columns[c] << (c + 1 < columns.size() ? "," : "");
        os << "\n";
        for (const auto &row : rows) {
            for (size_t c = 0; c < row.size(); ++c)
                os << row[c] << (c + 1 < row.size() ? "," : "");
            os << "\n";
        }
        return os.str();
    }
};

inline void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw IoError("cannot open output file: " + path);
    out << content;
    if (!out)
        throw IoError("write failed: " + path);
}

// ---------------------------------------------------------------------------
// interference validation sweep
// ---------------------------------------------------------------------------

struct InterferencePoint {
    int bits = 0;
    double analytic = 0.0;  // user-average analytic interference
    double empirical = 0.0; // user-average Monte-Carlo interference
    double rel_error = 0.0;
    double stderr_ = 0.0; // standard error of the empirical average
    std::vector<double> analytic_user, empirical_user;
};

inline std::vector<InterferencePoint> run_interference_validate(const ScenarioConfig &cfg,
                                                                int bits_min = 3,
                                                                int bits_max = 12,
                                                                unsigned threads = 0) {
    cfg.validate();
    const auto geom = build_geometry(cfg);
    AnalyticalModel model(geom, cfg);
    std::vector<InterferencePoint> out;
    for (int l = bits_min; l <= bits_max; ++l) {
        BitAllocation alloc = conventional(cfg.users_per_cell, double(l) * cfg.users_per_cell);
        SimulationResult sim = simulate(cfg, model, alloc, threads);
        InterferencePoint p;
        p.bits = l;
        p.empirical_user = sim.intf_user_mean;
        p.analytic_user = sim.intf_user_analytic;
        double asum = 0.0;
        for (double a : p.analytic_user)
            asum += a;
        p.analytic = asum / double(p.analytic_user.size());
        p.empirical = sim.intf_mean;
        p.rel_error = std::abs(p.empirical - p.analytic) / p.analytic;
        p.stderr_ = sim.intf_mean_se;
        out.push_back(std::move(p));
    }
    return out;
}

inline CsvTable to_csv(const std::vector<InterferencePoint> &pts) {
    CsvTable t;
    t.name = "interference-validate";
    t.columns = {"l", "analytic_interference", "empirical_interference", "rel_error", "stderr"};
    for (const auto &p : pts)
        t.rows.push_back({std::to_string(p.bits), fmt_double(p.analytic), fmt_double(p.empirical),
                          fmt_double(p.rel_error), fmt_double(p.stderr_)});
    return t;
}

// ---------------------------------------------------------------------------
// exhaustive-search vs conventional sum rate
// ---------------------------------------------------------------------------

struct SumratePoint {
    int avg_bits = 0;
    double sumrate_conventional = 0.0;
    double sumrate_oracle = 0.0;
    double gap_percent = 0.0; // 100 (oracle - conventional) / oracle
    std::vector<int> oracle_bits;
};

inline std::vector<SumratePoint> run_sumrate_compare(const ScenarioConfig &cfg, int avg_min = 3,
                                                     int avg_max = 12) {
    cfg.validate();
    const auto geom = build_geometry(cfg);
    AnalyticalModel model(geom, cfg);
    std::vector<SumratePoint> out;
    for (int avg = avg_min; avg <= avg_max; ++avg) {
        const int d = avg * cfg.users_per_cell;
        BitAllocation conv = conventional(cfg.users_per_cell, double(d));
        BitAllocation best = exhaustive_oracle(model, d);
        SumratePoint p;
        p.avg_bits = avg;
        p.sumrate_conventional = model.sum_rate(conv.fractional);
        p.sumrate_oracle = model.sum_rate(best.fractional);
        p.gap_percent = 100.0 * (p.sumrate_oracle - p.sumrate_conventional) / p.sumrate_oracle;
        p.oracle_bits = best.integer;
        out.push_back(std::move(p));
    }
    return out;
}

inline CsvTable to_csv(const std::vector<SumratePoint> &pts) {
    CsvTable t;
    t.name = "sumrate-compare";
    t.columns = {"avg_bits", "sumrate_conventional", "sumrate_oracle", "gap_percent"};
    for (const auto &p : pts)
        t.rows.push_back({std::to_string(p.avg_bits), fmt_double(p.sumrate_conventional),
                          fmt_double(p.sumrate_oracle), fmt_double(p.gap_percent)});
    return t;
}

// ---------------------------------------------------------------------------
// rate-mean sweep and fairness frontier
// ---------------------------------------------------------------------------

inline const std::vector<Scheme> &fairness_schemes() {
    static const std::vector<Scheme> s{Scheme::conventional, Scheme::equal_sir,
                                       Scheme::equal_interference};
    return s;
}

struct SweepPoint {
    int avg_bits = 0;
    Scheme scheme = Scheme::conventional;
    SimulationResult sim;
};

inline std::vector<SweepPoint> run_budget_sweep(const ScenarioConfig &cfg,
                                                const std::vector<Scheme> &schemes, int avg_min,
                                                int avg_max, unsigned threads = 0) {
    cfg.validate();
    const auto geom = build_geometry(cfg);
    AnalyticalModel model(geom, cfg);
    std::vector<SweepPoint> out;
    for (int avg = avg_min; avg <= avg_max; ++avg) {
        for (Scheme s : schemes) {
            BitAllocation alloc = allocate(s, geom, model, double(avg) * cfg.users_per_cell);
            SweepPoint p;
            p.avg_bits = avg;
            p.scheme = s;
            p.sim = simulate(cfg, model, alloc, threads);
            out.push_back(std::move(p));
        }
    }
    return out;
}

inline std::vector<SweepPoint> run_mean_sweep(const ScenarioConfig &cfg, int avg_min = 3,
                                              int avg_max = 40, unsigned threads = 0) {
    return run_budget_sweep(cfg, fairness_schemes(), avg_min, avg_max, threads);
}

inline CsvTable mean_sweep_csv(const std::vector<SweepPoint> &pts) {
    CsvTable t;
    t.name = "mean-sweep";
    t.columns = {"avg_bits", "scheme", "rate_mean", "stderr"};
    for (const auto &p : pts)
        t.rows.push_back({std::to_string(p.avg_bits), scheme_name(p.scheme),
                          fmt_double(p.sim.rate_mean), fmt_double(p.sim.rate_mean_se)});
    return t;
}

inline CsvTable fairness_frontier_csv(const std::vector<SweepPoint> &pts) {
    CsvTable t;
    t.name = "fairness-frontier";
    t.columns = {"avg_bits",           "scheme",
                 "rate_mean_analytic", "rate_variance_analytic",
                 "rate_mean",          "rate_variance",
                 "clipped_users"};
    for (const auto &p : pts)
        t.rows.push_back({std::to_string(p.avg_bits), scheme_name(p.scheme),
                          fmt_double(p.sim.rate_mean_analytic),
                          fmt_double(p.sim.rate_variance_analytic), fmt_double(p.sim.rate_mean),
                          fmt_double(p.sim.rate_variance), std::to_string(p.sim.clipped_users)});
    return t;
}

// ---------------------------------------------------------------------------
// gnuplot companions
// ---------------------------------------------------------------------------

// A ready-to-run gnuplot script for a CSV written to csv_path. The leading
// '#' schema line is a gnuplot comment, so the data file loads as-is.
inline std::string gnuplot_script(const CsvTable &t, const std::string &csv_path) {
    std::ostringstream os;
    os << "# gnuplot companion for " << t.name << "\n";
    os << "set datafile separator ','\n";
    os << "set key left top\n";
    os << "set grid\n";
    const std::string f = "'" + csv_path + "'";
    auto scheme_col = [&](int ycol, const char *scheme) {
        return f + " using 1:(strcol(2) eq \"" + scheme + "\" ? column(" +
               std::to_string(ycol) + ") : 1/0) with linespoints title '" + scheme + "'";
    };
    if (t.name == "interference-validate") {
        os << "set logscale y\nset xlabel 'bits per user per channel'\n"
           << "set ylabel 'cross-cell interference [W]'\n";
        os << "plot " << f << " using 1:2 with lines title 'analytic', " << f
           << " using 1:3:5 with yerrorbars title 'simulated'\n";
    } else if (t.name == "sumrate-compare") {
        os << "set xlabel 'average bits per user'\nset ylabel 'sum rate [bits/symbol/Hz]'\n";
        os << "plot " << f << " using 1:2 with linespoints title 'conventional', " << f
           << " using 1:3 with linespoints title 'exhaustive'\n";
    } else if (t.name == "mean-sweep") {
        os << "set xlabel 'average bits per user'\nset ylabel 'rate mean [bits/symbol/Hz]'\n";
        os << "plot " << scheme_col(3, "conventional") << ", \\\n     "
           << scheme_col(3, "equal-sir") << ", \\\n     " << scheme_col(3, "equal-interference")
           << "\n";
    } else if (t.name == "fairness-frontier") {
        os << "set xlabel 'rate mean [bits/symbol/Hz]'\nset ylabel 'rate variance'\n";
        auto frontier = [&](const char *scheme) {
            return f + " using (strcol(2) eq \"" + std::string(scheme) +
                   "\" ? column(3) : 1/0):4 with linespoints title '" + scheme + "'";
        };
        os << "plot " << frontier("conventional") << ", \\\n     " << frontier("equal-sir")
           << ", \\\n     " << frontier("equal-interference") << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// allocation inspector
// ---------------------------------------------------------------------------

struct AllocationRow {
    int user = 0;
    double d_own = 0.0, d_other = 0.0;
    double bits_fractional = 0.0;
    int bits_integer = 0;
    double sinr_analytic = 0.0;
    double rate_analytic = 0.0;
    Region region = Region::neither;
};

struct AllocationReport {
    Scheme scheme = Scheme::conventional;
    double budget = 0.0;
    double water_level = 0.0;
    int clipped_users = 0;
    Region aggregate = Region::neither;
    std::vector<AllocationRow> rows;
};

inline AllocationReport allocation_report(const ScenarioConfig &cfg, Scheme scheme,
                                          double budget) {
    cfg.validate();
    const auto geom = build_geometry(cfg);
    AnalyticalModel model(geom, cfg);
    BitAllocation alloc = allocate(scheme, geom, model, budget);
    RegionReport regions =
        classify_region(model, alloc.fractional, cfg.region_rho_hi, cfg.region_rho_lo);
    AllocationReport rep;
    rep.scheme = scheme;
    rep.budget = budget;
    rep.water_level = alloc.water_level;
    rep.clipped_users = alloc.clipped_users;
    rep.aggregate = regions.aggregate;
    for (size_t i = 0; i < geom.size(); ++i) {
        AllocationRow r;
        r.user = int(i);
        r.d_own = geom[i].d_own;
        r.d_other = geom[i].d_other;
        r.bits_fractional = alloc.fractional[i];
        r.bits_integer = alloc.integer[i];
        r.sinr_analytic = model.sinr(int(i), alloc.fractional[i]);
        r.rate_analytic = model.rate(int(i), alloc.fractional[i]);
        r.region = regions.per_user[i];
        rep.rows.push_back(r);
    }
    return rep;
}

inline std::string render_allocation_report(const AllocationReport &rep) {
    std::ostringstream os;
    os << "scheme=" << scheme_name(rep.scheme) << " budget=" << fmt_double(rep.budget)
       << " water_level=" << fmt_double(rep.water_level)
       << " clipped_users=" << rep.clipped_users << " aggregate_region="
       << region_name(rep.aggregate) << "\n";
    char line[256];
    std::snprintf(line, sizeof(line), "%4s %10s %10s %12s %6s %14s %12s %9s\n", "user", "d_own",
                  "d_other", "bits_frac", "bits", "sinr_analytic", "rate", "region");
    os << line;
    for (const auto &r : rep.rows) {
        std::snprintf(line, sizeof(line), "%4d %10.1f %10.1f %12.4f %6d %14.6g %12.6g %9s\n",
                      r.user, r.d_own, r.d_other, r.bits_fractional, r.bits_integer,
                      r.sinr_analytic, r.rate_analytic, region_name(r.region));
        os << line;
    }
    return os.str();
}

} // namespace cbsim
