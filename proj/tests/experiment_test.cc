// Copyright 2026 The leaksim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "leaksim/experiment.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

namespace leaksim {
namespace {

const char *kBasicConfig = R"(# sweep
version = 1
variant = swap_lrc
d = 3, 5
rounds = 4
p = 0.001, 0.002
r = 0.5
side_policy = control_only
site_filter = cnot_ordinal(2)
p_init_leak = 0.0001
shots = 500
master_seed = 77
output = out.csv
)";

ResultRow synthetic_row(const std::string &variant, double p, double p_logical, uint64_t shots) {
    ResultRow r;
    r.variant = variant;
    r.d = 3;
    r.rounds = 3;
    r.p = p;
    r.r = 1;
    r.side_policy = "two_sided";
    r.site_filter = "all";
    r.shots = shots;
    r.failures = static_cast<uint64_t>(std::llround(p_logical * static_cast<double>(shots)));
    r.p_logical = p_logical;
    std::tie(r.ci_low, r.ci_high) = wilson_interval(r.failures, r.shots);
    r.master_seed = 1;
    return r;
}

TEST(Config, ParsesEveryField) {
    auto c = parse_config(kBasicConfig);
    EXPECT_EQ(c.variant, Variant::SwapLrc);
    EXPECT_EQ(c.distances, (std::vector<uint32_t>{3, 5}));
    EXPECT_EQ(c.rounds, 4u);
    EXPECT_EQ(c.ps, (std::vector<double>{0.001, 0.002}));
    EXPECT_EQ(c.r, 0.5);
    EXPECT_EQ(c.side_policy, SidePolicy::ControlOnly);
    EXPECT_EQ(c.site_filter, SiteFilter::cnot_ordinal(2));
    EXPECT_EQ(c.p_init_leak, 0.0001);
    EXPECT_EQ(c.shots, 500u);
    EXPECT_EQ(c.master_seed, 77u);
    EXPECT_EQ(c.output, "out.csv");
}

TEST(Config, RoundTrips) {
    auto c = parse_config(kBasicConfig);
    auto again = parse_config(config_to_text(c));
    EXPECT_EQ(config_to_text(again), config_to_text(c));
    c.p_init_leak_tied = true;
    c.target_failures = 300;
    auto tied = parse_config(config_to_text(c));
    EXPECT_TRUE(tied.p_init_leak_tied);
    EXPECT_EQ(tied.target_failures, 300u);
    EXPECT_DOUBLE_EQ(tied.noise_for(0.002).p_init_leak, 0.001);
}

TEST(Config, DefaultsRoundsToDistance) {
    auto c = parse_config("version = 1\nvariant = standard\np = 0.01\n");
    EXPECT_EQ(c.rounds_for(3), 3u);
    EXPECT_EQ(c.rounds_for(5), 5u);
    EXPECT_EQ(c.distances, std::vector<uint32_t>{3});
}

void expect_field_error(const std::string &text, const std::string &field) {
    try {
        parse_config(text);
        ADD_FAILURE() << "no error for field " << field;
    } catch (const ConfigError &e) {
        EXPECT_EQ(e.field(), field) << e.what();
    }
}

TEST(Config, ErrorsNameTheField) {
    const std::string head = "version = 1\nvariant = standard\n";
    expect_field_error("variant = standard\np = 0.01\n", "version");
    expect_field_error("version = 2\nvariant = standard\np = 0.01\n", "version");
    expect_field_error(head + "p = 0.01\nshotz = 5\n", "shotz");
    expect_field_error(head + "p = 0.01\np = 0.02\n", "p");
    expect_field_error(head + "p = 0.3\n", "p");
    expect_field_error(head + "p = 0\n", "p");
    expect_field_error(head + "p = abc\n", "p");
    expect_field_error(head + "p = 0.01\nd = 4\n", "d");
    expect_field_error(head + "p = 0.01\nr = -1\n", "r");
    expect_field_error(head + "p = 0.01\nshots = 0\n", "shots");
    expect_field_error(head + "p = 0.01\nside_policy = sideways\n", "side_policy");
    expect_field_error(head + "p = 0.01\nsite_filter = cnot_ordinal(9)\n", "site_filter");
    expect_field_error(head + "p = 0.01\np_init_leak = 2\n", "p_init_leak");
    expect_field_error("version = 1\nvariant = hexagonal\np = 0.01\n", "variant");
    expect_field_error(head, "p");
}

TEST(Wilson, KnownValues) {
    auto [lo, hi] = wilson_interval(0, 10);
    EXPECT_DOUBLE_EQ(lo, 0.0);
    EXPECT_NEAR(hi, 0.27753, 1e-5);
    std::tie(lo, hi) = wilson_interval(5, 10);
    EXPECT_NEAR(lo, 0.23659, 1e-5);
    EXPECT_NEAR(hi, 0.76341, 1e-5);
    std::tie(lo, hi) = wilson_interval(0, 0);
    EXPECT_EQ(lo, 0.0);
    EXPECT_EQ(hi, 1.0);
}

TEST(Wilson, CoverageOnBernoulliData) {
    std::mt19937_64 rng(31);
    for (double rate : {0.01, 0.1, 0.4}) {
        std::bernoulli_distribution coin(rate);
        int covered = 0;
        for (int rep = 0; rep < 1000; rep++) {
            uint64_t k = 0;
            for (int i = 0; i < 500; i++) {
                k += coin(rng);
            }
            auto [lo, hi] = wilson_interval(k, 500);
            covered += lo <= rate && rate <= hi;
        }
        EXPECT_GE(covered, 930) << rate;
        EXPECT_LE(covered, 970) << rate;
    }
}

TEST(Fit, ExactPowerLaw) {
    std::vector<ResultRow> rows;
    for (double p : {0.001, 0.002, 0.004, 0.008}) {
        rows.push_back(synthetic_row("standard", p, 1000 * p * p, 10000000));
    }
    auto fit = fit_exponent(rows, 3);
    EXPECT_NEAR(fit.slope, 2.0, 1e-9);
    EXPECT_NEAR(fit.slope_stderr, 0.0, 1e-9);
    EXPECT_NEAR(fit.evaluate(0.003), 1000 * 0.003 * 0.003, 1e-12);
    EXPECT_EQ(fit.points_used, 4u);
    EXPECT_EQ(fit.p_min, 0.001);
    EXPECT_EQ(fit.p_max, 0.008);
}

TEST(Fit, UsesOnlyQualifyingPoints) {
    std::vector<ResultRow> rows;
    rows.push_back(synthetic_row("standard", 0.001, 0.001, 50000));  // 50 failures
    rows.push_back(synthetic_row("standard", 0.002, 0.004, 100000));
    rows.push_back(synthetic_row("standard", 0.003, 0.009, 100000));
    rows.push_back(synthetic_row("standard", 0.2, 0.9, 10000));  // above 0.3
    EXPECT_THROW(fit_exponent(rows, 3), InsufficientData);
    rows.push_back(synthetic_row("standard", 0.004, 0.016, 100000));
    auto fit = fit_exponent(rows, 3);
    EXPECT_EQ(fit.points_used, 3u);
    EXPECT_NEAR(fit.slope, 2.0, 1e-6);
    EXPECT_THROW(fit_exponent(rows, 5), InsufficientData);
    EXPECT_THROW(fit_exponent(rows, 3, std::make_pair(0.0025, 0.01)), InsufficientData);
}

TEST(Fit, RejectsMixedSeries) {
    std::vector<ResultRow> rows;
    for (double p : {0.001, 0.002, 0.004}) {
        rows.push_back(synthetic_row("standard", p, 100 * p, 1000000));
    }
    rows.push_back(synthetic_row("swap_lrc", 0.003, 0.3 * 0.001, 1000000));
    EXPECT_THROW(fit_exponent(rows, 3), std::invalid_argument);
}

TEST(Csv, RoundTripsLosslessly) {
    std::vector<ResultRow> rows = {synthetic_row("standard", 0.001, 0.0123456789, 1234567),
                                   synthetic_row("mixed_lrc", 1.0 / 3.0, 0.1, 10)};
    rows[1].site_filter = "cnot_ordinal(3)";
    rows[1].p_init_leak = 2.0 / 3.0 * 1e-3;
    rows[1].master_seed = 18446744073709551615ull;
    auto back = parse_csv(to_csv(rows));
    ASSERT_EQ(back.size(), rows.size());
    for (size_t i = 0; i < rows.size(); i++) {
        EXPECT_EQ(back[i], rows[i]);
    }
    EXPECT_EQ(to_csv(back), to_csv(rows));
    EXPECT_THROW(parse_csv("a,b\n"), std::invalid_argument);
    EXPECT_THROW(parse_csv(csv_header() + "\nstandard,3\n"), std::invalid_argument);
}

TEST(Compare, IdenticalTablesTie) {
    std::vector<ResultRow> a;
    for (double p : {0.001, 0.002}) {
        a.push_back(synthetic_row("standard", p, p * 10, 100000));
    }
    for (const auto &c : compare_variants(a, a)) {
        EXPECT_EQ(c.lower, "tie");
        EXPECT_FALSE(c.significant);
    }
    auto b = a;
    b[0] = synthetic_row("swap_lrc", 0.001, 0.001, 100000);
    auto cmp = compare_variants(a, b);
    EXPECT_EQ(cmp[0].lower, "b");
    EXPECT_TRUE(cmp[0].significant);
    b.pop_back();
    EXPECT_THROW(compare_variants(a, b), std::invalid_argument);
}

TEST(PlotData, SeriesAndOverlays) {
    std::vector<ResultRow> rows;
    for (const char *v : {"standard", "swap_lrc"}) {
        for (double p : {0.001, 0.002, 0.003, 0.004, 0.005}) {
            rows.push_back(synthetic_row(v, p, 5000 * p * p, 1000000));
        }
    }
    auto dir = std::filesystem::temp_directory_path() / "leaksim_plot_test";
    std::filesystem::remove_all(dir);
    auto files = emit_plot_data(rows, dir.string());
    size_t series = 0, overlays = 0;
    for (const auto &f : files) {
        auto name = std::filesystem::path(f).filename().string();
        series += name.rfind("series_", 0) == 0;
        overlays += name.rfind("overlay_", 0) == 0;
    }
    EXPECT_EQ(series, 2u);
    EXPECT_EQ(overlays, 2u);
    auto back = read_csv((dir / "series_standard_d3_two_sided_all.csv").string());
    EXPECT_EQ(back.size(), 5u);
    EXPECT_THROW(emit_plot_data({}, dir.string()), std::invalid_argument);
    std::filesystem::remove_all(dir);
}

TEST(Sweep, NoiselessPointHasNoFailures) {
    NoiseModel noise;
    auto c = run_point(Variant::Standard, 3, 3, noise, 5, 2000, 0, 1, 1);
    EXPECT_EQ(c.shots, 2000u);
    EXPECT_EQ(c.failures, 0u);
}

TEST(Sweep, HighNoiseRandomizesEveryLogical) {
    NoiseModel noise;
    noise.p = 0.2;
    auto c = run_point(Variant::Standard, 3, 3, noise, 5, 4000, 0, 1, 1);
    EXPECT_NEAR(static_cast<double>(c.failures) / 4000.0, 15.0 / 16.0, 0.02);
    for (uint64_t k : c.per_logical) {
        EXPECT_NEAR(static_cast<double>(k) / 4000.0, 0.5, 0.04);
    }
}

TEST(Sweep, IndependentOfWorkerCount) {
    auto config = parse_config("version = 1\nvariant = mixed_lrc\np = 0.002, 0.004\nshots = 1500\nmaster_seed = 9\n");
    auto one = to_csv(run_sweep(config, 1));
    EXPECT_EQ(to_csv(run_sweep(config, 3)), one);
    config.target_failures = 40;
    config.shot_cap = 20000;
    auto target = run_sweep(config, 1);
    EXPECT_EQ(to_csv(run_sweep(config, 4)), to_csv(target));
    for (const auto &row : target) {
        EXPECT_GE(row.failures, 40u);
        EXPECT_EQ(row.shots % kShotBatch, 0u);
    }
}

TEST(Sweep, RowsCarryTheConfig) {
    auto config = parse_config(kBasicConfig);
    config.distances = {3};
    config.shots = 300;
    auto rows = run_sweep(config, 1);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].variant, "swap_lrc");
    EXPECT_EQ(rows[0].rounds, 4u);
    EXPECT_EQ(rows[0].site_filter, "cnot_ordinal(2)");
    EXPECT_EQ(rows[0].side_policy, "control_only");
    EXPECT_EQ(rows[0].shots, 300u);
    EXPECT_EQ(rows[0].master_seed, 77u);
    EXPECT_DOUBLE_EQ(rows[0].p_logical, rows[0].failures / 300.0);
}

TEST(Sweep, LargerDistanceHelpsWithoutLeakage) {
    NoiseModel noise;
    noise.p = 1e-3;
    noise.r = 0;
    auto d3 = run_point(Variant::Standard, 3, 3, noise, 3, 20000, 0, 1, 1);
    auto d5 = run_point(Variant::Standard, 5, 5, noise, 3, 20000, 0, 1, 1);
    EXPECT_LT(d5.failures, d3.failures);
}

}  // namespace
}  // namespace leaksim
