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

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>

#include "leaksim/circuit.h"
#include "leaksim/experiment.h"
#include "leaksim/fault_scanner.h"
#include "leaksim/lattice.h"

namespace leaksim {
namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInsufficient = 3;

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    out << text;
}

uint32_t default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

struct EmitArgs {
    std::string variant = "standard";
    uint32_t d = 3;
    uint32_t rounds = 0;
    std::string out;
};

int cmd_emit(const EmitArgs &a) {
    Variant v = parse_variant(a.variant);
    ToricLattice lattice(a.d, v == Variant::MixedLrc);
    write_output(a.out, emit_program_text(build_variant(v, lattice, a.rounds == 0 ? a.d : a.rounds)));
    return 0;
}

struct RunArgs {
    std::string config;
    std::string out;
    std::optional<uint64_t> seed;
    uint32_t workers = 0;
    bool quiet = false;
};

std::string per_logical_csv(const std::vector<ResultRow> &rows) {
    std::ostringstream s;
    s << "variant,d,p,shots,failures,fail_x1,fail_x2,fail_z1,fail_z2\n";
    for (const auto &r : rows) {
        s << r.variant << ',' << r.d << ',' << r.p << ',' << r.shots << ',' << r.failures;
        for (uint64_t k : r.per_logical) {
            s << ',' << k;
        }
        s << '\n';
    }
    return s.str();
}

int cmd_run(const RunArgs &a) {
    ExperimentConfig config = load_config(a.config);
    if (a.seed) {
        config.master_seed = *a.seed;
    }
    std::string out = a.out.empty() ? config.output : a.out;
    ProgressFn progress;
    if (!a.quiet) {
        progress = [](const ResultRow &r) {
            std::fprintf(stderr, "%s d=%u p=%g shots=%llu failures=%llu P_L=%.4g\n", r.variant.c_str(), r.d, r.p,
                         static_cast<unsigned long long>(r.shots), static_cast<unsigned long long>(r.failures),
                         r.p_logical);
        };
    }
    auto rows = run_sweep(config, a.workers == 0 ? default_workers() : a.workers, progress);
    write_output(out, to_csv(rows));
    if (!out.empty() && out != "-") {
        write_output(out + ".per_logical.csv", per_logical_csv(rows));
    }
    return 0;
}

struct ScanArgs {
    std::string config;
    std::string variant = "standard";
    uint32_t d = 3;
    uint32_t rounds = 0;
    uint32_t max_faults = 1;
    std::string side_policy = "two_sided";
    std::string site_filter = "all";
    bool no_init_leak = false;
    bool no_pauli = false;
    std::string out;
    uint32_t workers = 0;
};

int cmd_scan(const ScanArgs &a) {
    Variant variant = parse_variant(a.variant);
    uint32_t d = a.d;
    uint32_t rounds = a.rounds;
    ScanPolicy policy;
    policy.side_policy = parse_side_policy(a.side_policy);
    policy.site_filter = SiteFilter::parse(a.site_filter);
    if (!a.config.empty()) {
        auto config = load_config(a.config);
        variant = config.variant;
        d = config.distances.front();
        rounds = config.rounds;
        policy.side_policy = config.side_policy;
        policy.site_filter = config.site_filter;
        policy.include_init_leak = config.p_init_leak_tied || config.p_init_leak > 0;
    }
    if (d < 3 || d % 2 == 0) {
        throw ConfigError("d", "must be odd and at least 3");
    }
    if (a.no_init_leak) {
        policy.include_init_leak = false;
    }
    policy.include_pauli = !a.no_pauli;
    policy.workers = a.workers == 0 ? default_workers() : a.workers;
    ToricLattice lattice(d, variant == Variant::MixedLrc);
    auto program = build_variant(variant, lattice, rounds == 0 ? d : rounds);
    auto universe = enumerate_fault_universe(program, lattice, policy);
    auto verdict = scan(program, lattice, universe, policy, a.max_faults);
    write_output(a.out, verdict.report_json());
    std::fprintf(stderr, "%s d=%u universe=%zu failing=%zu distance_preserving=%s\n", variant_name(variant), d,
                 verdict.universe_size, verdict.failing_specs.size(), verdict.distance_preserving ? "true" : "false");
    return 0;
}

struct FitArgs {
    std::string csv;
    uint32_t d = 0;
    std::optional<double> p_min;
    std::optional<double> p_max;
};

int cmd_fit(const FitArgs &a) {
    auto rows = read_csv(a.csv);
    std::map<std::tuple<std::string, uint32_t, std::string, std::string, double>, std::vector<ResultRow>> series;
    for (const auto &r : rows) {
        if (a.d == 0 || r.d == a.d) {
            series[{r.variant, r.d, r.side_policy, r.site_filter, r.r}].push_back(r);
        }
    }
    if (series.empty()) {
        throw InsufficientData("no rows for the requested distance");
    }
    std::optional<std::pair<double, double>> window;
    if (a.p_min || a.p_max) {
        window = std::make_pair(a.p_min.value_or(0.0), a.p_max.value_or(1.0));
    }
    std::cout << "variant,d,side_policy,site_filter,slope,slope_stderr,intercept,points_used,p_min,p_max\n";
    bool any_missing = false;
    for (const auto &[key, group] : series) {
        try {
            auto f = fit_exponent(group, std::get<1>(key), window);
            std::cout << f.variant << ',' << f.d << ',' << std::get<2>(key) << ',' << std::get<3>(key) << ','
                      << f.slope << ',' << f.slope_stderr << ',' << f.intercept << ',' << f.points_used << ','
                      << f.p_min << ',' << f.p_max << '\n';
        } catch (const InsufficientData &e) {
            std::fprintf(stderr, "%s d=%u: %s\n", std::get<0>(key).c_str(), std::get<1>(key), e.what());
            any_missing = true;
        }
    }
    return any_missing ? kExitInsufficient : 0;
}

int cmd_compare(const std::string &a, const std::string &b, const std::string &out) {
    write_output(out, comparison_csv(compare_variants(read_csv(a), read_csv(b))));
    return 0;
}

int cmd_plot_data(const std::string &csv, const std::string &dir) {
    for (const auto &path : emit_plot_data(read_csv(csv), dir)) {
        std::cout << path << '\n';
    }
    return 0;
}

int run_cli(int argc, char **argv) {
    CLI::App app{"Leakage-aware toric code simulator"};
    app.require_subcommand(1);

    EmitArgs emit;
    auto *emit_cmd = app.add_subcommand("emit", "Write a syndrome extraction circuit as text");
    emit_cmd->add_option("--variant", emit.variant, "Circuit variant");
    emit_cmd->add_option("--d", emit.d, "Code distance");
    emit_cmd->add_option("--rounds", emit.rounds, "Rounds (default d)");
    emit_cmd->add_option("--out", emit.out, "Output path (default stdout)");

    RunArgs run;
    auto *run_cmd = app.add_subcommand("run", "Run a Monte Carlo sweep");
    run_cmd->add_option("--config", run.config, "Experiment config")->required();
    run_cmd->add_option("--out", run.out, "Result CSV (overrides the config)");
    run_cmd->add_option("--seed", run.seed, "Master seed (overrides the config)");
    run_cmd->add_option("--workers", run.workers, "Worker threads (default: all cores)");
    run_cmd->add_flag("--quiet", run.quiet, "No progress lines");

    ScanArgs sc;
    auto *scan_cmd = app.add_subcommand("scan", "Exhaustive single or pair fault scan");
    scan_cmd->add_option("--config", sc.config, "Take variant, d, rounds and leakage model from a config");
    scan_cmd->add_option("--variant", sc.variant, "Circuit variant");
    scan_cmd->add_option("--d", sc.d, "Code distance");
    scan_cmd->add_option("--rounds", sc.rounds, "Rounds (default d)");
    scan_cmd->add_option("--max-faults", sc.max_faults, "Faults per combination")->check(CLI::IsMember({1, 2}));
    scan_cmd->add_option("--side-policy", sc.side_policy, "two_sided or control_only");
    scan_cmd->add_option("--site-filter", sc.site_filter, "all, data_only, ancilla_only or cnot_ordinal(k)");
    scan_cmd->add_flag("--no-init-leak", sc.no_init_leak, "Exclude leakage at preparation");
    scan_cmd->add_flag("--no-pauli", sc.no_pauli, "Exclude Pauli and flip faults");
    scan_cmd->add_option("--out", sc.out, "Report path (default stdout)");
    scan_cmd->add_option("--workers", sc.workers, "Worker threads (default: all cores)");

    FitArgs fit;
    auto *fit_cmd = app.add_subcommand("fit", "Fit log P_L against log p per series");
    fit_cmd->add_option("csv", fit.csv, "Result CSV")->required();
    fit_cmd->add_option("--d", fit.d, "Only this distance");
    fit_cmd->add_option("--p-min", fit.p_min, "Lower end of the p window");
    fit_cmd->add_option("--p-max", fit.p_max, "Upper end of the p window");

    std::string cmp_a, cmp_b, cmp_out;
    auto *cmp_cmd = app.add_subcommand("compare", "Compare two result tables point by point");
    cmp_cmd->add_option("a", cmp_a, "First CSV")->required();
    cmp_cmd->add_option("b", cmp_b, "Second CSV")->required();
    cmp_cmd->add_option("--out", cmp_out, "Output path (default stdout)");

    std::string plot_csv, plot_dir = ".";
    auto *plot_cmd = app.add_subcommand("plot-data", "Write per-series and fit overlay CSVs");
    plot_cmd->add_option("csv", plot_csv, "Result CSV")->required();
    plot_cmd->add_option("--out", plot_dir, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*emit_cmd) return cmd_emit(emit);
        if (*run_cmd) return cmd_run(run);
        if (*scan_cmd) return cmd_scan(sc);
        if (*fit_cmd) return cmd_fit(fit);
        if (*cmp_cmd) return cmd_compare(cmp_a, cmp_b, cmp_out);
        if (*plot_cmd) return cmd_plot_data(plot_csv, plot_dir);
    } catch (const InsufficientData &e) {
        std::fprintf(stderr, "insufficient data: %s\n", e.what());
        return kExitInsufficient;
    } catch (const std::invalid_argument &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

}  // namespace
}  // namespace leaksim

int main(int argc, char **argv) { return leaksim::run_cli(argc, argv); }
