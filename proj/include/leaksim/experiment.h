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

#ifndef LEAKSIM_EXPERIMENT_H
#define LEAKSIM_EXPERIMENT_H

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "leaksim/circuit.h"
#include "leaksim/noise_model.h"

namespace leaksim {

/// Invalid configuration; `field()` names the offending key.
class ConfigError : public std::invalid_argument {
   public:
    ConfigError(std::string field, const std::string &message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
    const std::string &field() const { return field_; }

   private:
    std::string field_;
};

/// Too few usable points for a fit.
class InsufficientData : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    Variant variant = Variant::Standard;
    std::vector<uint32_t> distances{3};
    /// Noisy rounds per shot; 0 means d.
    uint32_t rounds = 0;
    std::vector<double> ps;
    double r = 1.0;
    SidePolicy side_policy = SidePolicy::TwoSided;
    SiteFilter site_filter{};
    double p_init_leak = 0;
    /// Use r * p as the initialization leakage at every point.
    bool p_init_leak_tied = false;
    /// Fixed shots per point, used when target_failures is 0.
    uint64_t shots = 10000;
    /// Stop a point after this many failures or `shot_cap` shots, whichever first.
    uint64_t target_failures = 0;
    uint64_t shot_cap = 1000000;
    uint64_t master_seed = 1;
    std::string output;

    uint32_t rounds_for(uint32_t d) const { return rounds == 0 ? d : rounds; }
    double init_leak_for(double p) const { return p_init_leak_tied ? r * p : p_init_leak; }
    NoiseModel noise_for(double p) const;

    /// Throws ConfigError.
    void validate() const;
};

/// Parses the versioned `key = value` format. Lists are comma separated, `#`
/// starts a comment. `version = 1` is required and unknown keys are errors.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::string &path);
std::string config_to_text(const ExperimentConfig &config);

/// 95% Wilson score interval.
std::pair<double, double> wilson_interval(uint64_t failures, uint64_t shots, double z = 1.959964);

struct ResultRow {
    std::string variant;
    uint32_t d = 0;
    uint32_t rounds = 0;
    double p = 0;
    double r = 0;
    std::string side_policy;
    std::string site_filter;
    double p_init_leak = 0;
    uint64_t shots = 0;
    uint64_t failures = 0;
    double p_logical = 0;
    double ci_low = 0;
    double ci_high = 0;
    uint64_t master_seed = 0;
    /// Failures of X-logical 1, X-logical 2, Z-logical 1, Z-logical 2. Not part of the CSV.
    std::array<uint64_t, 4> per_logical{0, 0, 0, 0};

    bool operator==(const ResultRow &) const = default;
};

struct PointCounts {
    uint64_t shots = 0;
    uint64_t failures = 0;
    std::array<uint64_t, 4> per_logical{0, 0, 0, 0};
};

/// Monte Carlo memory experiment at one point. Shots are grouped in fixed
/// batches and aggregated in batch order, so the counts do not depend on `workers`.
PointCounts run_point(Variant variant, uint32_t d, uint32_t rounds, const NoiseModel &noise, uint64_t master_seed,
                      uint64_t shots, uint64_t target_failures, uint64_t shot_cap, uint32_t workers);

inline constexpr uint64_t kShotBatch = 256;

using ProgressFn = std::function<void(const ResultRow &)>;

std::vector<ResultRow> run_sweep(const ExperimentConfig &config, uint32_t workers, const ProgressFn &progress = {});

std::string csv_header();
std::string to_csv(const std::vector<ResultRow> &rows);
/// Throws std::invalid_argument on malformed input.
std::vector<ResultRow> parse_csv(const std::string &text);
std::vector<ResultRow> read_csv(const std::string &path);

struct FitResult {
    std::string variant;
    uint32_t d = 0;
    double slope = 0;
    double slope_stderr = 0;
    double intercept = 0;
    size_t points_used = 0;
    double p_min = 0;
    double p_max = 0;

    double evaluate(double p) const;
};

inline constexpr uint64_t kMinFitFailures = 100;
inline constexpr double kMaxFitLogicalRate = 0.3;

/// Weighted least squares of ln P_L against ln p over rows with distance `d`
/// and p inside `window`, using points with at least 100 failures and P_L < 0.3.
/// Weights come from the Wilson interval width. Throws InsufficientData below 3 points.
FitResult fit_exponent(const std::vector<ResultRow> &rows, uint32_t d,
                       std::optional<std::pair<double, double>> window = std::nullopt);

struct Comparison {
    double p = 0;
    double p_logical_a = 0;
    double p_logical_b = 0;
    /// "a", "b" or "tie".
    std::string lower;
    /// The 95% intervals are disjoint.
    bool significant = false;
};

/// Pairs rows by (d, p). Throws std::invalid_argument if the grids differ.
std::vector<Comparison> compare_variants(const std::vector<ResultRow> &a, const std::vector<ResultRow> &b);
std::string comparison_csv(const std::vector<Comparison> &rows);

/// Writes one series file per (variant, d, side policy, site filter) and an
/// overlay with the fitted power law on the series' p grid when a fit exists.
/// Returns the written paths. Throws std::invalid_argument for an empty table.
std::vector<std::string> emit_plot_data(const std::vector<ResultRow> &rows, const std::string &directory);

}  // namespace leaksim

#endif
