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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "leaksim/decoder.h"
#include "leaksim/lattice.h"
#include "leaksim/simulator.h"

namespace leaksim {

namespace {

std::string trim(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        b++;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        e--;
    }
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) {
            return out;
        }
        start = pos + 1;
    }
}

std::optional<double> to_double(const std::string &s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

std::optional<uint64_t> to_u64(const std::string &s) {
    uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        return std::nullopt;
    }
    return v;
}

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double number(const std::string &field, const std::string &value) {
    auto v = to_double(value);
    if (!v || !std::isfinite(*v)) {
        throw ConfigError(field, "expected a number, got '" + value + "'");
    }
    return *v;
}

uint64_t integer(const std::string &field, const std::string &value) {
    auto v = to_u64(value);
    if (!v) {
        throw ConfigError(field, "expected a non-negative integer, got '" + value + "'");
    }
    return *v;
}

template <typename Fn>
auto wrap_parse(const std::string &field, Fn fn) {
    try {
        return fn();
    } catch (const ConfigError &) {
        throw;
    } catch (const std::invalid_argument &e) {
        throw ConfigError(field, e.what());
    }
}

}  // namespace

NoiseModel ExperimentConfig::noise_for(double p) const {
    NoiseModel noise;
    noise.p = p;
    noise.r = r;
    noise.side_policy = side_policy;
    noise.site_filter = site_filter;
    noise.p_init_leak = init_leak_for(p);
    return noise;
}

void ExperimentConfig::validate() const {
    if (distances.empty()) {
        throw ConfigError("d", "at least one distance is required");
    }
    for (uint32_t d : distances) {
        if (d < 3 || d % 2 == 0) {
            throw ConfigError("d", "distances must be odd and at least 3, got " + std::to_string(d));
        }
    }
    if (ps.empty()) {
        throw ConfigError("p", "at least one physical error rate is required");
    }
    for (double p : ps) {
        if (!(p > 0) || p > 0.2) {
            throw ConfigError("p", "values must lie in (0, 0.2], got " + fmt(p));
        }
    }
    if (!(r >= 0) || !std::isfinite(r)) {
        throw ConfigError("r", "must be non-negative");
    }
    for (double p : ps) {
        if (r * p > 1) {
            throw ConfigError("r", "r * p exceeds 1 at p = " + fmt(p));
        }
    }
    if (!p_init_leak_tied && !(p_init_leak >= 0 && p_init_leak <= 1)) {
        throw ConfigError("p_init_leak", "must lie in [0, 1]");
    }
    if (target_failures == 0 && shots == 0) {
        throw ConfigError("shots", "must be at least 1");
    }
    if (shot_cap == 0) {
        throw ConfigError("shot_cap", "must be at least 1");
    }
}

ExperimentConfig parse_config(const std::string &text) {
    ExperimentConfig config;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    bool have_version = false;
    bool have_variant = false;
    bool have_shots = false;
    while (std::getline(in, line)) {
        line_no++;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no), "expected 'key = value'");
        }
        std::string key = trim(std::string_view(line).substr(0, eq));
        std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!seen.insert(key).second) {
            throw ConfigError(key, "duplicate key");
        }
        if (key == "version") {
            if (value != "1") {
                throw ConfigError(key, "unsupported version '" + value + "'");
            }
            have_version = true;
        } else if (key == "variant") {
            config.variant = wrap_parse(key, [&] { return parse_variant(value); });
            have_variant = true;
        } else if (key == "d") {
            config.distances.clear();
            for (const auto &item : split(value, ',')) {
                config.distances.push_back(static_cast<uint32_t>(integer(key, item)));
            }
        } else if (key == "rounds") {
            config.rounds = value == "d" ? 0 : static_cast<uint32_t>(integer(key, value));
            if (value != "d" && config.rounds == 0) {
                throw ConfigError(key, "must be at least 1 (or 'd')");
            }
        } else if (key == "p") {
            for (const auto &item : split(value, ',')) {
                config.ps.push_back(number(key, item));
            }
        } else if (key == "r") {
            config.r = number(key, value);
        } else if (key == "side_policy") {
            config.side_policy = wrap_parse(key, [&] { return parse_side_policy(value); });
        } else if (key == "site_filter") {
            config.site_filter = wrap_parse(key, [&] { return SiteFilter::parse(value); });
        } else if (key == "p_init_leak") {
            if (value == "r*p") {
                config.p_init_leak_tied = true;
            } else {
                config.p_init_leak = number(key, value);
            }
        } else if (key == "shots") {
            config.shots = integer(key, value);
            have_shots = true;
        } else if (key == "target_failures") {
            config.target_failures = integer(key, value);
        } else if (key == "shot_cap") {
            config.shot_cap = integer(key, value);
        } else if (key == "master_seed") {
            config.master_seed = integer(key, value);
        } else if (key == "output") {
            config.output = value;
        } else {
            throw ConfigError(key, "unknown key");
        }
    }
    if (!have_version) {
        throw ConfigError("version", "missing; expected 'version = 1'");
    }
    if (!have_variant) {
        throw ConfigError("variant", "missing");
    }
    if (have_shots && config.shots == 0) {
        throw ConfigError("shots", "must be at least 1");
    }
    config.validate();
    return config;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot open '" + path + "'");
    }
    std::stringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::string config_to_text(const ExperimentConfig &config) {
    std::ostringstream out;
    auto join = [](const auto &values, auto f) {
        std::string s;
        for (size_t i = 0; i < values.size(); i++) {
            s += (i ? ", " : "") + f(values[i]);
        }
        return s;
    };
    out << "version = 1\n";
    out << "variant = " << variant_name(config.variant) << "\n";
    out << "d = " << join(config.distances, [](uint32_t d) { return std::to_string(d); }) << "\n";
    out << "rounds = " << (config.rounds == 0 ? std::string("d") : std::to_string(config.rounds)) << "\n";
    out << "p = " << join(config.ps, fmt) << "\n";
    out << "r = " << fmt(config.r) << "\n";
    out << "side_policy = " << side_policy_name(config.side_policy) << "\n";
    out << "site_filter = " << config.site_filter.str() << "\n";
    out << "p_init_leak = " << (config.p_init_leak_tied ? std::string("r*p") : fmt(config.p_init_leak)) << "\n";
    out << "shots = " << config.shots << "\n";
    out << "target_failures = " << config.target_failures << "\n";
    out << "shot_cap = " << config.shot_cap << "\n";
    out << "master_seed = " << config.master_seed << "\n";
    if (!config.output.empty()) {
        out << "output = " << config.output << "\n";
    }
    return out.str();
}

std::pair<double, double> wilson_interval(uint64_t failures, uint64_t shots, double z) {
    if (shots == 0) {
        return {0.0, 1.0};
    }
    const double n = static_cast<double>(shots);
    const double phat = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1 + z2 / n;
    const double center = (phat + z2 / (2 * n)) / denom;
    const double half = z * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct Worker {
    Worker(Variant variant, uint32_t d, uint32_t rounds)
        : lattice(d, variant == Variant::MixedLrc),
          program(build_variant(variant, lattice, rounds)),
          simulator(lattice, program),
          decoder(lattice) {}

    PointCounts run_batch(const NoiseModel &noise, uint64_t master_seed, uint64_t first, uint64_t count) {
        PointCounts c;
        for (uint64_t s = first; s < first + count; s++) {
            simulator.run_shot(noise, master_seed, s, shot);
            Judgement j = decode_record(shot.record, decoder, lattice);
            c.shots++;
            c.failures += j.overall;
            for (size_t k = 0; k < 4; k++) {
                c.per_logical[k] += j.fails[k];
            }
        }
        return c;
    }

    ToricLattice lattice;
    CircuitProgram program;
    Simulator simulator;
    MatchingDecoder decoder;
    ShotResult shot;
};

}  // namespace

PointCounts run_point(Variant variant, uint32_t d, uint32_t rounds, const NoiseModel &noise, uint64_t master_seed,
                      uint64_t shots, uint64_t target_failures, uint64_t shot_cap, uint32_t workers) {
    noise.validate();
    workers = std::max<uint32_t>(1, workers);
    const uint64_t limit = target_failures > 0 ? shot_cap : shots;
    const uint64_t num_batches = (limit + kShotBatch - 1) / kShotBatch;

    std::vector<std::unique_ptr<Worker>> pool;
    for (uint32_t w = 0; w < workers; w++) {
        pool.push_back(std::make_unique<Worker>(variant, d, rounds));
    }
    PointCounts total;
    // Waves of batches run in parallel; results are consumed in batch order so
    // the stopping point is the same for any worker count.
    const uint64_t wave = static_cast<uint64_t>(workers) * 4;
    std::vector<PointCounts> results;
    for (uint64_t start = 0; start < num_batches; start += wave) {
        const uint64_t end = std::min(num_batches, start + wave);
        results.assign(end - start, PointCounts{});
        auto batch = [&](Worker &worker, uint64_t b) {
            uint64_t first = b * kShotBatch;
            uint64_t count = std::min(kShotBatch, limit - first);
            results[b - start] = worker.run_batch(noise, master_seed, first, count);
        };
        if (workers == 1) {
            for (uint64_t b = start; b < end; b++) {
                batch(*pool[0], b);
            }
        } else {
            std::vector<std::thread> threads;
            for (uint32_t w = 0; w < workers; w++) {
                threads.emplace_back([&, w] {
                    for (uint64_t b = start + w; b < end; b += workers) {
                        batch(*pool[w], b);
                    }
                });
            }
            for (auto &t : threads) {
                t.join();
            }
        }
        for (const auto &r : results) {
            total.shots += r.shots;
            total.failures += r.failures;
            for (size_t k = 0; k < 4; k++) {
                total.per_logical[k] += r.per_logical[k];
            }
            if (target_failures > 0 && total.failures >= target_failures) {
                return total;
            }
        }
    }
    return total;
}

std::vector<ResultRow> run_sweep(const ExperimentConfig &config, uint32_t workers, const ProgressFn &progress) {
    config.validate();
    std::vector<ResultRow> rows;
    for (uint32_t d : config.distances) {
        const uint32_t rounds = config.rounds_for(d);
        for (double p : config.ps) {
            NoiseModel noise = config.noise_for(p);
            PointCounts c = run_point(config.variant, d, rounds, noise, config.master_seed, config.shots,
                                      config.target_failures, config.shot_cap, workers);
            ResultRow row;
            row.variant = variant_name(config.variant);
            row.d = d;
            row.rounds = rounds;
            row.p = p;
            row.r = config.r;
            row.side_policy = side_policy_name(config.side_policy);
            row.site_filter = config.site_filter.str();
            row.p_init_leak = noise.p_init_leak;
            row.shots = c.shots;
            row.failures = c.failures;
            row.p_logical = c.shots ? static_cast<double>(c.failures) / static_cast<double>(c.shots) : 0.0;
            std::tie(row.ci_low, row.ci_high) = wilson_interval(c.failures, c.shots);
            row.master_seed = config.master_seed;
            row.per_logical = c.per_logical;
            if (progress) {
                progress(row);
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string csv_header() {
    return "variant,d,rounds,p,r,side_policy,site_filter,p_init_leak,shots,failures,p_logical,ci_low,ci_high,"
           "master_seed";
}

std::string to_csv(const std::vector<ResultRow> &rows) {
    std::ostringstream out;
    out << csv_header() << "\n";
    for (const auto &r : rows) {
        out << r.variant << "," << r.d << "," << r.rounds << "," << fmt(r.p) << "," << fmt(r.r) << ","
            << r.side_policy << "," << r.site_filter << "," << fmt(r.p_init_leak) << "," << r.shots << ","
            << r.failures << "," << fmt(r.p_logical) << "," << fmt(r.ci_low) << "," << fmt(r.ci_high) << ","
            << r.master_seed << "\n";
    }
    return out.str();
}

std::vector<ResultRow> parse_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != csv_header()) {
        throw std::invalid_argument("result table must start with the header '" + csv_header() + "'");
    }
    std::vector<ResultRow> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        line_no++;
        if (trim(line).empty()) {
            continue;
        }
        auto f = split(line, ',');
        auto bad = [&](const std::string &what) {
            return std::invalid_argument("line " + std::to_string(line_no) + ": bad " + what);
        };
        if (f.size() != 14) {
            throw bad("column count");
        }
        auto dbl = [&](const std::string &s, const char *what) {
            auto v = to_double(s);
            if (!v) {
                throw bad(what);
            }
            return *v;
        };
        auto u64 = [&](const std::string &s, const char *what) {
            auto v = to_u64(s);
            if (!v) {
                throw bad(what);
            }
            return *v;
        };
        ResultRow r;
        r.variant = f[0];
        r.d = static_cast<uint32_t>(u64(f[1], "d"));
        r.rounds = static_cast<uint32_t>(u64(f[2], "rounds"));
        r.p = dbl(f[3], "p");
        r.r = dbl(f[4], "r");
        r.side_policy = f[5];
        r.site_filter = f[6];
        r.p_init_leak = dbl(f[7], "p_init_leak");
        r.shots = u64(f[8], "shots");
        r.failures = u64(f[9], "failures");
        r.p_logical = dbl(f[10], "p_logical");
        r.ci_low = dbl(f[11], "ci_low");
        r.ci_high = dbl(f[12], "ci_high");
        r.master_seed = u64(f[13], "master_seed");
        rows.push_back(r);
    }
    return rows;
}

std::vector<ResultRow> read_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open '" + path + "'");
    }
    std::stringstream text;
    text << in.rdbuf();
    return parse_csv(text.str());
}

double FitResult::evaluate(double p) const { return std::exp(intercept) * std::pow(p, slope); }

FitResult fit_exponent(const std::vector<ResultRow> &rows, uint32_t d, std::optional<std::pair<double, double>> window) {
    std::vector<const ResultRow *> used;
    for (const auto &r : rows) {
        if (r.d != d || r.failures < kMinFitFailures || !(r.p_logical < kMaxFitLogicalRate) || r.p <= 0) {
            continue;
        }
        if (window && (r.p < window->first || r.p > window->second)) {
            continue;
        }
        used.push_back(&r);
    }
    for (const auto *r : used) {
        const auto *first = used.front();
        if (r->variant != first->variant || r->side_policy != first->side_policy ||
            r->site_filter != first->site_filter) {
            throw std::invalid_argument("rows for one fit must come from a single series");
        }
    }
    if (used.size() < 3) {
        throw InsufficientData("fit needs at least 3 points with >= 100 failures and P_L < 0.3 at d=" +
                               std::to_string(d) + ", found " + std::to_string(used.size()));
    }
    constexpr double z = 1.959964;
    double sw = 0, sx = 0, sy = 0;
    std::vector<double> xs, ys, ws;
    for (const auto *r : used) {
        double x = std::log(r->p);
        double y = std::log(r->p_logical);
        double sigma = (std::log(r->ci_high) - std::log(r->ci_low)) / (2 * z);
        double w = 1.0 / (sigma * sigma);
        xs.push_back(x);
        ys.push_back(y);
        ws.push_back(w);
        sw += w;
        sx += w * x;
        sy += w * y;
    }
    const double xm = sx / sw, ym = sy / sw;
    double sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); i++) {
        sxx += ws[i] * (xs[i] - xm) * (xs[i] - xm);
        sxy += ws[i] * (xs[i] - xm) * (ys[i] - ym);
    }
    if (sxx <= 0) {
        throw InsufficientData("fit needs at least two distinct p values");
    }
    FitResult fit;
    fit.variant = used.front()->variant;
    fit.d = d;
    fit.slope = sxy / sxx;
    fit.intercept = ym - fit.slope * xm;
    double rss = 0;
    for (size_t i = 0; i < xs.size(); i++) {
        double res = ys[i] - (fit.intercept + fit.slope * xs[i]);
        rss += ws[i] * res * res;
    }
    fit.slope_stderr = std::sqrt(rss / static_cast<double>(xs.size() - 2) / sxx);
    fit.points_used = used.size();
    fit.p_min = used.front()->p;
    fit.p_max = used.front()->p;
    for (const auto *r : used) {
        fit.p_min = std::min(fit.p_min, r->p);
        fit.p_max = std::max(fit.p_max, r->p);
    }
    return fit;
}

std::vector<Comparison> compare_variants(const std::vector<ResultRow> &a, const std::vector<ResultRow> &b) {
    using Key = std::pair<uint32_t, double>;
    std::map<Key, const ResultRow *> ma, mb;
    for (const auto &r : a) {
        if (!ma.emplace(Key{r.d, r.p}, &r).second) {
            throw std::invalid_argument("first table has duplicate (d, p) rows");
        }
    }
    for (const auto &r : b) {
        if (!mb.emplace(Key{r.d, r.p}, &r).second) {
            throw std::invalid_argument("second table has duplicate (d, p) rows");
        }
    }
    if (ma.size() != mb.size() || !std::equal(ma.begin(), ma.end(), mb.begin(),
                                              [](const auto &x, const auto &y) { return x.first == y.first; })) {
        throw std::invalid_argument("tables do not share the same (d, p) grid");
    }
    std::vector<Comparison> out;
    for (const auto &[key, ra] : ma) {
        const ResultRow *rb = mb.at(key);
        Comparison c;
        c.p = key.second;
        c.p_logical_a = ra->p_logical;
        c.p_logical_b = rb->p_logical;
        c.lower = ra->p_logical < rb->p_logical ? "a" : rb->p_logical < ra->p_logical ? "b" : "tie";
        c.significant = ra->ci_high < rb->ci_low || rb->ci_high < ra->ci_low;
        out.push_back(c);
    }
    return out;
}

std::string comparison_csv(const std::vector<Comparison> &rows) {
    std::ostringstream out;
    out << "p,p_logical_a,p_logical_b,lower,significant\n";
    for (const auto &c : rows) {
        out << fmt(c.p) << "," << fmt(c.p_logical_a) << "," << fmt(c.p_logical_b) << "," << c.lower << ","
            << (c.significant ? "true" : "false") << "\n";
    }
    return out.str();
}

std::vector<std::string> emit_plot_data(const std::vector<ResultRow> &rows, const std::string &directory) {
    if (rows.empty()) {
        throw std::invalid_argument("cannot emit plot data for an empty table");
    }
    std::filesystem::create_directories(directory);
    std::map<std::string, std::vector<ResultRow>> series;
    for (const auto &r : rows) {
        std::string filter;
        for (char c : r.site_filter) {
            if (c != '(' && c != ')') {
                filter.push_back(c);
            }
        }
        series[r.variant + "_d" + std::to_string(r.d) + "_" + r.side_policy + "_" + filter].push_back(r);
    }
    std::vector<std::string> written;
    auto write = [&](const std::string &name, const std::string &text) {
        std::string path = (std::filesystem::path(directory) / name).string();
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("cannot write '" + path + "'");
        }
        out << text;
        written.push_back(path);
    };
    for (const auto &[key, group] : series) {
        write("series_" + key + ".csv", to_csv(group));
        try {
            FitResult fit = fit_exponent(group, group.front().d);
            std::ostringstream overlay;
            overlay << "p,p_logical_fit,slope,slope_stderr,intercept\n";
            for (const auto &r : group) {
                overlay << fmt(r.p) << "," << fmt(fit.evaluate(r.p)) << "," << fmt(fit.slope) << ","
                        << fmt(fit.slope_stderr) << "," << fmt(fit.intercept) << "\n";
            }
            write("overlay_" + key + ".csv", overlay.str());
        } catch (const InsufficientData &) {
            // No overlay without a fit.
        }
    }
    return written;
}

}  // namespace leaksim
