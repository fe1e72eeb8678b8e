#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace ldl {

// Configuration and CLI misuse surface as ConfigError (process exit code 2),
// distinct from runtime verification failures (exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
    // [experiment]
    std::string kind = "verify";
    std::string out_dir = "out";
    std::uint64_t seed = 12345;
    int threads = 1;

    // [grid]
    int dim = 2;
    double extent = 4.0;
    double spacing = 0.125;

    // [profile]
    std::string profile = "lipschitz_bump";
    double amplitude = 0.5;
    double support_radius = 0.9;

    // [masks]
    double chi_radius = 1.5;
    double chi_tilde_radius = 1.875;

    // [data]
    double r1 = 0.5;
    double amp0 = 1.0;
    double amp1 = 0.0;

    // [scan]
    double lambda_min = 0.01;
    double lambda_max = 6.0;
    int scan_count = 40;
    bool with_gradient = false;

    // [strip]
    double re_min = 0.5;
    double re_max = 4.0;
    int re_count = 8;
    double depth_min = 0.05;
    double depth_max = 0.6;
    int depth_count = 6;

    // [sim]
    double t_end = 2.0;
    double safety = 0.5;
    int sample_stride = 1;
    double r2 = 1.0;
    bool weighted_local = false;
    std::vector<double> snapshot_times;

    // [stone]
    double eps = 1e-2;
    double lambda_window = 64.0;
    double avoid_radius = 1e-3;
    int min_nodes = 256;
    std::vector<double> compare_times = {0.5, 1.0};

    // [fit]
    int decay_k = 1;
    double low_cap = 0.1;
    double high_floor = 1.0;

    bool dump_operator = false;
};

// INI-style parser: [section] headers, key = value lines, '#' or ';' comment
// lines, comma-separated lists. Unknown sections or keys are hard errors.
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin);
ExperimentConfig parse_config_file(const std::string& path);

// LOGDECAY_OUT, LOGDECAY_THREADS, LOGDECAY_SEED; command-line flags are
// applied after this and win.
void apply_env_overrides(ExperimentConfig& cfg);

// Cross-field sanity (mask nesting, window shapes, kind name). Module
// factories re-validate their own inputs at run time.
void validate_config(const ExperimentConfig& cfg);

} // namespace ldl
