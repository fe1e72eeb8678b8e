#pragma once

#include "ldl/config.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace ldl {

struct RunOutcome {
    int exit_code = 0;                  // 0 ok, 1 failed gate, 2 config error (thrown instead)
    std::vector<std::string> artifacts; // file names relative to the output directory
};

// Runs one experiment kind end to end: builds the model from the config,
// emits the kind's CSV/binary artifacts plus report.json, and finishes with
// manifest.json (config echo and a content hash per emitted file). Throws
// ConfigError (or std::invalid_argument from module factories) for
// configuration-class problems; those map to process exit code 2.
RunOutcome run_experiment(const ExperimentConfig& cfg);

// Shared deterministic number rendering for CSV artifacts: %.17g, "nan" for
// missing values.
std::string format_g17(double x);

// FNV-1a 64-bit content hashes for the manifest.
std::uint64_t fnv1a64(const void* data, std::size_t n);
std::uint64_t fnv1a64_file(const std::string& path);

// Binary field dump: magic "LDL1", then uint32 rank, uint32 sizes, then the
// values as row-major (re, im) float64 pairs.
void dump_complex_field(const std::string& path, const std::vector<std::uint32_t>& shape,
                        const Eigen::VectorXcd& values);
Eigen::VectorXcd load_complex_field(const std::string& path, std::vector<std::uint32_t>& shape);

} // namespace ldl
