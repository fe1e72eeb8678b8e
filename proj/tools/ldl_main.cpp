#include "ldl/config.hpp"
#include "ldl/experiment.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <stdexcept>
#include <string>

namespace {

struct KindSpec {
    const char* name;
    const char* help;
};

constexpr KindSpec kKinds[] = {
    {"scan-norm", "Sample the cutoff resolvent norm along the real frequency axis"},
    {"scan-strip", "Sweep the lower half plane for pole flags (resonance strip)"},
    {"simulate", "Leapfrog wave evolution with energy traces and snapshots"},
    {"stone-compare", "Cross-validate the time stepper against the spectral projector"},
    {"fit-decay", "Measure the local-energy decay envelope against a graph norm"},
    {"verify", "Run the operator-identity and contraction gates (exit 1 on failure)"},
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ldl: numerical laboratory for cutoff wave resolvents and local energy decay"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    int threads = 0;
    std::uint64_t seed = 0;

    for (const KindSpec& k : kKinds) {
        CLI::App* sc = app.add_subcommand(k.name, k.help);
        sc->add_option("--config", config_path, "Experiment config file (INI)")
            ->required()
            ->check(CLI::ExistingFile);
        sc->add_option("--out", out_dir, "Output directory (overrides config and env)");
        sc->add_option("--threads", threads, "Worker thread count (0 = library default)");
        sc->add_option("--seed", seed, "Seed recorded in the manifest");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // command-line misuse is a configuration error
    }

    try {
        ldl::ExperimentConfig cfg = ldl::parse_config_file(config_path);
        ldl::apply_env_overrides(cfg);

        CLI::App* sc = app.get_subcommands().front();
        cfg.kind = sc->get_name();
        if (sc->count("--out") > 0) cfg.out_dir = out_dir;
        if (sc->count("--threads") > 0) cfg.threads = threads;
        if (sc->count("--seed") > 0) cfg.seed = seed;

        ldl::validate_config(cfg);
        const ldl::RunOutcome outcome = ldl::run_experiment(cfg);
        return outcome.exit_code;
    } catch (const ldl::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
