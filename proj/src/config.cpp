#include "ldl/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace ldl {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& what) {
    std::ostringstream os;
    os << origin << ":" << line << ": " << what;
    throw ConfigError(os.str());
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        fail(origin, line, "value for '" + key + "' is not a number: '" + value + "'");
    }
}

long long parse_int(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        fail(origin, line, "value for '" + key + "' is not an integer: '" + value + "'");
    }
}

bool parse_bool(const std::string& origin, int line, const std::string& key,
                const std::string& value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    fail(origin, line, "value for '" + key + "' is not a boolean: '" + value + "'");
}

std::vector<double> parse_list(const std::string& origin, int line, const std::string& key,
                               const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(origin, line, "empty element in list for '" + key + "'");
        out.push_back(parse_double(origin, line, key, item));
    }
    if (out.empty()) fail(origin, line, "empty list for '" + key + "'");
    return out;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;

    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;

        if (s.front() == '[') {
            if (s.back() != ']') fail(origin, line, "malformed section header: '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            static const char* known[] = {"experiment", "grid", "profile", "masks", "data",
                                          "scan",       "strip", "sim",    "stone", "fit"};
            if (std::find_if(std::begin(known), std::end(known),
                             [&](const char* k) { return section == k; }) == std::end(known))
                fail(origin, line, "unknown section [" + section + "]");
            continue;
        }

        auto eq = s.find('=');
        if (eq == std::string::npos) fail(origin, line, "expected 'key = value': '" + s + "'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(origin, line, "empty key");
        if (section.empty()) fail(origin, line, "key '" + key + "' before any [section]");

        auto d = [&] { return parse_double(origin, line, key, value); };
        auto i = [&] { return parse_int(origin, line, key, value); };
        auto b = [&] { return parse_bool(origin, line, key, value); };
        auto list = [&] { return parse_list(origin, line, key, value); };

        bool handled = true;
        if (section == "experiment") {
            if (key == "kind") cfg.kind = value;
            else if (key == "out") cfg.out_dir = value;
            else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(i());
            else if (key == "threads") cfg.threads = static_cast<int>(i());
            else handled = false;
        } else if (section == "grid") {
            if (key == "dim") cfg.dim = static_cast<int>(i());
            else if (key == "extent") cfg.extent = d();
            else if (key == "spacing") cfg.spacing = d();
            else handled = false;
        } else if (section == "profile") {
            if (key == "kind") cfg.profile = value;
            else if (key == "amplitude") cfg.amplitude = d();
            else if (key == "support_radius") cfg.support_radius = d();
            else handled = false;
        } else if (section == "masks") {
            if (key == "chi_radius") cfg.chi_radius = d();
            else if (key == "chi_tilde_radius") cfg.chi_tilde_radius = d();
            else handled = false;
        } else if (section == "data") {
            if (key == "r1") cfg.r1 = d();
            else if (key == "amp0") cfg.amp0 = d();
            else if (key == "amp1") cfg.amp1 = d();
            else handled = false;
        } else if (section == "scan") {
            if (key == "lambda_min") cfg.lambda_min = d();
            else if (key == "lambda_max") cfg.lambda_max = d();
            else if (key == "count") cfg.scan_count = static_cast<int>(i());
            else if (key == "with_gradient") cfg.with_gradient = b();
            else handled = false;
        } else if (section == "strip") {
            if (key == "re_min") cfg.re_min = d();
            else if (key == "re_max") cfg.re_max = d();
            else if (key == "re_count") cfg.re_count = static_cast<int>(i());
            else if (key == "depth_min") cfg.depth_min = d();
            else if (key == "depth_max") cfg.depth_max = d();
            else if (key == "depth_count") cfg.depth_count = static_cast<int>(i());
            else handled = false;
        } else if (section == "sim") {
            if (key == "t_end") cfg.t_end = d();
            else if (key == "safety") cfg.safety = d();
            else if (key == "sample_stride") cfg.sample_stride = static_cast<int>(i());
            else if (key == "r2") cfg.r2 = d();
            else if (key == "weighted_local") cfg.weighted_local = b();
            else if (key == "snapshot_times") cfg.snapshot_times = list();
            else handled = false;
        } else if (section == "stone") {
            if (key == "eps") cfg.eps = d();
            else if (key == "lambda_window") cfg.lambda_window = d();
            else if (key == "avoid_radius") cfg.avoid_radius = d();
            else if (key == "min_nodes") cfg.min_nodes = static_cast<int>(i());
            else if (key == "compare_times") cfg.compare_times = list();
            else handled = false;
        } else if (section == "fit") {
            if (key == "decay_k") cfg.decay_k = static_cast<int>(i());
            else if (key == "low_cap") cfg.low_cap = d();
            else if (key == "high_floor") cfg.high_floor = d();
            else handled = false;
        }
        if (!handled) fail(origin, line, "unknown key '" + key + "' in [" + section + "]");
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void apply_env_overrides(ExperimentConfig& cfg) {
    if (const char* v = std::getenv("LOGDECAY_OUT")) cfg.out_dir = v;
    if (const char* v = std::getenv("LOGDECAY_THREADS"))
        cfg.threads = static_cast<int>(parse_int("env LOGDECAY_THREADS", 1, "threads", v));
    if (const char* v = std::getenv("LOGDECAY_SEED"))
        cfg.seed = static_cast<std::uint64_t>(parse_int("env LOGDECAY_SEED", 1, "seed", v));
}

void validate_config(const ExperimentConfig& cfg) {
    auto bad = [](const std::string& what) { throw ConfigError("config: " + what); };

    static const char* kinds[] = {"scan-norm", "scan-strip", "simulate",
                                  "stone-compare", "fit-decay", "verify"};
    if (std::find_if(std::begin(kinds), std::end(kinds),
                     [&](const char* k) { return cfg.kind == k; }) == std::end(kinds))
        bad("unknown experiment kind '" + cfg.kind + "'");

    if (cfg.dim != 2 && cfg.dim != 3) bad("grid dim must be 2 or 3");
    if (!(cfg.extent > 0) || !(cfg.spacing > 0)) bad("grid extent and spacing must be positive");
    if (cfg.threads < 0) bad("threads must be >= 0");

    if (cfg.profile != "constant") {
        if (!(cfg.support_radius > 0)) bad("profile support_radius must be positive");
        if (cfg.support_radius > 0.8 * cfg.chi_radius + 1e-12)
            bad("profile support must sit inside the chi plateau "
                "(support_radius <= 0.8 * chi_radius)");
    }
    if (!(cfg.chi_radius > 0) || !(cfg.chi_tilde_radius > 0)) bad("mask radii must be positive");
    if (0.8 * cfg.chi_tilde_radius < cfg.chi_radius - 1e-12)
        bad("chi_tilde plateau must cover chi (0.8 * chi_tilde_radius >= chi_radius)");
    if (cfg.chi_tilde_radius > 0.5 * cfg.extent + 1e-12)
        bad("chi_tilde_radius must fit inside the computational box");

    if (!(cfg.r1 > 0)) bad("data r1 must be positive");
    if (cfg.r1 > 0.8 * cfg.chi_radius + 1e-12)
        bad("initial data must be supported in the chi plateau (r1 <= 0.8 * chi_radius)");

    if (cfg.kind == "scan-norm" || cfg.kind == "fit-decay") {
        if (!(cfg.lambda_min > 0) || !(cfg.lambda_max > cfg.lambda_min))
            bad("scan requires 0 < lambda_min < lambda_max");
        if (cfg.scan_count != 0 && cfg.scan_count < 2)
            bad("scan count must be 0 (empty scan) or at least 2");
    }
    if (cfg.kind == "scan-strip") {
        if (!(cfg.re_min > 0) || !(cfg.re_max > cfg.re_min))
            bad("strip requires 0 < re_min < re_max");
        if (cfg.re_count < 2) bad("strip re_count must be at least 2");
        if (!(cfg.depth_min > 0) || !(cfg.depth_max > cfg.depth_min))
            bad("strip requires 0 < depth_min < depth_max");
        if (cfg.depth_count < 2) bad("strip depth_count must be at least 2");
    }
    if (cfg.kind == "simulate" || cfg.kind == "fit-decay" || cfg.kind == "stone-compare") {
        if (!(cfg.t_end > 0)) bad("sim t_end must be positive");
        if (!(cfg.safety > 0) || cfg.safety > 1) bad("sim safety must lie in (0, 1]");
        if (cfg.sample_stride < 1) bad("sim sample_stride must be at least 1");
        if (!(cfg.r2 > 0)) bad("sim r2 must be positive");
    }
    if (cfg.kind == "stone-compare") {
        if (!(cfg.eps > 0) || cfg.eps > 0.5) bad("stone eps must lie in (0, 0.5]");
        if (!(cfg.lambda_window > 0)) bad("stone lambda_window must be positive");
        if (!(cfg.avoid_radius > 0)) bad("stone avoid_radius must be positive");
        if (cfg.min_nodes < 8) bad("stone min_nodes must be at least 8");
        if (cfg.compare_times.empty()) bad("stone compare_times must be nonempty");
        for (double t : cfg.compare_times)
            if (!(t > 0)) bad("stone compare_times must be positive");
        if (cfg.r2 > 0.8 * cfg.chi_radius + 1e-12)
            bad("stone comparison ball must sit in the chi plateau (r2 <= 0.8 * chi_radius)");
    }
    if (cfg.kind == "fit-decay") {
        if (cfg.decay_k < 1 || cfg.decay_k > 3) bad("fit decay_k must be 1, 2, or 3");
        if (!(cfg.low_cap > 0)) bad("fit low_cap must be positive");
        if (!(cfg.high_floor > 0)) bad("fit high_floor must be positive");
    }
    for (double t : cfg.snapshot_times)
        if (!(t >= 0)) bad("snapshot_times must be nonnegative");
}

} // namespace ldl
