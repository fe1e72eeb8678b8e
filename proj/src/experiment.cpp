#include "ldl/experiment.hpp"

#include "ldl/analysis_fit.hpp"
#include "ldl/fields.hpp"
#include "ldl/free_resolvent.hpp"
#include "ldl/grid.hpp"
#include "ldl/linalg.hpp"
#include "ldl/masks.hpp"
#include "ldl/norms.hpp"
#include "ldl/perturbed_resolvent.hpp"
#include "ldl/spectral_scan.hpp"
#include "ldl/stone_propagator.hpp"
#include "ldl/wave_sim.hpp"
#include "ldl/wavespeed.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ldl {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using C = std::complex<double>;

json config_echo(const ExperimentConfig& c) {
    json j;
    j["experiment"] = {{"kind", c.kind},
                       {"out", c.out_dir},
                       {"seed", c.seed},
                       {"threads", c.threads}};
    j["grid"] = {{"dim", c.dim}, {"extent", c.extent}, {"spacing", c.spacing}};
    j["profile"] = {{"kind", c.profile},
                    {"amplitude", c.amplitude},
                    {"support_radius", c.support_radius}};
    j["masks"] = {{"chi_radius", c.chi_radius}, {"chi_tilde_radius", c.chi_tilde_radius}};
    j["data"] = {{"r1", c.r1}, {"amp0", c.amp0}, {"amp1", c.amp1}};
    j["scan"] = {{"lambda_min", c.lambda_min},
                 {"lambda_max", c.lambda_max},
                 {"count", c.scan_count},
                 {"with_gradient", c.with_gradient}};
    j["strip"] = {{"re_min", c.re_min},
                  {"re_max", c.re_max},
                  {"re_count", c.re_count},
                  {"depth_min", c.depth_min},
                  {"depth_max", c.depth_max},
                  {"depth_count", c.depth_count}};
    j["sim"] = {{"t_end", c.t_end},
                {"safety", c.safety},
                {"sample_stride", c.sample_stride},
                {"r2", c.r2},
                {"weighted_local", c.weighted_local},
                {"snapshot_times", c.snapshot_times}};
    j["stone"] = {{"eps", c.eps},
                  {"lambda_window", c.lambda_window},
                  {"avoid_radius", c.avoid_radius},
                  {"min_nodes", c.min_nodes},
                  {"compare_times", c.compare_times}};
    j["fit"] = {{"decay_k", c.decay_k}, {"low_cap", c.low_cap}, {"high_floor", c.high_floor}};
    return j;
}

// Collects the emitted files so the manifest can list and hash all of them.
struct Sink {
    fs::path dir;
    std::vector<std::string> names;

    void write_text(const std::string& name, const std::string& content) {
        const fs::path p = dir / name;
        std::ofstream out(p, std::ios::binary);
        if (!out) throw ConfigError("cannot open artifact for writing: " + p.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw ConfigError("failed while writing artifact: " + p.string());
        names.push_back(name);
    }

    // For files written through other helpers (binary dumps).
    void adopt(const std::string& name) { names.push_back(name); }

    std::string path_of(const std::string& name) const { return (dir / name).string(); }
};

struct Setup {
    Grid grid;
    WavespeedProfile speed;
};

Setup build_setup(const ExperimentConfig& cfg) {
    Grid grid = make_grid(cfg.dim, cfg.extent, cfg.spacing);
    ProfileParams params;
    params.amplitude = cfg.amplitude;
    params.support_radius = cfg.support_radius;
    WavespeedProfile speed =
        make_wavespeed(profile_kind_from_string(cfg.profile), params, grid);
    return {std::move(grid), std::move(speed)};
}

json fit_json(const FitResult& f) {
    return {{"model", f.model},
            {"coefficients", f.coeffs},
            {"relative_residual", f.residual},
            {"samples_used", f.n_used},
            {"window", {f.window_lo, f.window_hi}}};
}

json ceiling_json(const std::vector<CeilingSample>& checks) {
    json arr = json::array();
    for (const CeilingSample& c : checks)
        arr.push_back({{"re_lambda", c.lambda.real()},
                       {"im_lambda", c.lambda.imag()},
                       {"measured", c.measured},
                       {"ceiling", c.ceiling},
                       {"ok", c.ok}});
    return arr;
}

std::string energy_csv(const std::vector<EnergySample>& trace) {
    std::ostringstream os;
    os << "t,local_energy,global_energy\n";
    for (const EnergySample& s : trace)
        os << format_g17(s.t) << ',' << format_g17(s.local_e) << ',' << format_g17(s.global_e)
           << '\n';
    return os.str();
}

std::string compare_csv(const CompareResult& cr) {
    std::ostringstream os;
    os << "t,l2_discrepancy,energy_discrepancy,eps,lambda_window\n";
    for (const CompareRow& r : cr.rows)
        os << format_g17(r.t) << ',' << format_g17(r.state_discrepancy) << ','
           << format_g17(r.energy_discrepancy) << ',' << format_g17(cr.eps) << ','
           << format_g17(cr.lambda_window) << '\n';
    return os.str();
}

json run_scan_norm(const ExperimentConfig& cfg, Sink& sink) {
    const Setup s = build_setup(cfg);
    json rep;
    rep["tags"] = {"spectral_scan", "low_energy_envelope", "high_energy_envelope",
                   "spectral_ceiling"};

    ScanResult scan; // empty scan stays empty and yields a header-only CSV
    if (cfg.scan_count > 0)
        scan = scan_real_axis(s.grid, s.speed, cfg.chi_radius, cfg.chi_tilde_radius,
                              cfg.lambda_min, cfg.lambda_max, cfg.scan_count, cfg.with_gradient);

    std::ostringstream os;
    write_scan_csv(os, scan);
    sink.write_text("scan.csv", os.str());

    int flagged = 0;
    for (const NormSample& x : scan.samples) flagged += x.pole_flag ? 1 : 0;
    rep["samples"] = scan.samples.size();
    rep["pole_flags"] = flagged;
    rep["epsilon0"] = scan.epsilon0;
    rep["ceiling_checks"] = ceiling_json(scan.ceiling_checks);

    if (!scan.samples.empty()) {
        try {
            rep["low_energy_fit"] = fit_json(fit_low_energy(scan.samples, cfg.dim, cfg.low_cap));
        } catch (const std::invalid_argument& e) {
            rep["low_energy_fit"] = {{"error", e.what()}};
        }
        try {
            rep["high_energy_fit"] = fit_json(fit_high_energy(scan.samples, cfg.high_floor));
        } catch (const std::invalid_argument& e) {
            rep["high_energy_fit"] = {{"error", e.what()}};
        }
    }
    return rep;
}

json run_scan_strip(const ExperimentConfig& cfg, Sink& sink) {
    const Setup s = build_setup(cfg);
    const ScanResult scan =
        scan_lower_halfplane(s.grid, s.speed, cfg.chi_radius, cfg.re_min, cfg.re_max,
                             cfg.re_count, cfg.depth_min, cfg.depth_max, cfg.depth_count);
    std::ostringstream os;
    write_scan_csv(os, scan);
    sink.write_text("strip.csv", os.str());

    json rep;
    rep["tags"] = {"resonance_strip"};
    rep["samples"] = scan.samples.size();
    rep["re_columns"] = scan.re_columns;
    rep["pole_free_depth"] = scan.pole_free_depth;
    double min_depth = cfg.depth_max;
    for (double d : scan.pole_free_depth) min_depth = std::min(min_depth, d);
    rep["min_pole_free_depth"] = min_depth;
    return rep;
}

json grid_sidecar(const Grid& g) {
    return {{"dim", g.dim},
            {"extent", g.extent},
            {"spacing", g.spacing},
            {"nodes_per_axis", g.nodes_per_axis}};
}

json run_simulate(const ExperimentConfig& cfg, Sink& sink) {
    const Setup s = build_setup(cfg);
    const CauchyData data = make_pulse_data(s.grid, cfg.r1, cfg.amp0, cfg.amp1);

    SimOptions opts;
    opts.t_end = cfg.t_end;
    opts.safety = cfg.safety;
    opts.sample_stride = cfg.sample_stride;
    opts.r2 = cfg.r2;
    opts.weighted_local = cfg.weighted_local;
    opts.snapshot_times = cfg.snapshot_times;
    const SimResult res = run_simulation(s.grid, s.speed, data, opts);

    sink.write_text("energy.csv", energy_csv(res.trace));

    std::vector<std::uint32_t> shape(static_cast<size_t>(s.grid.dim),
                                     static_cast<std::uint32_t>(s.grid.nodes_per_axis));
    for (size_t i = 0; i < res.snapshots.size(); ++i) {
        char stem[32];
        std::snprintf(stem, sizeof(stem), "snapshot_%03zu", i);
        const std::string name_u = std::string(stem) + "_u.bin";
        const std::string name_v = std::string(stem) + "_v.bin";
        dump_complex_field(sink.path_of(name_u), shape, res.snapshots[i].u.cast<C>());
        sink.adopt(name_u);
        dump_complex_field(sink.path_of(name_v), shape, res.snapshots[i].v.cast<C>());
        sink.adopt(name_v);
        json side = {{"time", res.snapshots[i].t},
                     {"grid", grid_sidecar(s.grid)},
                     {"profile",
                      {{"kind", cfg.profile},
                       {"amplitude", cfg.amplitude},
                       {"support_radius", cfg.support_radius}}},
                     {"fields", {{"u", name_u}, {"v", name_v}}}};
        sink.write_text(std::string(stem) + ".json", side.dump(2) + "\n");
    }

    json rep;
    rep["tags"] = {"energy_trace", "support_transport"};
    rep["dt"] = res.dt;
    rep["steps"] = res.steps;
    rep["samples"] = res.trace.size();
    const double e0 = res.trace.empty() ? 0.0 : res.trace.front().global_e;
    double drift = 0.0;
    for (const EnergySample& t : res.trace)
        if (e0 > 0.0) drift = std::max(drift, std::abs(t.global_e - e0) / e0);
    rep["initial_global_energy"] = e0;
    rep["relative_energy_drift"] = drift;
    const double cone = cfg.r1 + s.speed.c_max * cfg.t_end + 4.0 * s.grid.spacing;
    rep["max_support_radius"] = res.max_support_radius;
    rep["cone_bound"] = cone;
    rep["support_within_cone"] = res.max_support_radius <= cone;
    rep["max_envelope_leak"] = res.max_envelope_leak;
    return rep;
}

json run_stone_compare(const ExperimentConfig& cfg, Sink& sink) {
    const Setup s = build_setup(cfg);
    const CauchyData data = make_pulse_data(s.grid, cfg.r1, cfg.amp0, cfg.amp1);

    StoneOptions opts;
    opts.eps = cfg.eps;
    opts.lambda_window = cfg.lambda_window;
    opts.avoid_radius = cfg.avoid_radius;
    opts.min_half_axis_nodes = cfg.min_nodes;
    const CompareResult cr =
        compare_propagators(s.grid, s.speed, data, cfg.r2, cfg.compare_times, opts, cfg.safety);

    sink.write_text("compare.csv", compare_csv(cr));

    json rep;
    rep["tags"] = {"propagator_agreement"};
    json rows = json::array();
    double max_state = 0.0, max_energy = 0.0;
    for (const CompareRow& r : cr.rows) {
        rows.push_back({{"t", r.t},
                        {"l2_discrepancy", r.state_discrepancy},
                        {"energy_discrepancy", r.energy_discrepancy}});
        max_state = std::max(max_state, r.state_discrepancy);
        max_energy = std::max(max_energy, r.energy_discrepancy);
    }
    rep["rows"] = rows;
    rep["max_l2_discrepancy"] = max_state;
    rep["max_energy_discrepancy"] = max_energy;
    rep["eps"] = cr.eps;
    rep["lambda_window"] = cr.lambda_window;
    rep["dt"] = cr.dt;
    return rep;
}

json run_fit_decay(const ExperimentConfig& cfg, Sink& sink) {
    const Setup s = build_setup(cfg);
    const CauchyData data = make_pulse_data(s.grid, cfg.r1, cfg.amp0, cfg.amp1);

    SimOptions opts;
    opts.t_end = cfg.t_end;
    opts.safety = cfg.safety;
    opts.sample_stride = cfg.sample_stride;
    opts.r2 = cfg.r2;
    opts.weighted_local = cfg.weighted_local;
    const SimResult res = run_simulation(s.grid, s.speed, data, opts);
    sink.write_text("energy.csv", energy_csv(res.trace));

    const double gnorm = graph_norm(s.grid, s.speed, data, cfg.decay_k);
    const DecayFit fit = fit_decay_envelope(res.trace, cfg.decay_k, gnorm);

    json rep;
    rep["tags"] = {"decay_envelope"};
    rep["k"] = fit.k;
    rep["graph_norm"] = gnorm;
    rep["envelope_constant"] = fit.constant;
    rep["ratio_min"] = fit.ratio_min;
    rep["ratio_max"] = fit.ratio_max;
    rep["ratio_band"] = fit.ratio_min > 0.0 ? fit.ratio_max / fit.ratio_min
                                            : std::numeric_limits<double>::infinity();
    rep["times"] = res.trace.size();
    return rep;
}

json run_verify(const ExperimentConfig& cfg, Sink& sink, int& failures) {
    (void)sink;
    const Setup s = build_setup(cfg);
    json gates = json::array();
    auto add_gate = [&](const std::string& name, bool pass, json detail) {
        detail["name"] = name;
        detail["pass"] = pass;
        gates.push_back(std::move(detail));
        if (!pass) ++failures;
    };

    { // With c == 1 the cutoff solve must reproduce the assembled free kernel.
        const WavespeedProfile unit = make_wavespeed(ProfileKind::constant, {}, s.grid);
        const Eigen::VectorXd w = unit.inv_c_sq * s.grid.weight();
        json rows = json::array();
        bool pass = true;
        const double tol = 1e-12;
        for (C lam : {C(0.01, 0.0), C(1.0, 0.5), C(3.0, 0.0)}) {
            const SpectralPoint pt = make_spectral_point(lam, cfg.dim);
            const SolveReport rep = solve_cutoff_resolvent(pt, s.grid, unit, cfg.chi_radius);
            const KernelMatrix free_kernel = assemble_free_resolvent(pt, s.grid, cfg.chi_radius);
            const double den = operator_norm(free_kernel.M, w, w).value;
            const double num = operator_norm(rep.chi_R_chi - free_kernel.M, w, w).value;
            const double rel = num / den;
            rows.push_back({{"re_lambda", lam.real()},
                            {"im_lambda", lam.imag()},
                            {"relative_error", rel}});
            pass = pass && rel <= tol;
        }
        add_gate("free_reduction", pass, {{"tolerance", tol}, {"points", rows}});
    }

    { // Series and direct solves must agree deep in the contraction regime.
        json rows = json::array();
        bool pass = true;
        const double tol = 1e-10;
        const double prefactor_cap = 3.0;
        for (double lam : {0.05, 0.2}) {
            const SpectralPoint pt = make_spectral_point(C(lam, 0.0), cfg.dim);
            SolveOptions direct_opts;
            direct_opts.method = SolveMethod::direct;
            SolveOptions series_opts;
            series_opts.method = SolveMethod::neumann;
            const SolveReport a = solve_cutoff_resolvent(pt, s.grid, s.speed, cfg.chi_radius,
                                                         direct_opts);
            const SolveReport b = solve_cutoff_resolvent(pt, s.grid, s.speed, cfg.chi_radius,
                                                         series_opts);
            const double rel = (a.chi_R_chi - b.chi_R_chi).norm() / a.chi_R_chi.norm();
            rows.push_back({{"lambda", lam},
                            {"relative_gap", rel},
                            {"contraction", b.contraction_norm},
                            {"prefactor", b.prefactor_norm},
                            {"terms", b.neumann_terms}});
            pass = pass && rel <= tol && b.prefactor_norm <= prefactor_cap;
        }
        add_gate("contraction_regime", pass,
                 {{"tolerance", tol}, {"prefactor_cap", prefactor_cap}, {"points", rows}});
    }

    { // Operator identities on the stencil realization sit at roundoff.
        const IdentityMasks masks = derive_identity_masks(s.grid, s.speed);
        json rows = json::array();
        bool pass = true;
        const double tol = 1e-6;
        const std::pair<C, C> pairs[] = {{C(2.0, 0.5), C(3.0, 0.5)}, {C(1.0, 1.0), C(1.5, 0.8)}};
        for (const auto& pr : pairs) {
            const IdentityReport idr =
                verify_identities(pr.first, pr.second, s.grid, s.speed, masks);
            rows.push_back({{"lambda", {pr.first.real(), pr.first.imag()}},
                            {"mu", {pr.second.real(), pr.second.imag()}},
                            {"first_resolvent", idr.first_resolvent},
                            {"five_term", idr.five_term},
                            {"adjoint", idr.adjoint},
                            {"gradient", idr.gradient}});
            pass = pass && idr.first_resolvent < tol && idr.five_term < tol &&
                   idr.adjoint < tol && idr.gradient < tol;
        }
        add_gate("identity_suite", pass, {{"tolerance", tol}, {"pairs", rows}});
    }

    { // Self-adjointness ceiling at lambda = 2i: dist(lambda^2, R+) = 4.
        const SpectralPoint pt = make_spectral_point(C(0.0, 2.0), cfg.dim);
        const SolveReport rep = solve_cutoff_resolvent(pt, s.grid, s.speed, cfg.chi_radius);
        const Eigen::VectorXd w = s.speed.inv_c_sq * s.grid.weight();
        const double measured = operator_norm(rep.chi_R_chi, w, w).value;
        const double ceiling = 0.25;
        const bool pass = measured <= 1.05 * ceiling;
        add_gate("spectral_ceiling", pass,
                 {{"measured", measured}, {"ceiling", ceiling}, {"slack", 1.05}});
    }

    { // The generator must not spread data support beyond one stencil layer.
        const CauchyData data = make_pulse_data(s.grid, cfg.r1, cfg.amp0, cfg.amp1);
        double leak = 0.0;
        const double r_prime = data.support_radius + 2.0 * s.grid.spacing;
        const bool ok = generator_preserves_support(s.grid, s.speed, data, r_prime, &leak);
        add_gate("generator_support", ok && leak <= 1e-14,
                 {{"radius", r_prime}, {"leak", leak}, {"tolerance", 1e-14}});
    }

    json rep;
    rep["tags"] = {"identity_suite", "contraction_regime", "spectral_ceiling"};
    rep["gates"] = gates;
    rep["gates_failed"] = failures;
    return rep;
}

} // namespace

std::string format_g17(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::uint64_t fnv1a64(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot hash missing file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    return fnv1a64(bytes.data(), bytes.size());
}

void dump_complex_field(const std::string& path, const std::vector<std::uint32_t>& shape,
                        const Eigen::VectorXcd& values) {
    std::uint64_t total = 1;
    for (std::uint32_t s : shape) total *= s;
    if (shape.empty() || total != static_cast<std::uint64_t>(values.size()))
        throw std::invalid_argument("field dump: shape does not match value count");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open artifact for writing: " + path);
    out.write("LDL1", 4);
    const std::uint32_t rank = static_cast<std::uint32_t>(shape.size());
    out.write(reinterpret_cast<const char*>(&rank), sizeof(rank));
    out.write(reinterpret_cast<const char*>(shape.data()),
              static_cast<std::streamsize>(shape.size() * sizeof(std::uint32_t)));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double re = values[i].real();
        const double im = values[i].imag();
        out.write(reinterpret_cast<const char*>(&re), sizeof(re));
        out.write(reinterpret_cast<const char*>(&im), sizeof(im));
    }
    out.flush();
    if (!out) throw ConfigError("failed while writing artifact: " + path);
}

Eigen::VectorXcd load_complex_field(const std::string& path, std::vector<std::uint32_t>& shape) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open field dump: " + path);
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::string(magic, 4) != "LDL1")
        throw std::runtime_error("bad field dump magic in " + path);
    std::uint32_t rank = 0;
    in.read(reinterpret_cast<char*>(&rank), sizeof(rank));
    if (!in || rank == 0 || rank > 4) throw std::runtime_error("bad field dump rank in " + path);
    shape.assign(rank, 0);
    in.read(reinterpret_cast<char*>(shape.data()),
            static_cast<std::streamsize>(rank * sizeof(std::uint32_t)));
    std::uint64_t total = 1;
    for (std::uint32_t s : shape) total *= s;
    Eigen::VectorXcd values(static_cast<Eigen::Index>(total));
    for (std::uint64_t i = 0; i < total; ++i) {
        double re = 0.0, im = 0.0;
        in.read(reinterpret_cast<char*>(&re), sizeof(re));
        in.read(reinterpret_cast<char*>(&im), sizeof(im));
        if (!in) throw std::runtime_error("truncated field dump: " + path);
        values[static_cast<Eigen::Index>(i)] = C(re, im);
    }
    return values;
}

RunOutcome run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (cfg.threads > 0) Eigen::setNbThreads(cfg.threads);

    Sink sink;
    sink.dir = fs::path(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(sink.dir, ec);
    if (ec || !fs::is_directory(sink.dir))
        throw ConfigError("cannot create output directory: " + cfg.out_dir);

    const auto t0 = std::chrono::steady_clock::now();
    int failures = 0;
    json report;
    if (cfg.kind == "scan-norm") report = run_scan_norm(cfg, sink);
    else if (cfg.kind == "scan-strip") report = run_scan_strip(cfg, sink);
    else if (cfg.kind == "simulate") report = run_simulate(cfg, sink);
    else if (cfg.kind == "stone-compare") report = run_stone_compare(cfg, sink);
    else if (cfg.kind == "fit-decay") report = run_fit_decay(cfg, sink);
    else if (cfg.kind == "verify") report = run_verify(cfg, sink, failures);
    else throw ConfigError("unknown experiment kind: " + cfg.kind);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    report["kind"] = cfg.kind;
    report["seed"] = cfg.seed;
    report["config"] = config_echo(cfg);
    // Verify artifacts stay byte-reproducible run to run, so the timing for
    // that kind goes to stderr only.
    if (cfg.kind != "verify") report["wall_time_seconds"] = wall;
    sink.write_text("report.json", report.dump(2) + "\n");

    json manifest;
    manifest["format_version"] = 1;
    manifest["tool"] = {{"name", "ldl"}, {"version", "1.0.0"}};
    manifest["kind"] = cfg.kind;
    manifest["config"] = config_echo(cfg);
    json arts = json::array();
    for (const std::string& name : sink.names) {
        const std::string full = sink.path_of(name);
        char hex[17];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(fnv1a64_file(full)));
        arts.push_back({{"name", name},
                        {"bytes", static_cast<std::uint64_t>(fs::file_size(full))},
                        {"fnv1a64", hex}});
    }
    manifest["artifacts"] = arts;
    sink.write_text("manifest.json", manifest.dump(2) + "\n");

    std::fprintf(stderr, "wall_time_seconds=%.3f\n", wall);

    RunOutcome out;
    out.exit_code = failures > 0 ? 1 : 0;
    out.artifacts = sink.names;
    return out;
}

} // namespace ldl
