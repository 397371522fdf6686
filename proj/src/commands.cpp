#include "spinmetric/commands.hpp"

#include <cmath>
#include <exception>
#include <numbers>
#include <ostream>

#include "spinmetric/csv.hpp"
#include "spinmetric/errors.hpp"
#include "spinmetric/gravity_sector.hpp"
#include "spinmetric/lattice_model.hpp"
#include "spinmetric/minimal_model.hpp"
#include "spinmetric/sweep_engine.hpp"

namespace spinmetric::commands {

namespace fs = std::filesystem;
using minimal::ModelParams;
using sweep::RunManifest;

namespace {

constexpr double kEvolveDefaultTmax = 100.0;
constexpr double kSweepDefaultTmax = 400.0;

Axis parse_direction(const RunConfig& c) {
    const std::string& v = c.raw("direction");
    if (v == "x") return Axis::x;
    if (v == "y") return Axis::y;
    if (v == "z") return Axis::z;
    throw ConfigError("direction", "config key 'direction' must be x, y or z, got '" + v + "'");
}

minimal::Sign parse_sign(const RunConfig& c) {
    const std::string& v = c.raw("sign");
    if (v == "+" || v == "plus") return minimal::Sign::plus;
    if (v == "-" || v == "minus") return minimal::Sign::minus;
    throw ConfigError("sign", "config key 'sign' must be + or -, got '" + v + "'");
}

// Re-raises parameter domain errors as config errors naming the key.
ModelParams model_params(const RunConfig& c, double default_t_max) {
    ModelParams p;
    p.G = c.real("G");
    p.mu = c.real("mu");
    p.cutoff = c.integer("N");
    p.t_max = c.has("t_max") ? c.real("t_max") : default_t_max;
    p.dt = c.real("dt");
    if (!(p.G >= 0.0)) throw ConfigError("G", "config key 'G' must be >= 0");
    if (!(p.mu > 0.0)) throw ConfigError("mu", "config key 'mu' must be > 0");
    if (p.cutoff < 2) throw ConfigError("N", "config key 'N' must be >= 2");
    if (!(p.dt > 0.0)) throw ConfigError("dt", "config key 'dt' must be > 0");
    if (!(p.t_max >= p.dt)) throw ConfigError("t_max", "config key 't_max' must be >= dt");
    return p;
}

void finish(RunManifest manifest, const fs::path& out, const std::string& primary_name,
            const std::vector<std::pair<std::string, std::string>>& files) {
    for (const auto& [name, text] : files) {
        write_text_file(out / name, text);
        manifest.set("checksum_sha256." + name, sha256_hex(text));
        if (name == primary_name) manifest.set("checksum_sha256", sha256_hex(text));
    }
    write_text_file(out / "manifest.txt", manifest.to_text());
}

}  // namespace

void cmd_evolve(const RunConfig& config, const fs::path& out) {
    const ModelParams p = model_params(config, kEvolveDefaultTmax);
    const Axis direction = parse_direction(config);
    const minimal::Sign sign = parse_sign(config);
    const bool metric = config.boolean("include_metric");

    const auto h = minimal::build_minimal_hamiltonian(p);
    const auto trace =
        minimal::observable_trace(h, minimal::initial_state(direction, sign, h.space()), p, metric);
    trace.check_invariants();

    using minimal::ObservableTrace;
    CsvBuilder csv("t,sx,sy,sz,px,py,pz,n_alpha,n_beta,energy,norm");
    for (std::size_t k = 0; k < trace.size(); ++k) {
        csv.row({trace.times[k], trace.sx[k], trace.sy[k], trace.sz[k],
                 ObservableTrace::population(trace.sx[k]), ObservableTrace::population(trace.sy[k]),
                 ObservableTrace::population(trace.sz[k]), trace.n_alpha[k], trace.n_beta[k],
                 trace.energy[k], trace.norm[k]});
    }
    std::vector<std::pair<std::string, std::string>> files{{"trace.csv", csv.text()}};
    if (metric) {
        CsvBuilder m("t,h11,h12");
        for (std::size_t k = 0; k < trace.size(); ++k) {
            m.row({trace.times[k], trace.h11[k], trace.h12[k]});
        }
        files.emplace_back("metric.csv", m.text());
    }

    RunManifest manifest = RunManifest::for_params(p);
    manifest.set("command", "evolve");
    manifest.set("direction", config.raw("direction"));
    manifest.set("sign", config.raw("sign"));
    manifest.set("g", format_double(h.coupling()));
    finish(std::move(manifest), out, "trace.csv", files);
}

void cmd_sweep(const RunConfig& config, const fs::path& out, int workers) {
    sweep::SweepGrid grid;
    grid.params = model_params(config, kSweepDefaultTmax);
    grid.direction = parse_direction(config);
    grid.sign = parse_sign(config);
    if (config.has("G_values")) {
        grid.G_values = config.real_list("G_values");
    } else {
        const double lo = config.real("G_min");
        const double hi = config.real("G_max");
        const int count = config.integer("G_count");
        if (!(lo > 0.0) || !(hi > lo) || count < 2) {
            throw ConfigError("G_count", "log grid needs 0 < G_min < G_max and G_count >= 2");
        }
        grid.G_values = sweep::SweepGrid::log_spaced(lo, hi, count);
    }
    try {
        grid.validate();
    } catch (const DomainError& e) {
        throw ConfigError("G_values", e.what());
    }
    const double t_min = config.real("t_min");
    if (!(t_min >= 0.0) || !(t_min < grid.params.t_max)) {
        throw ConfigError("t_min", "config key 't_min' must lie in [0, t_max)");
    }

    if (workers < 1) throw ConfigError("workers", "config key 'workers' must be >= 1");
    const sweep::SweepResult result = sweep::run_sweep(grid, workers);
    RunManifest manifest = result.manifest;
    manifest.set("command", "sweep");
    manifest.set("t_min", format_double(t_min));
    finish(std::move(manifest), out, "heatmap.csv",
           {{"heatmap.csv", sweep::heatmap_csv(result)},
            {"diagnostics.csv", sweep::diagnostics_csv(result, t_min)}});
}

void cmd_lattice(const RunConfig& config, const fs::path& out) {
    const int points = config.integer("k_points");
    if (points < 2) throw ConfigError("k_points", "config key 'k_points' must be >= 2");
    const double extent = config.real("k_extent");
    if (!(extent > 0.0)) throw ConfigError("k_extent", "config key 'k_extent' must be > 0");
    const double G = config.real("G");
    if (!(G >= 0.0)) throw ConfigError("G", "config key 'G' must be >= 0");
    const auto couplings = lattice::LatticeCouplings::from_background(
        G, config.real("alpha_c"), config.real("beta_c"));

    CsvBuilder bands("kx,ky,E_minus,E_plus");
    for (const auto& b : lattice::dispersion(lattice::KGrid::square(points, extent), couplings)) {
        bands.row({b.kx, b.ky, b.e_minus, b.e_plus});
    }

    const auto residual = lattice::fermi_point_residual(couplings);
    std::string report;
    auto line = [&](const std::string& k, double v) { report += k + "=" + format_double(v) + "\n"; };
    line("residual_P_plus", residual.plus);
    line("residual_P_minus", residual.minus);
    for (auto [which, tag] : {std::pair{lattice::FermiPoint::plus, "plus"},
                              std::pair{lattice::FermiPoint::minus, "minus"}}) {
        const auto c = lattice::low_energy_coefficients(couplings, which);
        line(std::string("A_") + tag, c.A);
        line(std::string("B_") + tag, c.B);
        line(std::string("C_") + tag, c.C);
        line(std::string("D_") + tag, c.D);
    }

    RunManifest manifest;
    manifest.set("command", "lattice");
    manifest.set("G", format_double(G));
    manifest.set("alpha_c", config.raw("alpha_c"));
    manifest.set("beta_c", config.raw("beta_c"));
    manifest.set("k_points", std::to_string(points));
    manifest.set("k_extent", format_double(extent));
    manifest.set("code_version", sweep::code_version());
    finish(std::move(manifest), out, "bands.csv",
           {{"bands.csv", bands.text()}, {"fermi_report.txt", report}});
}

void cmd_gravity_check(const RunConfig& config, const fs::path& out) {
    const std::vector<double> mus = config.real_list("mu_list");
    const int cutoff = config.integer("gravity_N");
    const int levels = config.integer("levels");
    for (double mu : mus) {
        if (!(mu > 0.0)) throw ConfigError("mu_list", "config key 'mu_list' entries must be > 0");
    }
    if (cutoff < 4) throw ConfigError("gravity_N", "config key 'gravity_N' must be >= 4");
    if (levels < 2 || 3 * levels > cutoff) {
        throw ConfigError("levels", "config key 'levels' must satisfy 2 <= levels <= gravity_N/3");
    }

    CsvBuilder csv(
        "mu,r,cosh2r,sinh2r,identity_residual,spacing,spacing_over_2mu,spacing_over_4mu,"
        "relative_variance,k_R");
    for (double mu : mus) {
        const auto b = gravity::bogoliubov_params(mu);
        const auto s = gravity::spectrum_spacing(gravity::quadratic_site_hamiltonian(mu, cutoff), levels);
        csv.row({mu, b.r, b.cosh2r, b.sinh2r, std::abs(b.cosh2r * b.cosh2r - b.sinh2r * b.sinh2r - 1.0),
                 s.mean_gap, s.mean_gap / (2.0 * mu), s.mean_gap / (4.0 * mu), s.relative_variance,
                 gravity::resonant_momentum(mu)});
    }
    RunManifest manifest;
    manifest.set("command", "gravity-check");
    manifest.set("mu_list", config.raw("mu_list"));
    manifest.set("gravity_N", std::to_string(cutoff));
    manifest.set("levels", std::to_string(levels));
    manifest.set("code_version", sweep::code_version());
    finish(std::move(manifest), out, "gravity_check.csv", {{"gravity_check.csv", csv.text()}});
}

void cmd_convergence(const RunConfig& config, const fs::path& out) {
    const ModelParams p = model_params(config, kEvolveDefaultTmax);
    const std::vector<int> cutoffs = config.integer_list("N_list");
    for (std::size_t i = 0; i < cutoffs.size(); ++i) {
        if (cutoffs[i] < 2 || (i > 0 && cutoffs[i] <= cutoffs[i - 1])) {
            throw ConfigError("N_list", "config key 'N_list' must be increasing cutoffs >= 2");
        }
    }
    if (cutoffs.size() < 2) throw ConfigError("N_list", "config key 'N_list' needs two entries");

    const auto steps =
        minimal::truncation_convergence(p, parse_direction(config), parse_sign(config), cutoffs);
    CsvBuilder csv("N_from,N_to,max_deviation");
    for (const auto& s : steps) csv.row({double(s.from_cutoff), double(s.to_cutoff), s.max_deviation});

    RunManifest manifest = RunManifest::for_params(p);
    manifest.set("command", "convergence");
    manifest.set("N_list", config.raw("N_list"));
    manifest.set("direction", config.raw("direction"));
    manifest.set("sign", config.raw("sign"));
    finish(std::move(manifest), out, "convergence.csv", {{"convergence.csv", csv.text()}});
}

namespace {

int classify(const std::exception& e, std::ostream& err) {
    if (const auto* cfg = dynamic_cast<const ConfigError*>(&e)) {
        err << "config error [" << cfg->key() << "]: " << e.what() << '\n';
        return kConfigError;
    }
    if (const auto* sw = dynamic_cast<const sweep::SweepError*>(&e)) {
        err << e.what() << '\n';
        try {
            std::rethrow_if_nested(*sw);
        } catch (const std::exception& inner) {
            return classify(inner, err);
        }
        return kFailure;
    }
    if (dynamic_cast<const NumericalError*>(&e) || dynamic_cast<const ExtractionInvalid*>(&e) ||
        dynamic_cast<const InsufficientData*>(&e)) {
        err << "numerical consistency failure: " << e.what() << '\n';
        return kNumericalError;
    }
    if (dynamic_cast<const DomainError*>(&e) || dynamic_cast<const InvalidCutoff*>(&e) ||
        dynamic_cast<const ShapeError*>(&e)) {
        err << "invalid input: " << e.what() << '\n';
        return kConfigError;
    }
    err << "error: " << e.what() << '\n';
    return kFailure;
}

}  // namespace

int run(const std::string& name, const RunConfig& config, int workers, std::ostream& err) {
    try {
        const auto out = config.output_dir();
        if (!out) throw ConfigError("out", "no output directory: pass --out or set out=<dir>");
        fs::create_directories(*out);
        if (name == "evolve") {
            cmd_evolve(config, *out);
        } else if (name == "sweep") {
            cmd_sweep(config, *out, workers > 0 ? workers : config.integer("workers"));
        } else if (name == "lattice") {
            cmd_lattice(config, *out);
        } else if (name == "gravity-check") {
            cmd_gravity_check(config, *out);
        } else if (name == "convergence") {
            cmd_convergence(config, *out);
        } else {
            err << "unknown command '" << name << "'\n";
            return kConfigError;
        }
    } catch (const std::exception& e) {
        return classify(e, err);
    }
    return kSuccess;
}

}  // namespace spinmetric::commands
