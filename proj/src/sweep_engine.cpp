#include "spinmetric/sweep_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <thread>

#include "spinmetric/csv.hpp"
#include "spinmetric/errors.hpp"

namespace spinmetric::sweep {

namespace {

constexpr double kEnvelopeProminence = 0.05;
constexpr char kHeatmapHeader[] = "G,t,sx,px,n_alpha,n_beta";

std::string axis_name(Axis axis) {
    switch (axis) {
        case Axis::x: return "x";
        case Axis::y: return "y";
        case Axis::z: return "z";
    }
    return "?";
}

void append_rows(CsvBuilder& csv, double G, const minimal::ObservableTrace& trace) {
    for (std::size_t k = 0; k < trace.size(); ++k) {
        csv.row({G, trace.times[k], trace.sx[k], minimal::ObservableTrace::population(trace.sx[k]),
                 trace.n_alpha[k], trace.n_beta[k]});
    }
}

}  // namespace

std::vector<double> SweepGrid::log_spaced(double lo, double hi, int count) {
    if (!(lo > 0.0) || !(hi > lo) || count < 2) {
        throw DomainError("log grid needs 0 < lo < hi and at least 2 points");
    }
    std::vector<double> values(count);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < count; ++i) {
        values[i] = std::pow(10.0, a + (b - a) * i / (count - 1));
    }
    return values;
}

SweepGrid SweepGrid::defaults() {
    SweepGrid grid;
    grid.G_values = log_spaced(0.01, 100.0, 60);
    grid.params.t_max = 400.0;
    grid.params.dt = 0.02;
    return grid;
}

void SweepGrid::validate() const {
    if (G_values.empty()) throw DomainError("sweep grid has no G values");
    for (std::size_t i = 0; i < G_values.size(); ++i) {
        if (!(G_values[i] >= 0.0) || !std::isfinite(G_values[i])) {
            throw DomainError("sweep G values must be finite and >= 0");
        }
        if (i > 0 && !(G_values[i] > G_values[i - 1])) {
            throw DomainError("sweep G values must be strictly increasing");
        }
    }
    params.validate();
}

bool SweepGrid::straddles_crossover() const {
    return !G_values.empty() && G_values.front() < std::numbers::pi &&
           G_values.back() > std::numbers::pi;
}

void RunManifest::set(std::string key, std::string value) {
    for (auto& [k, v] : entries_) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    entries_.emplace_back(std::move(key), std::move(value));
}

const std::string& RunManifest::get(const std::string& key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    throw std::out_of_range("manifest has no key " + key);
}

bool RunManifest::contains(const std::string& key) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& kv) { return kv.first == key; });
}

std::string RunManifest::to_text() const {
    std::string text;
    for (const auto& [k, v] : entries_) {
        text += k;
        text += '=';
        text += v;
        text += '\n';
    }
    return text;
}

RunManifest RunManifest::for_params(const minimal::ModelParams& params) {
    RunManifest m;
    m.set("G", format_double(params.G));
    m.set("mu", format_double(params.mu));
    m.set("N", std::to_string(params.cutoff));
    m.set("t_max", format_double(params.t_max));
    m.set("dt", format_double(params.dt));
    m.set("code_version", code_version());
    return m;
}

std::string code_version() {
#ifdef SPINMETRIC_VERSION
    return SPINMETRIC_VERSION;
#else
    return "unknown";
#endif
}

std::vector<HeatmapRow> SweepResult::table() const {
    std::vector<HeatmapRow> rows;
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& tr = traces[i];
        for (std::size_t k = 0; k < tr.size(); ++k) {
            rows.push_back({grid.G_values[i], tr.times[k], tr.sx[k],
                            minimal::ObservableTrace::population(tr.sx[k]), tr.n_alpha[k],
                            tr.n_beta[k]});
        }
    }
    return rows;
}

SweepResult run_sweep(const SweepGrid& grid, int workers) {
    return run_sweep(grid, workers, [&grid](const minimal::ModelParams& p) {
        const auto h = minimal::build_minimal_hamiltonian(p);
        return minimal::observable_trace(
            h, minimal::initial_state(grid.direction, grid.sign, h.space()), p);
    });
}

SweepResult run_sweep(const SweepGrid& grid, int workers, const PointRunner& runner) {
    grid.validate();
    if (workers < 1) throw DomainError("worker count must be >= 1");
    const auto started = std::chrono::steady_clock::now();
    const std::size_t count = grid.G_values.size();

    std::vector<minimal::ObservableTrace> traces(count);
    std::vector<std::exception_ptr> failures(count);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                minimal::ModelParams p = grid.params;
                p.G = grid.G_values[i];
                auto trace = runner(p);
                trace.check_invariants();
                traces[i] = std::move(trace);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };

    const int pool = std::clamp<int>(workers, 1, static_cast<int>(count));
    {
        std::vector<std::jthread> threads;
        for (int w = 1; w < pool; ++w) threads.emplace_back(work);
        work();
    }

    for (std::size_t i = 0; i < count; ++i) {
        if (!failures[i]) continue;
        try {
            std::rethrow_exception(failures[i]);
        } catch (const std::exception& e) {
            std::throw_with_nested(SweepError(
                grid.G_values[i], "sweep failed at G = " + format_double(grid.G_values[i]) +
                                      ": " + e.what()));
        }
    }

    SweepResult result;
    result.grid = grid;
    result.traces = std::move(traces);

    CsvBuilder all(kHeatmapHeader);
    for (std::size_t i = 0; i < count; ++i) {
        CsvBuilder one(kHeatmapHeader);
        append_rows(one, grid.G_values[i], result.traces[i]);
        append_rows(all, grid.G_values[i], result.traces[i]);
        result.run_checksums.push_back(sha256_hex(one.text()));
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    RunManifest& m = result.manifest;
    m = RunManifest::for_params(grid.params);
    m.set("G", "sweep");
    std::string gs;
    for (std::size_t i = 0; i < count; ++i) gs += (i ? ";" : "") + format_double(grid.G_values[i]);
    m.set("G_values", gs);
    m.set("direction", axis_name(grid.direction));
    m.set("sign", grid.sign == minimal::Sign::plus ? "+" : "-");
    m.set("wall_time_s", format_double(wall));
    for (std::size_t i = 0; i < count; ++i) {
        m.set("run_checksum." + std::to_string(i), result.run_checksums[i]);
    }
    m.set("checksum_sha256", sha256_hex(all.text()));
    return result;
}

std::string heatmap_csv(const SweepResult& result) {
    CsvBuilder csv(kHeatmapHeader);
    for (std::size_t i = 0; i < result.traces.size(); ++i) {
        append_rows(csv, result.grid.G_values[i], result.traces[i]);
    }
    return csv.text();
}

void heatmap_export(const SweepResult& result, const std::filesystem::path& path) {
    write_text_file(path, heatmap_csv(result));
}

RevivalDiagnostic revival_diagnostic(const minimal::ObservableTrace& trace, double t_min) {
    const std::size_t n = trace.size();
    if (n < 3) throw InsufficientData("revival diagnostic needs at least 3 samples");
    if (!(t_min < trace.times.back())) {
        throw InsufficientData("t_min must lie before the end of the trace");
    }
    std::vector<double> px(n);
    for (std::size_t k = 0; k < n; ++k) px[k] = minimal::ObservableTrace::population(trace.sx[k]);

    RevivalDiagnostic d;
    d.revival_peak = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        if (trace.times[k] > t_min) d.revival_peak = std::max(d.revival_peak, px[k]);
    }

    // Upper envelope: the first sample plus every local maximum of p_x.
    std::vector<std::size_t> env{0};
    for (std::size_t k = 1; k + 1 < n; ++k) {
        if (px[k] > px[k - 1] && px[k] >= px[k + 1]) env.push_back(k);
    }

    d.first_peak_time = std::numeric_limits<double>::quiet_NaN();
    double running_min = px[env.front()];
    for (std::size_t e = 1; e < env.size(); ++e) {
        const double v = px[env[e]];
        running_min = std::min(running_min, v);
        if (v - running_min < kEnvelopeProminence) continue;
        // Climb to the top of this rise; it ends once the envelope falls back by the prominence.
        std::size_t best = e;
        for (std::size_t f = e + 1; f < env.size(); ++f) {
            if (px[env[f]] > px[env[best]]) best = f;
            if (px[env[best]] - px[env[f]] >= kEnvelopeProminence) break;
        }
        d.first_peak_time = trace.times[env[best]];
        break;
    }

    const double late_start = 0.75 * trace.times.back();
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t idx : env) {
        if (trace.times[idx] >= late_start) {
            sum += px[idx];
            ++count;
        }
    }
    d.late_envelope_mean = count ? sum / count : std::numeric_limits<double>::quiet_NaN();
    return d;
}

std::string diagnostics_csv(const SweepResult& result, double t_min) {
    CsvBuilder csv("G,revival_peak,first_peak_time");
    for (std::size_t i = 0; i < result.traces.size(); ++i) {
        const RevivalDiagnostic d = revival_diagnostic(result.traces[i], t_min);
        csv.row({result.grid.G_values[i], d.revival_peak, d.first_peak_time});
    }
    return csv.text();
}

}  // namespace spinmetric::sweep
