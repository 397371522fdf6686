#pragma once

#include <filesystem>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spinmetric/minimal_model.hpp"

namespace spinmetric::sweep {

/// Grid of coupling values sharing one time grid, spin preparation, mu and cutoff.
struct SweepGrid {
    std::vector<double> G_values;
    minimal::ModelParams params;  // params.G is ignored
    Axis direction = Axis::x;
    minimal::Sign sign = minimal::Sign::plus;

    static std::vector<double> log_spaced(double lo, double hi, int count);
    /// 60 log-spaced G in [0.01, 100], spin-x start, t_max = 400, dt = 0.02.
    static SweepGrid defaults();

    /// G strictly increasing and >= 0; params valid.
    void validate() const;
    bool straddles_crossover() const;
};

/// Ordered key=value record describing a run.
class RunManifest {
public:
    void set(std::string key, std::string value);
    const std::string& get(const std::string& key) const;
    bool contains(const std::string& key) const;
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }
    std::string to_text() const;

    static RunManifest for_params(const minimal::ModelParams& params);

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

std::string code_version();

/// Raised when one grid point fails; the original error is nested.
class SweepError : public std::runtime_error {
public:
    SweepError(double G, const std::string& what) : std::runtime_error(what), G_(G) {}
    double failed_G() const noexcept { return G_; }

private:
    double G_;
};

struct HeatmapRow {
    double G = 0, t = 0, sx = 0, px = 0, n_alpha = 0, n_beta = 0;
};

struct SweepResult {
    SweepGrid grid;
    std::vector<minimal::ObservableTrace> traces;  // indexed like grid.G_values
    std::vector<std::string> run_checksums;
    RunManifest manifest;

    /// Long format, sorted by (G, t).
    std::vector<HeatmapRow> table() const;
};

/// Runs every grid point, up to `workers` at a time. Results are merged by grid
/// index, so the output does not depend on scheduling.
SweepResult run_sweep(const SweepGrid& grid, int workers = 1);

/// Produces the trace for one grid point (params.G set to that point).
using PointRunner = std::function<minimal::ObservableTrace(const minimal::ModelParams&)>;

/// Same as run_sweep with a caller-supplied point runner.
SweepResult run_sweep(const SweepGrid& grid, int workers, const PointRunner& runner);

/// CSV text with header G,t,sx,px,n_alpha,n_beta.
std::string heatmap_csv(const SweepResult& result);
void heatmap_export(const SweepResult& result, const std::filesystem::path& path);

struct RevivalDiagnostic {
    /// max p_x(t) for t > t_min
    double revival_peak = 0.0;
    /// time of the first envelope maximum after the envelope has dipped; NaN if none
    double first_peak_time = 0.0;
    /// mean upper envelope over the last quarter of the window; NaN if no samples there
    double late_envelope_mean = 0.0;
};

RevivalDiagnostic revival_diagnostic(const minimal::ObservableTrace& trace, double t_min);

/// Header G,revival_peak,first_peak_time; one row per grid point.
std::string diagnostics_csv(const SweepResult& result, double t_min);

}  // namespace spinmetric::sweep
