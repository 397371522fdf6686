#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "spinmetric/operator_core.hpp"

namespace spinmetric::minimal {

/// Simulation inputs. Defaults follow the weak-coupling runs: mu = 1, N = 14.
struct ModelParams {
    double G = 0.05;
    double mu = 1.0;
    int cutoff = 14;
    double t_max = 100.0;
    double dt = 0.02;

    /// Throws DomainError / InvalidCutoff on G < 0, mu <= 0, N < 2, dt <= 0, t_max < dt.
    void validate() const;
    /// t_k = k * dt for k = 0 .. floor(t_max/dt + 1e-9).
    std::vector<double> time_grid() const;
};

/// g = -sqrt(2G) / (sqrt(pi) mu^{3/2})
double coupling_strength(double G, double mu);

enum class Sign { plus, minus };

/// Eigendecomposition of a Hermitian matrix, H = V diag(E) V^dagger.
struct Spectrum {
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
};

/// Diagonal block of H in the eigenbasis of S = sx (x) (-1)^{n_alpha}. For parity = +-1 the
/// sector basis vector (n_a, n_b) is |e x>|n_a n_b> with e = parity (-1)^{n_a}, ordered
/// n_a * N_b + n_b. parity = 0 is the whole space in the computational basis.
struct SymmetrySector {
    int parity = 0;
    Eigen::VectorXd energies;
    Eigen::MatrixXcd vectors;
};

/// H = sqrt2 sx + sqrt2 (n_a + n_b) + g [ (b + b^dag) sx + (a + a^dag) sy ]
/// on spin (x) alpha (x) beta. The spectrum is computed on first use and shared,
/// immutable, between copies.
class MinimalHamiltonian {
public:
    MinimalHamiltonian(ModelParams params, double g, OperatorMatrix matrix);

    const ModelParams& params() const { return params_; }
    double coupling() const { return g_; }
    const OperatorMatrix& matrix() const { return matrix_; }
    const SpaceSpec& space() const { return matrix_.space; }
    /// Full-space eigendecomposition, energies ascending.
    const Spectrum& spectrum() const;
    /// The two S-parity blocks, or a single full-space block if H does not commute with S.
    const std::vector<SymmetrySector>& sectors() const;

private:
    struct Cache;
    ModelParams params_;
    double g_;
    OperatorMatrix matrix_;
    std::shared_ptr<Cache> cache_;
};

/// `coupling_override` replaces g (e.g. g = 0 at nonzero G for the frozen-dynamics check).
MinimalHamiltonian build_minimal_hamiltonian(const ModelParams& params,
                                             std::optional<double> coupling_override = {});

/// Spin along +/- `direction`, both modes in the Fock vacuum.
StateVector initial_state(Axis direction, Sign sign, const SpaceSpec& space);

/// e^{-iHt} psi0 at each requested time via the cached eigendecomposition.
/// Times must be sorted and non-negative; t = 0 returns psi0 unchanged.
std::vector<StateVector> evolve(const MinimalHamiltonian& h, const StateVector& psi0,
                                const std::vector<double>& times);

struct ObservableTrace {
    std::vector<double> times;
    std::vector<double> sx, sy, sz;
    std::vector<double> n_alpha, n_beta;
    std::vector<double> energy;
    std::vector<double> norm;
    /// Filled only when metric reconstruction is requested.
    std::vector<double> h11, h12;

    std::size_t size() const { return times.size(); }
    static double population(double spin_expectation) { return 0.5 * (1.0 + spin_expectation); }

    /// Norm within 1e-10 of one and energy within 1e-8 (1 + |E(0)|) of E(0) at every sample;
    /// throws NumericalError otherwise.
    void check_invariants() const;
};

ObservableTrace observable_trace(const MinimalHamiltonian& h, const StateVector& psi0,
                                 const ModelParams& params, bool include_metric = false);

/// max |[H, S]| for S = sx (x) (-1)^{n_alpha} (x) 1.
double symmetry_check(const MinimalHamiltonian& h);
/// max |[H, S]| for an arbitrary probe on the same space.
double symmetry_residual(const MinimalHamiltonian& h, const OperatorMatrix& probe);

struct ConvergenceStep {
    int from_cutoff = 0;
    int to_cutoff = 0;
    /// max over the time grid and over sx, sy, sz, n_alpha, n_beta.
    double max_deviation = 0.0;
};

std::vector<ConvergenceStep> truncation_convergence(const ModelParams& params, Axis direction,
                                                    Sign sign, const std::vector<int>& cutoffs);

}  // namespace spinmetric::minimal
