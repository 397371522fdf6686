#pragma once

#include "spinmetric/operator_core.hpp"

namespace spinmetric::gravity {

/// Squeezing that diagonalizes the quadratic metric-fluctuation Hamiltonian:
/// alpha_tilde = alpha cosh r - alpha^dagger sinh r.
struct BogoliubovParams {
    double mu = 0.0;
    double r = 0.0;
    double cosh2r = 1.0;
    double sinh2r = 0.0;
};

/// cosh 2r = mu/4 + 1/mu, sinh 2r = mu/4 - 1/mu, r = asinh(sinh 2r) / 2.
BogoliubovParams bogoliubov_params(double mu);

/// Per-site H = (mu^2/2)(a + a^dag)^2 - 2(a - a^dag)^2
///            = c1 (a^2 + a^dag^2) + c2 (2 a^dag a + 1)
/// on a truncated Fock mode, with c1 = mu^2/2 - 2 and c2 = mu^2/2 + 2.
/// The 2a^dag a + 1 term is taken literally, so the top level has no truncation artifact.
struct QuadraticModeHamiltonian {
    double mu = 0.0;
    double c1 = 0.0;
    double c2 = 0.0;
    OperatorMatrix matrix;
};

QuadraticModeHamiltonian quadratic_site_hamiltonian(double mu, int cutoff);

struct SpacingReport {
    int levels = 0;
    double mean_gap = 0.0;
    /// max |gap_i - mean_gap|
    double max_deviation = 0.0;
    /// variance(gap) / mean_gap^2
    double relative_variance = 0.0;
};

/// Nearest-neighbour gaps among the lowest `levels` eigenvalues. Requires
/// 2 <= levels <= N/3 so the top of the truncated spectrum is never sampled.
SpacingReport spectrum_spacing(const QuadraticModeHamiltonian& h, int levels);

/// Radius of the momentum circle where the mode energy matches the fermion splitting:
/// k_R = 1 / (sqrt(2) pi mu).
double resonant_momentum(double mu);

/// Truncated squeeze operator exp(r/2 (a^2 - a^dag^2)), built by diagonalizing the
/// Hermitian generator. On low levels it maps a to a cosh r - a^dag sinh r.
Eigen::MatrixXcd squeeze_transform(double r, int cutoff);

struct MetricExpectations {
    double h11 = 0.0;
    double h12 = 0.0;
};

/// h11 = <alpha_tilde + alpha_tilde^dag>/sqrt(2), h12 likewise for beta, with the
/// tilde modes reconstructed from the eigenmodes of the minimal model.
MetricExpectations metric_expectations(const StateVector& psi, const BogoliubovParams& params);

}  // namespace spinmetric::gravity
