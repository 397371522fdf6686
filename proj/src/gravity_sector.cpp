#include "spinmetric/gravity_sector.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinmetric/errors.hpp"

namespace spinmetric::gravity {

namespace {

void require_positive_mu(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw DomainError("mass parameter mu must be positive, got " + std::to_string(mu));
    }
}

}  // namespace

BogoliubovParams bogoliubov_params(double mu) {
    require_positive_mu(mu);
    BogoliubovParams p;
    p.mu = mu;
    p.cosh2r = mu / 4.0 + 1.0 / mu;
    p.sinh2r = mu / 4.0 - 1.0 / mu;
    p.r = 0.5 * std::asinh(p.sinh2r);
    return p;
}

QuadraticModeHamiltonian quadratic_site_hamiltonian(double mu, int cutoff) {
    require_positive_mu(mu);
    if (cutoff < 4) {
        throw InvalidCutoff("quadratic site Hamiltonian needs N >= 4, got " +
                            std::to_string(cutoff));
    }
    QuadraticModeHamiltonian h;
    h.mu = mu;
    h.c1 = mu * mu / 2.0 - 2.0;
    h.c2 = mu * mu / 2.0 + 2.0;

    const Eigen::MatrixXcd a = annihilation_matrix(cutoff).entries;
    const Eigen::MatrixXcd ad = a.adjoint();
    const Eigen::MatrixXcd n = number_matrix(cutoff).entries;
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(cutoff, cutoff);
    Eigen::MatrixXcd m = h.c1 * (a * a + ad * ad) + h.c2 * (2.0 * n + id);
    h.matrix = OperatorMatrix(SpaceSpec::mode(cutoff), std::move(m), true);
    return h;
}

SpacingReport spectrum_spacing(const QuadraticModeHamiltonian& h, int levels) {
    const int cutoff = static_cast<int>(h.matrix.dimension());
    if (levels < 2 || 3 * levels > cutoff) {
        throw DomainError("levels must satisfy 2 <= levels <= N/3 (N = " +
                          std::to_string(cutoff) + ", levels = " + std::to_string(levels) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix.entries,
                                                           Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver did not converge for quadratic site Hamiltonian");
    }
    const Eigen::VectorXd& ev = solver.eigenvalues();

    Eigen::VectorXd gaps(levels - 1);
    for (int i = 0; i + 1 < levels; ++i) gaps(i) = ev(i + 1) - ev(i);

    SpacingReport report;
    report.levels = levels;
    report.mean_gap = gaps.mean();
    report.max_deviation = (gaps.array() - report.mean_gap).abs().maxCoeff();
    const double var = (gaps.array() - report.mean_gap).square().mean();
    report.relative_variance = var / (report.mean_gap * report.mean_gap);
    return report;
}

double resonant_momentum(double mu) {
    require_positive_mu(mu);
    return 1.0 / (std::numbers::sqrt2 * std::numbers::pi * mu);
}

Eigen::MatrixXcd squeeze_transform(double r, int cutoff) {
    const Eigen::MatrixXcd a = annihilation_matrix(cutoff).entries;
    const Eigen::MatrixXcd ad = a.adjoint();
    // K = r/2 (a^2 - a^dag^2) is anti-Hermitian; iK is Hermitian with real spectrum.
    const Eigen::MatrixXcd generator = cplx{0.0, 1.0} * (0.5 * r) * (a * a - ad * ad);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(generator);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver did not converge for squeeze generator");
    }
    const Eigen::VectorXcd phases =
        (-cplx{0.0, 1.0} * solver.eigenvalues().cast<cplx>()).array().exp();
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

MetricExpectations metric_expectations(const StateVector& psi, const BogoliubovParams& params) {
    const SpaceSpec& space = psi.space();
    if (space.spin_dim != 2 || space.fock_cutoffs.size() != 2) {
        throw ShapeError("metric expectations need the spin (x) alpha (x) beta space");
    }
    const double ch = std::cosh(params.r);
    const double sh = std::sinh(params.r);
    auto field = [&](Slot slot) {
        const int cutoff = space.slot_dim(slot);
        const Eigen::MatrixXcd a = annihilation_matrix(cutoff).entries;
        const Eigen::MatrixXcd tilde = ch * a - sh * a.adjoint();
        OperatorMatrix local(SpaceSpec::mode(cutoff), tilde + tilde.adjoint(), true);
        return expectation(tensor_embed(local, slot, space), psi).real() / std::numbers::sqrt2;
    };
    return {field(Slot::alpha), field(Slot::beta)};
}

}  // namespace spinmetric::gravity
