#include "spinmetric/lattice_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "spinmetric/errors.hpp"

namespace spinmetric::lattice {

namespace {

constexpr double kStep = 1e-5;
constexpr double kFermiTolerance = 1e-8;

double coupling_scale(const LatticeCouplings& c) {
    return std::max({std::abs(c.Jx), std::abs(c.Jy), std::abs(c.Jz), 1e-300});
}

// dH/dk_axis by central differences with one Richardson step.
Eigen::Matrix2cd bloch_derivative(const Momentum& k, const LatticeCouplings& c, int axis) {
    auto central = [&](double h) {
        Momentum dk = Momentum::Zero();
        dk(axis) = h;
        return Eigen::Matrix2cd((bloch_hamiltonian(k + dk, c) - bloch_hamiltonian(k - dk, c)) /
                                (2.0 * h));
    };
    return (4.0 * central(0.5 * kStep) - central(kStep)) / 3.0;
}

// Components of a traceless Hermitian 2x2 matrix along sx and sy.
double along_x(const Eigen::Matrix2cd& m) { return 0.5 * (m(0, 1) + m(1, 0)).real(); }
double along_y(const Eigen::Matrix2cd& m) { return 0.5 * (cplx{0.0, 1.0} * (m(0, 1) - m(1, 0))).real(); }

}  // namespace

LatticeCouplings LatticeCouplings::from_background(double G, double alpha_c, double beta_c) {
    if (!(G >= 0.0)) throw DomainError("G must be >= 0, got " + std::to_string(G));
    const double eps = std::sqrt(2.0 * std::numbers::pi * G);
    LatticeCouplings c;
    c.G = G;
    c.alpha_c = alpha_c;
    c.beta_c = beta_c;
    c.Jx = cplx{1.0 - eps * beta_c, eps * alpha_c};
    c.Jy = c.Jx;
    c.Jz = std::numbers::sqrt2 * c.Jx;
    return c;
}

LatticeCouplings LatticeCouplings::scaled(double factor) const {
    LatticeCouplings c = *this;
    c.Jx *= factor;
    c.Jy *= factor;
    c.Jz *= factor;
    return c;
}

Momentum LatticeGeometry::n1() { return {-1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2}; }
Momentum LatticeGeometry::n2() { return {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2}; }

Momentum fermi_point(FermiPoint which) {
    const double s = (which == FermiPoint::plus) ? -1.0 : 1.0;
    return {s * std::numbers::pi / (2.0 * std::numbers::sqrt2), s * std::numbers::sqrt2 * std::numbers::pi};
}

cplx offdiagonal(const Momentum& k, const LatticeCouplings& c) {
    const double phase1 = k.dot(LatticeGeometry::n1());
    const double phase2 = k.dot(LatticeGeometry::n2());
    return c.Jz + c.Jx * std::polar(1.0, -phase1) + c.Jy * std::polar(1.0, -phase2);
}

Eigen::Matrix2cd bloch_hamiltonian(const Momentum& k, const LatticeCouplings& c) {
    const cplx f = offdiagonal(k, c);
    Eigen::Matrix2cd h;
    h << 0.0, f, std::conj(f), 0.0;
    return h;
}

KGrid KGrid::square(int points, double extent) {
    if (points < 2) {
        throw DomainError("k grid needs at least 2 points per axis, got " + std::to_string(points));
    }
    if (!(extent > 0.0)) throw DomainError("k grid extent must be positive");
    KGrid grid;
    grid.kx.resize(points);
    for (int i = 0; i < points; ++i) {
        grid.kx[i] = -extent + 2.0 * extent * i / (points - 1);
    }
    grid.ky = grid.kx;
    return grid;
}

std::vector<BandPoint> dispersion(const KGrid& grid, const LatticeCouplings& c) {
    std::vector<BandPoint> bands;
    bands.reserve(grid.kx.size() * grid.ky.size());
    for (double kx : grid.kx) {
        for (double ky : grid.ky) {
            const double e = std::abs(offdiagonal({kx, ky}, c));
            bands.push_back({kx, ky, -e, e});
        }
    }
    return bands;
}

FermiResidual fermi_point_residual(const LatticeCouplings& c) {
    return {std::abs(offdiagonal(fermi_point(FermiPoint::plus), c)),
            std::abs(offdiagonal(fermi_point(FermiPoint::minus), c))};
}

Momentum locate_dirac_point(const LatticeCouplings& c, const Momentum& start) {
    Momentum k = start;
    for (int iter = 0; iter < 100; ++iter) {
        const cplx f = offdiagonal(k, c);
        if (std::abs(f) < 1e-14 * coupling_scale(c)) return k;
        Eigen::Matrix2d jac;
        for (int axis = 0; axis < 2; ++axis) {
            Momentum dk = Momentum::Zero();
            dk(axis) = kStep;
            const cplx df = (offdiagonal(k + dk, c) - offdiagonal(k - dk, c)) / (2.0 * kStep);
            jac(0, axis) = df.real();
            jac(1, axis) = df.imag();
        }
        const Eigen::Vector2d rhs(f.real(), f.imag());
        const Eigen::Vector2d step = jac.fullPivLu().solve(rhs);
        if (!step.allFinite()) throw ExtractionInvalid("Dirac point search hit a singular Jacobian");
        k -= step;
        if (step.norm() < 1e-15) break;
    }
    if (std::abs(offdiagonal(k, c)) > kFermiTolerance * coupling_scale(c)) {
        throw ExtractionInvalid("Dirac point search did not converge");
    }
    return k;
}

DiracCoefficients low_energy_coefficients(const LatticeCouplings& c, FermiPoint which) {
    const Momentum p = fermi_point(which);
    const double residual = std::abs(offdiagonal(p, c));
    if (residual > kFermiTolerance * coupling_scale(c)) {
        throw ExtractionInvalid("Fermi point displaced: |f(P)| = " + std::to_string(residual));
    }
    const Eigen::Matrix2cd dx = bloch_derivative(p, c, 0);
    const Eigen::Matrix2cd dy = bloch_derivative(p, c, 1);

    // H(P + q) ~ sx (X_x qx + X_y qy) + sy (Y_x qx + Y_y qy)
    const double xx = along_x(dx), xy = along_x(dy);
    const double yx = along_y(dx), yy = along_y(dy);
    if (std::abs(xx * yy - xy * yx) <= 1e-12 * coupling_scale(c) * coupling_scale(c)) {
        throw ExtractionInvalid("linear term at the Fermi point is degenerate");
    }
    const double s = (which == FermiPoint::plus) ? 1.0 : -1.0;
    return {-s * xx, -yy, -s * xy, -yx};
}

}  // namespace spinmetric::lattice
