#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace spinmetric::lattice {

using cplx = std::complex<double>;
using Momentum = Eigen::Vector2d;

/// Tunnelling amplitudes of one brick-wall unit cell. The background fields are
/// c-number stand-ins for (alpha~ + alpha~^dag) and (beta~ + beta~^dag).
struct LatticeCouplings {
    cplx Jx{1.0, 0.0};
    cplx Jy{1.0, 0.0};
    cplx Jz{1.4142135623730951, 0.0};
    double G = 0.0;
    double alpha_c = 0.0;
    double beta_c = 0.0;

    /// Jx = Jy = Jz/sqrt2 = 1 + i sqrt(2 pi G) alpha_c - sqrt(2 pi G) beta_c
    static LatticeCouplings from_background(double G, double alpha_c, double beta_c);
    static LatticeCouplings free() { return from_background(0.0, 0.0, 0.0); }

    LatticeCouplings scaled(double factor) const;
};

struct LatticeGeometry {
    static Momentum n1();
    static Momentum n2();
};

enum class FermiPoint { plus, minus };

/// P_+- = -+(pi / (2 sqrt2), sqrt2 pi)
Momentum fermi_point(FermiPoint which);

/// f(k) = Jz + Jx e^{-i k.n1} + Jy e^{-i k.n2}, the amplitude of a_k^dag b_k.
cplx offdiagonal(const Momentum& k, const LatticeCouplings& c);

/// 2x2 Bloch matrix in the (a, b) basis: zero diagonal, (a,b) entry f, (b,a) entry f*.
Eigen::Matrix2cd bloch_hamiltonian(const Momentum& k, const LatticeCouplings& c);

struct BandPoint {
    double kx = 0.0;
    double ky = 0.0;
    double e_minus = 0.0;
    double e_plus = 0.0;
};

struct KGrid {
    std::vector<double> kx;
    std::vector<double> ky;

    /// `points` evenly spaced values in [-extent, extent] per axis; points >= 2.
    static KGrid square(int points, double extent);
};

/// Bands +-|f(k)| in row-major grid order (kx outer, ky inner).
std::vector<BandPoint> dispersion(const KGrid& grid, const LatticeCouplings& c);

struct FermiResidual {
    double plus = 0.0;
    double minus = 0.0;
};

FermiResidual fermi_point_residual(const LatticeCouplings& c);

/// Newton iteration on Re f = Im f = 0 starting from `start`.
Momentum locate_dirac_point(const LatticeCouplings& c, const Momentum& start);

/// Coefficients of h_+-(q) = -+A sx qx -+ C sx qy - B sy qy - D sy qx.
struct DiracCoefficients {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double D = 0.0;
};

/// Central differences of the Bloch matrix at the Fermi point (step 1e-5, Richardson
/// refined), projected on sx and sy. Throws ExtractionInvalid if f does not vanish at
/// the Fermi point or the linear term is degenerate.
DiracCoefficients low_energy_coefficients(const LatticeCouplings& c, FermiPoint which);

}  // namespace spinmetric::lattice
