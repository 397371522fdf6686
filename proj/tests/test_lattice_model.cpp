#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "spinmetric/errors.hpp"
#include "spinmetric/lattice_model.hpp"

using namespace spinmetric;
using namespace spinmetric::lattice;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// Closed-form gradient of f(k) = Jz + Jx e^{-ik.n1} + Jy e^{-ik.n2}.
std::pair<cplx, cplx> analytic_gradient(const Momentum& k, const LatticeCouplings& c) {
    const Momentum n1 = LatticeGeometry::n1();
    const Momentum n2 = LatticeGeometry::n2();
    const cplx t1 = -cplx{0.0, 1.0} * c.Jx * std::polar(1.0, -k.dot(n1));
    const cplx t2 = -cplx{0.0, 1.0} * c.Jy * std::polar(1.0, -k.dot(n2));
    return {t1 * n1.x() + t2 * n2.x(), t1 * n1.y() + t2 * n2.y()};
}

// h = sx Re f - sy Im f, matched to -+A sx qx -+ C sx qy - B sy qy - D sy qx.
DiracCoefficients oracle_coefficients(const LatticeCouplings& c, FermiPoint which) {
    const auto [dfx, dfy] = analytic_gradient(fermi_point(which), c);
    const double s = which == FermiPoint::plus ? 1.0 : -1.0;
    return {-s * dfx.real(), dfy.imag(), -s * dfy.real(), dfx.imag()};
}

}  // namespace

TEST_CASE("geometry") {
    const Momentum n1 = LatticeGeometry::n1();
    const Momentum n2 = LatticeGeometry::n2();
    CHECK(n1.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(n2.norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(n1.dot(n2) == 0.0);
}

TEST_CASE("couplings from a classical background") {
    const auto free = LatticeCouplings::free();
    CHECK(free.Jx == cplx{1.0});
    CHECK(free.Jy == cplx{1.0});
    CHECK(free.Jz == cplx{kSqrt2});

    const auto c = LatticeCouplings::from_background(0.01, 0.3, -0.7);
    const double eps = std::sqrt(2.0 * kPi * 0.01);
    CHECK(c.Jx == c.Jy);
    CHECK(std::abs(c.Jz / kSqrt2 - c.Jx) < 1e-15);
    CHECK(c.Jx.real() == doctest::Approx(1.0 + 0.7 * eps));
    CHECK(c.Jx.imag() == doctest::Approx(0.3 * eps));
    CHECK_THROWS_AS(LatticeCouplings::from_background(-1.0, 0, 0), DomainError);
}

TEST_CASE("bloch hamiltonian at reference momenta") {
    const auto free = LatticeCouplings::free();
    const Eigen::Matrix2cd h0 = bloch_hamiltonian({0.0, 0.0}, free);
    CHECK(h0(0, 0) == cplx{});
    CHECK(h0(0, 1).real() == doctest::Approx(kSqrt2 + 2.0));
    CHECK(std::abs(h0(1, 0) - std::conj(h0(0, 1))) == 0.0);

    const Momentum pp = fermi_point(FermiPoint::plus);
    CHECK(pp.x() == doctest::Approx(-kPi / (2.0 * kSqrt2)));
    CHECK(pp.y() == doctest::Approx(-kSqrt2 * kPi));
    CHECK(pp.dot(LatticeGeometry::n1()) == doctest::Approx(-3.0 * kPi / 4.0));
    CHECK(pp.dot(LatticeGeometry::n2()) == doctest::Approx(-5.0 * kPi / 4.0));
    CHECK(std::abs(offdiagonal(pp, free)) <= 1e-12);
    CHECK(std::abs(offdiagonal(fermi_point(FermiPoint::minus), free)) <= 1e-12);
    CHECK(std::abs(offdiagonal(pp, free) - std::conj(offdiagonal(-pp, free))) <= 1e-12);
}

TEST_CASE("chiral symmetry and particle-hole symmetric bands") {
    const Eigen::Matrix2cd sz = Eigen::Vector2cd(1.0, -1.0).asDiagonal();
    for (const auto& c : {LatticeCouplings::free(), LatticeCouplings::from_background(0.3, 1.2, -0.4),
                          LatticeCouplings::from_background(5.0, -0.2, 0.9)}) {
        for (double kx : {-2.0, 0.1, 1.7}) {
            for (double ky : {-4.0, 0.0, 3.3}) {
                const Eigen::Matrix2cd h = bloch_hamiltonian({kx, ky}, c);
                CHECK((sz * h * sz + h).cwiseAbs().maxCoeff() == 0.0);
            }
        }
        for (const auto& b : dispersion(KGrid::square(9, 2.0 * kPi), c)) {
            CHECK(b.e_plus == -b.e_minus);
            CHECK(b.e_plus >= 0.0);
        }
    }
}

TEST_CASE("dispersion grid and minimum at the Fermi points") {
    const auto grid = KGrid::square(5, 1.0);
    CHECK(grid.kx.front() == -1.0);
    CHECK(grid.kx.back() == 1.0);
    CHECK(dispersion(grid, LatticeCouplings::free()).size() == 25);
    CHECK_THROWS_AS(KGrid::square(1, 1.0), DomainError);

    // The free band gap closes only at P+- within the sampled window.
    const auto bands = dispersion(KGrid::square(201, 2.0 * kPi), LatticeCouplings::free());
    double min_gap = 1e300;
    for (const auto& b : bands) min_gap = std::min(min_gap, b.e_plus);
    CHECK(min_gap >= 0.0);
    CHECK(min_gap < 0.2);
}

TEST_CASE("fermi point residual") {
    const auto free = fermi_point_residual(LatticeCouplings::free());
    CHECK(free.plus <= 1e-12);
    CHECK(free.minus <= 1e-12);

    // Jz = sqrt2 Jx holds for every uniform background, so the zeros stay put.
    const auto bg = fermi_point_residual(LatticeCouplings::from_background(0.01, 0.0, 1.0));
    CHECK(bg.plus <= 1e-12);
    CHECK(bg.minus <= 1e-12);

    // Residual is linear in the couplings.
    LatticeCouplings skew = LatticeCouplings::free();
    skew.Jz = 1.2;
    const auto base = fermi_point_residual(skew);
    const auto scaled = fermi_point_residual(skew.scaled(3.5));
    CHECK(base.plus > 0.1);
    CHECK(scaled.plus == doctest::Approx(3.5 * base.plus).epsilon(1e-13));
    CHECK(scaled.minus == doctest::Approx(3.5 * base.minus).epsilon(1e-13));
}

TEST_CASE("dirac point location") {
    const auto bg = LatticeCouplings::from_background(0.01, 0.4, 1.0);
    const Momentum start = fermi_point(FermiPoint::plus) + Momentum(0.05, -0.03);
    const Momentum found = locate_dirac_point(bg, start);
    CHECK((found - fermi_point(FermiPoint::plus)).norm() < 1e-9);

    // Unequal couplings move the Dirac point; Newton follows it.
    LatticeCouplings skew = LatticeCouplings::free();
    skew.Jz = 1.3;
    const Momentum moved = locate_dirac_point(skew, fermi_point(FermiPoint::plus));
    CHECK(std::abs(offdiagonal(moved, skew)) < 1e-12);
    CHECK((moved - fermi_point(FermiPoint::plus)).norm() > 1e-3);
}

TEST_CASE("low-energy coefficients of the free lattice") {
    for (FermiPoint which : {FermiPoint::plus, FermiPoint::minus}) {
        const auto c = low_energy_coefficients(LatticeCouplings::free(), which);
        CHECK(c.A == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(c.B == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(c.C) < 1e-9);
        CHECK(std::abs(c.D) < 1e-9);
    }
}

TEST_CASE("finite-difference extraction agrees with the analytic gradient") {
    for (const auto& bg : {LatticeCouplings::from_background(0.01, 1.0, 0.0),
                           LatticeCouplings::from_background(0.01, 0.0, 1.0),
                           LatticeCouplings::from_background(0.2, -0.6, 0.35)}) {
        for (FermiPoint which : {FermiPoint::plus, FermiPoint::minus}) {
            const auto fd = low_energy_coefficients(bg, which);
            const auto exact = oracle_coefficients(bg, which);
            CHECK(std::abs(fd.A - exact.A) < 1e-8);
            CHECK(std::abs(fd.B - exact.B) < 1e-8);
            CHECK(std::abs(fd.C - exact.C) < 1e-8);
            CHECK(std::abs(fd.D - exact.D) < 1e-8);
        }
    }
}

TEST_CASE("uniform backgrounds rescale and rotate the Dirac cone") {
    // J = 1 - eps beta + i eps alpha multiplies the whole linear term, so
    // A = B = Re J and C = -D = Im J at P+.
    const double eps = std::sqrt(2.0 * kPi * 0.01);
    const auto a = low_energy_coefficients(LatticeCouplings::from_background(0.01, 1.0, 0.0),
                                           FermiPoint::plus);
    CHECK(a.A == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.B == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(a.C == doctest::Approx(eps).epsilon(1e-9));
    CHECK(a.D == doctest::Approx(-eps).epsilon(1e-9));

    const auto b = low_energy_coefficients(LatticeCouplings::from_background(0.01, 0.0, 1.0),
                                           FermiPoint::plus);
    CHECK(b.A == doctest::Approx(1.0 - eps).epsilon(1e-9));
    CHECK(b.B == doctest::Approx(1.0 - eps).epsilon(1e-9));
    CHECK(std::abs(b.C) < 1e-9);
    CHECK(std::abs(b.D) < 1e-9);
}

TEST_CASE("linear dispersion near the Fermi points") {
    const auto c = LatticeCouplings::from_background(0.05, 0.3, -0.2);
    for (FermiPoint which : {FermiPoint::plus, FermiPoint::minus}) {
        for (double angle : {0.0, 0.7, 2.1}) {
            const Momentum dir(std::cos(angle), std::sin(angle));
            const double ref = std::abs(offdiagonal(fermi_point(which) + 1e-4 * dir, c)) / 1e-4;
            for (double q : {1e-4, 1e-3, 1e-2}) {
                const double ratio = std::abs(offdiagonal(fermi_point(which) + q * dir, c)) / q;
                CHECK(std::abs(ratio / ref - 1.0) < 0.01);
            }
        }
    }
}

TEST_CASE("extraction rejects displaced or degenerate Fermi points") {
    LatticeCouplings skew = LatticeCouplings::free();
    skew.Jz = 1.0;
    CHECK_THROWS_AS(low_energy_coefficients(skew, FermiPoint::plus), ExtractionInvalid);

    // eps * beta = 1 switches every bond off.
    const double G = 1.0 / (2.0 * kPi);
    CHECK_THROWS_AS(low_energy_coefficients(LatticeCouplings::from_background(G, 0.0, 1.0),
                                            FermiPoint::plus),
                    ExtractionInvalid);
}
