#include "doctest.h"

#include <cmath>

#include "spinmetric/errors.hpp"
#include "spinmetric/operator_core.hpp"

using namespace spinmetric;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_CASE("annihilation matrix ladder entries") {
    const auto a1 = annihilation_matrix(1);
    CHECK(a1.dimension() == 1);
    CHECK(a1.entries(0, 0) == cplx{});

    const auto a3 = annihilation_matrix(3);
    CHECK(a3.entries(0, 1) == cplx{1.0});
    CHECK(a3.entries(1, 2) == cplx{std::sqrt(2.0)});
    CHECK(std::abs(a3.entries.sum() - cplx{1.0 + std::sqrt(2.0)}) < 1e-15);

    CHECK_THROWS_AS(annihilation_matrix(0), InvalidCutoff);
    CHECK_THROWS_AS(number_matrix(0), InvalidCutoff);
}

TEST_CASE("truncated commutator deviates only in the top corner") {
    const int n = 14;
    const Eigen::MatrixXcd a = annihilation_matrix(n).entries;
    const Eigen::MatrixXcd comm = a * a.adjoint() - a.adjoint() * a;
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(n, n);
    expected(n - 1, n - 1) = -(n - 1);
    CHECK(max_abs(comm - expected) < 1e-13);
}

TEST_CASE("number matrix equals a^dagger a") {
    const auto n2 = number_matrix(2);
    CHECK(n2.entries(0, 0) == cplx{0.0});
    CHECK(n2.entries(1, 1) == cplx{1.0});
    CHECK(number_matrix(14).entries.trace().real() == 91.0);
    for (int n = 1; n <= 20; ++n) {
        const Eigen::MatrixXcd a = annihilation_matrix(n).entries;
        CHECK(max_abs(number_matrix(n).entries - a.adjoint() * a) < 1e-14 * n);
    }
}

TEST_CASE("ladder algebra on interior levels") {
    const int n = 12;
    const Eigen::MatrixXcd ad = creation_matrix(n).entries;
    const Eigen::MatrixXcd num = number_matrix(n).entries;
    for (int k = 0; k + 1 < n; ++k) {
        Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(n);
        ket(k) = 1.0;
        const Eigen::VectorXcd raised = ad * ket;
        CHECK(std::abs(raised(k + 1) - std::sqrt(double(k + 1))) < 1e-14);
        CHECK((num * ket - double(k) * ket).norm() < 1e-14);
    }
}

TEST_CASE("creation matrix is the exact adjoint") {
    const auto a = annihilation_matrix(9);
    const auto ad = creation_matrix(9);
    CHECK(ad.entries == Eigen::MatrixXcd(a.entries.adjoint()));
}

TEST_CASE("pauli algebra") {
    const auto sx = pauli_matrix(Axis::x).entries;
    const auto sy = pauli_matrix(Axis::y).entries;
    const auto sz = pauli_matrix(Axis::z).entries;
    CHECK(sx(0, 1) == cplx{1.0});
    CHECK(sx(1, 0) == cplx{1.0});
    CHECK(sx(0, 0) == cplx{0.0});
    CHECK(max_abs(sx * sx - Eigen::Matrix2cd::Identity()) == 0.0);
    CHECK(max_abs(sx * sy - sy * sx - cplx{0.0, 2.0} * sz) == 0.0);
}

TEST_CASE("tensor embedding respects spin-alpha-beta ordering") {
    const auto space = SpaceSpec::spin_modes(3, 3);
    const auto id = tensor_embed(identity_matrix(SpaceSpec::spin()), Slot::spin, space);
    CHECK(id.dimension() == 18);
    CHECK(max_abs(id.entries - Eigen::MatrixXcd::Identity(18, 18)) == 0.0);

    const auto small = SpaceSpec::spin_modes(2, 2);
    const auto sz = tensor_embed(pauli_matrix(Axis::z), Slot::spin, small);
    const double expected[] = {1, 1, 1, 1, -1, -1, -1, -1};
    for (int i = 0; i < 8; ++i) CHECK(sz.entries(i, i) == cplx{expected[i]});
    CHECK(max_abs(sz.entries - Eigen::MatrixXcd(sz.entries.diagonal().asDiagonal())) == 0.0);

    CHECK_THROWS_AS(tensor_embed(number_matrix(4), Slot::alpha, space), ShapeError);
    CHECK_THROWS_AS(tensor_embed(number_matrix(3), Slot::spin, space), ShapeError);
}

TEST_CASE("embedded number operators commute and embedding is a homomorphism") {
    const auto space = SpaceSpec::spin_modes(4, 5);
    const auto na = tensor_embed(number_matrix(4), Slot::alpha, space);
    const auto nb = tensor_embed(number_matrix(5), Slot::beta, space);
    CHECK(max_abs(commutator(na, nb).entries) == 0.0);

    for (Slot slot : {Slot::alpha, Slot::beta}) {
        const int n = space.slot_dim(slot);
        const auto a = annihilation_matrix(n);
        const auto ad = creation_matrix(n);
        const auto lhs = tensor_embed(a * ad, slot, space);
        const auto rhs = tensor_embed(a, slot, space) * tensor_embed(ad, slot, space);
        CHECK(max_abs(lhs.entries - rhs.entries) < 1e-13);
    }
}

TEST_CASE("basis index is row-major in (s, n_alpha, n_beta)") {
    const auto space = SpaceSpec::spin_modes(3, 4);
    CHECK(space.dimension() == 24);
    CHECK(space.basis_index(0, 0, 0) == 0);
    CHECK(space.basis_index(0, 1, 0) == 4);
    CHECK(space.basis_index(1, 2, 3) == 12 + 8 + 3);
    CHECK(SpaceSpec::spin_modes(14).dimension() == 392);
    CHECK_THROWS_AS(space.basis_index(2, 0, 0), ShapeError);
}

TEST_CASE("expectation values") {
    const auto space = SpaceSpec::spin_modes(3, 3);
    Eigen::VectorXcd up = Eigen::VectorXcd::Zero(space.dimension());
    up(space.basis_index(0, 0, 0)) = 1.0;
    const StateVector psi_up(space, up);
    CHECK(expectation(tensor_embed(pauli_matrix(Axis::z), Slot::spin, space), psi_up).real() == 1.0);
    CHECK(expectation(tensor_embed(number_matrix(3), Slot::alpha, space), psi_up).real() == 0.0);

    Eigen::VectorXcd plus = Eigen::VectorXcd::Zero(space.dimension());
    plus(space.basis_index(0, 0, 0)) = 1.0 / std::sqrt(2.0);
    plus(space.basis_index(1, 0, 0)) = 1.0 / std::sqrt(2.0);
    const StateVector psi_plus(space, plus);
    CHECK(expectation(tensor_embed(pauli_matrix(Axis::x), Slot::spin, space), psi_plus).real() ==
          doctest::Approx(1.0).epsilon(1e-15));

    // Non-Hermitian operators keep their imaginary part.
    const auto a = tensor_embed(annihilation_matrix(3), Slot::alpha, space);
    CHECK(expectation(a, psi_up) == cplx{});

    const auto mismatched = tensor_embed(number_matrix(2), Slot::alpha, SpaceSpec::spin_modes(2, 2));
    CHECK_THROWS_AS(expectation(mismatched, psi_up), ShapeError);
}

TEST_CASE("hermitian guard on expectation") {
    // Build an operator that claims Hermiticity after the fact; the guard catches the imaginary part.
    const auto space = SpaceSpec::spin();
    OperatorMatrix op(space, Eigen::Matrix2cd::Zero());
    op.entries(0, 1) = cplx{0.0, 1.0};
    op.hermitian_hint = true;
    Eigen::VectorXcd v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    CHECK_THROWS_AS(expectation(op, StateVector(space, v)), NumericalError);
    CHECK_THROWS_AS(OperatorMatrix(space, op.entries, true), NumericalError);
}

TEST_CASE("state vectors must be normalized") {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2);
    v(0) = 1.0 + 1e-8;
    CHECK_THROWS_AS(StateVector(SpaceSpec::spin(), v), NumericalError);
    CHECK_THROWS_AS(StateVector(SpaceSpec::spin_modes(2, 2), Eigen::VectorXcd::Ones(3)), ShapeError);
}
