#include "spinmetric/operator_core.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "spinmetric/errors.hpp"

namespace spinmetric {

namespace {

constexpr double kHermitianTolerance = 1e-12;
constexpr double kExpectationImagGuard = 1e-10;

void require_cutoff(int cutoff) {
    if (cutoff < 1) {
        throw InvalidCutoff("Fock cutoff must be >= 1, got " + std::to_string(cutoff));
    }
}

void require_same_space(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    if (!(lhs.space == rhs.space)) {
        throw ShapeError("operators act on different spaces");
    }
}

}  // namespace

SpaceSpec SpaceSpec::spin() { return SpaceSpec{2, {}}; }

SpaceSpec SpaceSpec::mode(int cutoff) {
    require_cutoff(cutoff);
    return SpaceSpec{1, {cutoff}};
}

SpaceSpec SpaceSpec::spin_modes(int n_alpha, int n_beta) {
    require_cutoff(n_alpha);
    require_cutoff(n_beta);
    return SpaceSpec{2, {n_alpha, n_beta}};
}

Index SpaceSpec::dimension() const {
    return std::accumulate(fock_cutoffs.begin(), fock_cutoffs.end(), Index{spin_dim},
                           [](Index acc, int n) { return acc * n; });
}

int SpaceSpec::slot_dim(Slot slot) const {
    switch (slot) {
        case Slot::spin:
            if (spin_dim != 2) throw ShapeError("space has no spin factor");
            return 2;
        case Slot::alpha:
            if (fock_cutoffs.empty()) throw ShapeError("space has no alpha mode");
            return fock_cutoffs[0];
        case Slot::beta:
            if (fock_cutoffs.size() < 2) throw ShapeError("space has no beta mode");
            return fock_cutoffs[1];
    }
    throw ShapeError("unknown slot");
}

Index SpaceSpec::basis_index(int s, int n_alpha, int n_beta) const {
    if (spin_dim != 2 || fock_cutoffs.size() != 2) {
        throw ShapeError("basis_index needs a spin (x) alpha (x) beta space");
    }
    const int na = fock_cutoffs[0];
    const int nb = fock_cutoffs[1];
    if (s < 0 || s > 1 || n_alpha < 0 || n_alpha >= na || n_beta < 0 || n_beta >= nb) {
        throw ShapeError("basis label out of range");
    }
    return Index{s} * na * nb + Index{n_alpha} * nb + n_beta;
}

OperatorMatrix::OperatorMatrix(SpaceSpec sp, Eigen::MatrixXcd m, bool hermitian)
    : space(std::move(sp)), entries(std::move(m)), hermitian_hint(hermitian) {
    const Index dim = space.dimension();
    if (entries.rows() != dim || entries.cols() != dim) {
        throw ShapeError("matrix is " + std::to_string(entries.rows()) + "x" +
                         std::to_string(entries.cols()) + " but space dimension is " +
                         std::to_string(dim));
    }
    if (hermitian_hint && hermiticity_residual() > kHermitianTolerance) {
        throw NumericalError("operator flagged Hermitian has residual " +
                             std::to_string(hermiticity_residual()));
    }
}

OperatorMatrix OperatorMatrix::adjoint() const {
    OperatorMatrix out;
    out.space = space;
    out.entries = entries.adjoint();
    out.hermitian_hint = hermitian_hint;
    return out;
}

double OperatorMatrix::hermiticity_residual() const {
    if (entries.size() == 0) return 0.0;
    return (entries - entries.adjoint()).cwiseAbs().maxCoeff();
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    require_same_space(lhs, rhs);
    return OperatorMatrix(lhs.space, lhs.entries * rhs.entries);
}

OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    require_same_space(lhs, rhs);
    return OperatorMatrix(lhs.space, lhs.entries + rhs.entries);
}

OperatorMatrix operator-(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    require_same_space(lhs, rhs);
    return OperatorMatrix(lhs.space, lhs.entries - rhs.entries);
}

OperatorMatrix operator*(cplx scale, const OperatorMatrix& op) {
    return OperatorMatrix(op.space, scale * op.entries);
}

OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
    require_same_space(lhs, rhs);
    return OperatorMatrix(lhs.space, lhs.entries * rhs.entries - rhs.entries * lhs.entries);
}

StateVector::StateVector(SpaceSpec sp, Eigen::VectorXcd amps)
    : space_(std::move(sp)), amplitudes_(std::move(amps)) {
    if (amplitudes_.size() != space_.dimension()) {
        throw ShapeError("state has " + std::to_string(amplitudes_.size()) +
                         " amplitudes but space dimension is " +
                         std::to_string(space_.dimension()));
    }
    const double drift = std::abs(amplitudes_.squaredNorm() - 1.0);
    if (drift > kNormTolerance) {
        throw NumericalError("state norm deviates from 1 by " + std::to_string(drift));
    }
}

OperatorMatrix annihilation_matrix(int cutoff) {
    require_cutoff(cutoff);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(cutoff, cutoff);
    for (int n = 1; n < cutoff; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return OperatorMatrix(SpaceSpec::mode(cutoff), std::move(a));
}

OperatorMatrix creation_matrix(int cutoff) { return annihilation_matrix(cutoff).adjoint(); }

OperatorMatrix number_matrix(int cutoff) {
    require_cutoff(cutoff);
    Eigen::VectorXcd diag(cutoff);
    for (int n = 0; n < cutoff; ++n) diag(n) = static_cast<double>(n);
    return OperatorMatrix(SpaceSpec::mode(cutoff), diag.asDiagonal().toDenseMatrix(), true);
}

OperatorMatrix parity_matrix(int cutoff) {
    require_cutoff(cutoff);
    Eigen::VectorXcd diag(cutoff);
    for (int n = 0; n < cutoff; ++n) diag(n) = (n % 2 == 0) ? 1.0 : -1.0;
    return OperatorMatrix(SpaceSpec::mode(cutoff), diag.asDiagonal().toDenseMatrix(), true);
}

OperatorMatrix pauli_matrix(Axis axis) {
    const cplx i{0.0, 1.0};
    Eigen::Matrix2cd m;
    switch (axis) {
        case Axis::x: m << 0.0, 1.0, 1.0, 0.0; break;
        case Axis::y: m << 0.0, -i, i, 0.0; break;
        case Axis::z: m << 1.0, 0.0, 0.0, -1.0; break;
    }
    return OperatorMatrix(SpaceSpec::spin(), m, true);
}

OperatorMatrix identity_matrix(const SpaceSpec& space) {
    const Index dim = space.dimension();
    return OperatorMatrix(space, Eigen::MatrixXcd::Identity(dim, dim), true);
}

OperatorMatrix tensor_embed(const OperatorMatrix& op, Slot slot, const SpaceSpec& space) {
    const int local = space.slot_dim(slot);
    if (op.dimension() != local) {
        throw ShapeError("operator of dimension " + std::to_string(op.dimension()) +
                         " cannot occupy a slot of dimension " + std::to_string(local));
    }

    // Factor list in storage order; left/right are the identity blocks around the slot.
    std::vector<Index> factors;
    if (space.spin_dim == 2) factors.push_back(2);
    for (int n : space.fock_cutoffs) factors.push_back(n);
    std::size_t position = 0;
    switch (slot) {
        case Slot::spin: position = 0; break;
        case Slot::alpha: position = space.spin_dim == 2 ? 1 : 0; break;
        case Slot::beta: position = space.spin_dim == 2 ? 2 : 1; break;
    }
    Index left = 1;
    Index right = 1;
    for (std::size_t f = 0; f < factors.size(); ++f) {
        if (f < position) left *= factors[f];
        if (f > position) right *= factors[f];
    }

    const Index dim = space.dimension();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
    for (Index l = 0; l < left; ++l) {
        for (Index i = 0; i < local; ++i) {
            for (Index j = 0; j < local; ++j) {
                const cplx v = op.entries(i, j);
                if (v == cplx{}) continue;
                const Index row0 = (l * local + i) * right;
                const Index col0 = (l * local + j) * right;
                for (Index r = 0; r < right; ++r) out(row0 + r, col0 + r) = v;
            }
        }
    }
    return OperatorMatrix(space, std::move(out), op.hermitian_hint);
}

cplx expectation(const OperatorMatrix& op, const StateVector& psi) {
    if (!(op.space == psi.space())) {
        throw ShapeError("operator and state live on different spaces");
    }
    const cplx value = psi.amplitudes().dot(op.entries * psi.amplitudes());
    if (op.hermitian_hint) {
        if (std::abs(value.imag()) > kExpectationImagGuard) {
            throw NumericalError("Hermitian expectation has imaginary part " +
                                 std::to_string(value.imag()));
        }
        return {value.real(), 0.0};
    }
    return value;
}

}  // namespace spinmetric
