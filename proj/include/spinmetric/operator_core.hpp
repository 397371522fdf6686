#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace spinmetric {

using cplx = std::complex<double>;
using Index = Eigen::Index;

enum class Slot { spin, alpha, beta };
enum class Axis { x, y, z };

/// Composite Hilbert space layout. Tensor factors are ordered spin (x) alpha (x) beta;
/// a basis state |s, n_alpha, n_beta> sits at s*N_alpha*N_beta + n_alpha*N_beta + n_beta,
/// with s = 0 spin-up and s = 1 spin-down in the sigma^z eigenbasis.
///
/// spin_dim is 2 when a spin factor is present and 1 otherwise, so a bare Fock mode
/// is SpaceSpec{1, {N}} and the bare spin is SpaceSpec{2, {}}.
struct SpaceSpec {
    int spin_dim = 2;
    std::vector<int> fock_cutoffs;

    static SpaceSpec spin();
    static SpaceSpec mode(int cutoff);
    static SpaceSpec spin_modes(int n_alpha, int n_beta);
    static SpaceSpec spin_modes(int cutoff) { return spin_modes(cutoff, cutoff); }

    Index dimension() const;
    int slot_dim(Slot slot) const;
    Index basis_index(int s, int n_alpha, int n_beta) const;

    friend bool operator==(const SpaceSpec&, const SpaceSpec&) = default;
};

/// Dense square operator tagged with the space it acts on.
struct OperatorMatrix {
    SpaceSpec space;
    Eigen::MatrixXcd entries;
    bool hermitian_hint = false;

    OperatorMatrix() = default;
    /// Throws ShapeError if the matrix does not match the space, NumericalError if
    /// `hermitian` is set but the matrix deviates from its adjoint by more than 1e-12.
    OperatorMatrix(SpaceSpec space, Eigen::MatrixXcd entries, bool hermitian = false);

    Index dimension() const { return entries.rows(); }
    OperatorMatrix adjoint() const;
    double hermiticity_residual() const;
};

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix operator+(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix operator-(const OperatorMatrix& lhs, const OperatorMatrix& rhs);
OperatorMatrix operator*(cplx scale, const OperatorMatrix& op);
OperatorMatrix commutator(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

/// Normalized state. Construction fails if | ||psi||^2 - 1 | exceeds kNormTolerance.
class StateVector {
public:
    static constexpr double kNormTolerance = 1e-10;

    StateVector(SpaceSpec space, Eigen::VectorXcd amplitudes);

    const SpaceSpec& space() const { return space_; }
    const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
    double norm_squared() const { return amplitudes_.squaredNorm(); }

private:
    SpaceSpec space_;
    Eigen::VectorXcd amplitudes_;
};

/// Truncated lowering operator: (n-1, n) entry sqrt(n).
OperatorMatrix annihilation_matrix(int cutoff);
OperatorMatrix creation_matrix(int cutoff);
/// diag(0, 1, ..., N-1); identical to a^dagger a including the top level.
OperatorMatrix number_matrix(int cutoff);
/// diag((-1)^n)
OperatorMatrix parity_matrix(int cutoff);
OperatorMatrix pauli_matrix(Axis axis);
OperatorMatrix identity_matrix(const SpaceSpec& space);

/// Kronecker product of `op` in `slot` with identities on every other factor.
OperatorMatrix tensor_embed(const OperatorMatrix& op, Slot slot, const SpaceSpec& space);

/// <psi|M|psi>. For operators with hermitian_hint the imaginary part must stay
/// below 1e-10 (NumericalError otherwise) and is returned as exactly zero.
cplx expectation(const OperatorMatrix& op, const StateVector& psi);

}  // namespace spinmetric
