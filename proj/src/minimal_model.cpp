#include "spinmetric/minimal_model.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>

#include "spinmetric/errors.hpp"
#include "spinmetric/gravity_sector.hpp"

namespace spinmetric::minimal {

namespace {

constexpr double kEvolveNormTolerance = 1e-8;
constexpr double kTraceNormTolerance = 1e-10;
constexpr double kTraceEnergyTolerance = 1e-8;
constexpr Index kTimeBlock = 256;
// Max |<S=-1| H |S=+1>| allowed before falling back to full-space diagonalization.
constexpr double kSectorLeakTolerance = 1e-13;
// Sectors holding less amplitude than this are not propagated.
constexpr double kEmptySectorTolerance = 1e-15;

struct Sample {
    double sx = 0, sy = 0, sz = 0;
    double n_alpha = 0, n_beta = 0;
    double norm = 0, energy = 0;
    double re_alpha = 0, re_beta = 0;
};

// Expectation values evaluated directly on the amplitudes, using the basis layout
// s*Na*Nb + na*Nb + nb. Independent of the dense matrices used for propagation.
Sample measure(const cplx* psi, int na, int nb, double g) {
    const Index half = Index{na} * nb;
    const cplx* up = psi;
    const cplx* dn = psi + half;

    Sample s;
    cplx up_dn{};             // sum conj(u) d
    cplx up_xbeta_dn{};       // sum conj(u) (b + b^dag) d
    cplx up_xalpha_dn{};      // sum conj(u) (a + a^dag) d
    cplx alpha_amp{};         // <a>
    cplx beta_amp{};          // <b>
    for (int a = 0; a < na; ++a) {
        for (int b = 0; b < nb; ++b) {
            const Index k = Index{a} * nb + b;
            const double pu = std::norm(up[k]);
            const double pd = std::norm(dn[k]);
            s.norm += pu + pd;
            s.sz += pu - pd;
            s.n_alpha += a * (pu + pd);
            s.n_beta += b * (pu + pd);
            const cplx cu = std::conj(up[k]);
            up_dn += cu * dn[k];

            cplx xb{};
            if (b + 1 < nb) xb += std::sqrt(double(b + 1)) * dn[k + 1];
            if (b > 0) xb += std::sqrt(double(b)) * dn[k - 1];
            up_xbeta_dn += cu * xb;

            cplx xa{};
            if (a + 1 < na) xa += std::sqrt(double(a + 1)) * dn[k + nb];
            if (a > 0) xa += std::sqrt(double(a)) * dn[k - nb];
            up_xalpha_dn += cu * xa;

            if (a + 1 < na) {
                const double root = std::sqrt(double(a + 1));
                alpha_amp += root * (cu * up[k + nb] + std::conj(dn[k]) * dn[k + nb]);
            }
            if (b + 1 < nb) {
                const double root = std::sqrt(double(b + 1));
                beta_amp += root * (cu * up[k + 1] + std::conj(dn[k]) * dn[k + 1]);
            }
        }
    }
    s.sx = 2.0 * up_dn.real();
    s.sy = 2.0 * up_dn.imag();
    s.re_alpha = alpha_amp.real();
    s.re_beta = beta_amp.real();
    const double coupling_term = 2.0 * up_xbeta_dn.real() + 2.0 * up_xalpha_dn.imag();
    s.energy = std::numbers::sqrt2 * (s.sx + s.n_alpha + s.n_beta) + g * coupling_term;
    return s;
}

void require_sorted_times(const std::vector<double>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
            throw DomainError("evolution times must be finite and non-negative");
        }
        if (i > 0 && times[i] < times[i - 1]) {
            throw DomainError("evolution times must be sorted");
        }
    }
}

// Columns are the parity sector basis vectors written in the computational basis.
Eigen::MatrixXd sector_basis(const SpaceSpec& space, int parity) {
    const int na = space.fock_cutoffs[0];
    const int nb = space.fock_cutoffs[1];
    const Index m = Index{na} * nb;
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(2 * m, m);
    const double h = 1.0 / std::numbers::sqrt2;
    for (int a = 0; a < na; ++a) {
        const double e = (a % 2 == 0) ? parity : -parity;
        for (int b = 0; b < nb; ++b) {
            const Index j = Index{a} * nb + b;
            q(j, j) = h;
            q(m + j, j) = e * h;
        }
    }
    return q;
}

SymmetrySector diagonalize(const Eigen::MatrixXcd& block, int parity) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigensolver did not converge for minimal Hamiltonian");
    }
    return {parity, solver.eigenvalues(), solver.eigenvectors()};
}

// Sector coordinates of psi.
Eigen::VectorXcd project(const SymmetrySector& s, const SpaceSpec& space, const Eigen::VectorXcd& psi) {
    if (s.parity == 0) return psi;
    const int na = space.fock_cutoffs[0];
    const int nb = space.fock_cutoffs[1];
    const Index m = Index{na} * nb;
    const double h = 1.0 / std::numbers::sqrt2;
    Eigen::VectorXcd out(m);
    for (int a = 0; a < na; ++a) {
        const double e = (a % 2 == 0) ? s.parity : -s.parity;
        for (int b = 0; b < nb; ++b) {
            const Index j = Index{a} * nb + b;
            out(j) = h * (psi(j) + e * psi(m + j));
        }
    }
    return out;
}

// psi += Q phi, mapping sector coordinates back to the computational basis.
void embed_add(const SymmetrySector& s, const SpaceSpec& space, const cplx* phi, cplx* psi) {
    if (s.parity == 0) {
        for (Index j = 0; j < space.dimension(); ++j) psi[j] += phi[j];
        return;
    }
    const int na = space.fock_cutoffs[0];
    const int nb = space.fock_cutoffs[1];
    const Index m = Index{na} * nb;
    const double h = 1.0 / std::numbers::sqrt2;
    for (int a = 0; a < na; ++a) {
        const double e = (a % 2 == 0) ? s.parity : -s.parity;
        for (int b = 0; b < nb; ++b) {
            const Index j = Index{a} * nb + b;
            psi[j] += h * phi[j];
            psi[m + j] += (e * h) * phi[j];
        }
    }
}

// Eigen-coordinates of psi0 in each sector that it actually occupies.
struct ActiveSector {
    const SymmetrySector* sector;
    Eigen::VectorXcd coeffs;
};

std::vector<ActiveSector> occupied_sectors(const MinimalHamiltonian& h, const StateVector& psi0) {
    std::vector<ActiveSector> active;
    for (const auto& s : h.sectors()) {
        const Eigen::VectorXcd local = project(s, h.space(), psi0.amplitudes());
        if (local.norm() <= kEmptySectorTolerance) continue;
        active.push_back({&s, s.vectors.adjoint() * local});
    }
    return active;
}

}  // namespace

void ModelParams::validate() const {
    if (!(G >= 0.0) || !std::isfinite(G)) throw DomainError("G must be >= 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("mu must be > 0");
    if (cutoff < 2) throw InvalidCutoff("cutoff N must be >= 2, got " + std::to_string(cutoff));
    if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("dt must be > 0");
    if (!(t_max >= dt) || !std::isfinite(t_max)) throw DomainError("t_max must be >= dt");
}

std::vector<double> ModelParams::time_grid() const {
    validate();
    const auto steps = static_cast<std::size_t>(std::floor(t_max / dt + 1e-9));
    std::vector<double> times(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) times[k] = static_cast<double>(k) * dt;
    return times;
}

double coupling_strength(double G, double mu) {
    if (!(G >= 0.0)) throw DomainError("G must be >= 0, got " + std::to_string(G));
    if (!(mu > 0.0)) throw DomainError("mu must be > 0, got " + std::to_string(mu));
    return -std::sqrt(2.0 * G) / (std::sqrt(std::numbers::pi) * std::pow(mu, 1.5));
}

struct MinimalHamiltonian::Cache {
    std::once_flag sectors_once;
    std::vector<SymmetrySector> sectors;
    std::once_flag spectrum_once;
    Spectrum spectrum;
};

MinimalHamiltonian::MinimalHamiltonian(ModelParams params, double g, OperatorMatrix matrix)
    : params_(std::move(params)),
      g_(g),
      matrix_(std::move(matrix)),
      cache_(std::make_shared<Cache>()) {}

const std::vector<SymmetrySector>& MinimalHamiltonian::sectors() const {
    std::call_once(cache_->sectors_once, [this] {
        const SpaceSpec& space = matrix_.space;
        const Eigen::MatrixXcd& h = matrix_.entries;
        std::vector<SymmetrySector> blocks;
        if (space.spin_dim == 2 && space.fock_cutoffs.size() == 2) {
            const Eigen::MatrixXd q_plus = sector_basis(space, +1);
            const Eigen::MatrixXd q_minus = sector_basis(space, -1);
            const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
            const double leak = (q_minus.transpose() * h * q_plus).cwiseAbs().maxCoeff();
            if (leak <= kSectorLeakTolerance * scale) {
                for (int parity : {+1, -1}) {
                    const Eigen::MatrixXd& q = parity > 0 ? q_plus : q_minus;
                    Eigen::MatrixXcd block = q.transpose() * h * q;
                    block = 0.5 * (block + block.adjoint()).eval();
                    blocks.push_back(diagonalize(block, parity));
                }
            }
        }
        if (blocks.empty()) blocks.push_back(diagonalize(h, 0));
        cache_->sectors = std::move(blocks);
    });
    return cache_->sectors;
}

const Spectrum& MinimalHamiltonian::spectrum() const {
    std::call_once(cache_->spectrum_once, [this] {
        const SpaceSpec& space = matrix_.space;
        const auto& blocks = sectors();
        Index total = 0;
        for (const auto& b : blocks) total += b.energies.size();
        Eigen::VectorXd energies(total);
        Eigen::MatrixXcd vectors(space.dimension(), total);
        Index col = 0;
        for (const auto& b : blocks) {
            for (Index k = 0; k < b.energies.size(); ++k, ++col) {
                energies(col) = b.energies(k);
                vectors.col(col).setZero();
                embed_add(b, space, b.vectors.col(k).data(), vectors.col(col).data());
            }
        }
        std::vector<Index> order(static_cast<std::size_t>(total));
        std::iota(order.begin(), order.end(), Index{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](Index a, Index b) { return energies(a) < energies(b); });
        cache_->spectrum.energies.resize(total);
        cache_->spectrum.vectors.resize(space.dimension(), total);
        for (Index k = 0; k < total; ++k) {
            cache_->spectrum.energies(k) = energies(order[static_cast<std::size_t>(k)]);
            cache_->spectrum.vectors.col(k) = vectors.col(order[static_cast<std::size_t>(k)]);
        }
    });
    return cache_->spectrum;
}

MinimalHamiltonian build_minimal_hamiltonian(const ModelParams& params,
                                             std::optional<double> coupling_override) {
    params.validate();
    const double g = coupling_override.value_or(coupling_strength(params.G, params.mu));
    const int n = params.cutoff;
    const SpaceSpec space = SpaceSpec::spin_modes(n);

    const OperatorMatrix a = annihilation_matrix(n);
    const OperatorMatrix displacement(SpaceSpec::mode(n), a.entries + a.entries.adjoint(), true);
    const OperatorMatrix sx = tensor_embed(pauli_matrix(Axis::x), Slot::spin, space);
    const OperatorMatrix sy = tensor_embed(pauli_matrix(Axis::y), Slot::spin, space);
    const OperatorMatrix n_alpha = tensor_embed(number_matrix(n), Slot::alpha, space);
    const OperatorMatrix n_beta = tensor_embed(number_matrix(n), Slot::beta, space);
    const OperatorMatrix x_alpha = tensor_embed(displacement, Slot::alpha, space);
    const OperatorMatrix x_beta = tensor_embed(displacement, Slot::beta, space);

    Eigen::MatrixXcd m = std::numbers::sqrt2 * (sx.entries + n_alpha.entries + n_beta.entries) +
                         g * (x_beta.entries * sx.entries + x_alpha.entries * sy.entries);
    return MinimalHamiltonian(params, g, OperatorMatrix(space, std::move(m), true));
}

StateVector initial_state(Axis direction, Sign sign, const SpaceSpec& space) {
    const double s = (sign == Sign::plus) ? 1.0 : -1.0;
    const double h = 1.0 / std::numbers::sqrt2;
    cplx up{}, dn{};
    switch (direction) {
        case Axis::x: up = h; dn = s * h; break;
        case Axis::y: up = h; dn = cplx{0.0, s * h}; break;
        case Axis::z:
            if (sign == Sign::plus) up = 1.0; else dn = 1.0;
            break;
    }
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(space.dimension());
    amps(space.basis_index(0, 0, 0)) = up;
    amps(space.basis_index(1, 0, 0)) = dn;
    return StateVector(space, std::move(amps));
}

std::vector<StateVector> evolve(const MinimalHamiltonian& h, const StateVector& psi0,
                                const std::vector<double>& times) {
    if (!(psi0.space() == h.space())) throw ShapeError("initial state is not on H's space");
    require_sorted_times(times);
    const auto active = occupied_sectors(h, psi0);

    std::vector<StateVector> out;
    out.reserve(times.size());
    for (double t : times) {
        if (t == 0.0) {
            out.push_back(psi0);
            continue;
        }
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(psi0.amplitudes().size());
        for (const auto& [sector, coeffs] : active) {
            Eigen::VectorXcd phased(coeffs.size());
            for (Index k = 0; k < coeffs.size(); ++k) {
                phased(k) = coeffs(k) * std::polar(1.0, -sector->energies(k) * t);
            }
            const Eigen::VectorXcd local = sector->vectors * phased;
            embed_add(*sector, h.space(), local.data(), psi.data());
        }
        const double drift = std::abs(psi.squaredNorm() - 1.0);
        if (drift > kEvolveNormTolerance) {
            throw NumericalError("norm drift " + std::to_string(drift) + " at t = " +
                                 std::to_string(t));
        }
        out.emplace_back(psi0.space(), std::move(psi));
    }
    return out;
}

void ObservableTrace::check_invariants() const {
    const std::size_t n = times.size();
    const bool shapes_ok = sx.size() == n && sy.size() == n && sz.size() == n &&
                           n_alpha.size() == n && n_beta.size() == n && energy.size() == n &&
                           norm.size() == n && (h11.empty() || h11.size() == n) &&
                           (h12.empty() || h12.size() == n);
    if (!shapes_ok) throw NumericalError("observable trace columns differ in length");
    if (n == 0) return;
    const double e0 = energy.front();
    const double energy_tol = kTraceEnergyTolerance * (1.0 + std::abs(e0));
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(norm[i] - 1.0) > kTraceNormTolerance) {
            throw NumericalError("norm drift " + std::to_string(norm[i] - 1.0) + " at t = " +
                                 std::to_string(times[i]));
        }
        if (std::abs(energy[i] - e0) > energy_tol) {
            throw NumericalError("energy drift " + std::to_string(energy[i] - e0) + " at t = " +
                                 std::to_string(times[i]));
        }
    }
}

ObservableTrace observable_trace(const MinimalHamiltonian& h, const StateVector& psi0,
                                 const ModelParams& params, bool include_metric) {
    if (!(psi0.space() == h.space())) throw ShapeError("initial state is not on H's space");
    const SpaceSpec& space = h.space();
    const int na = space.fock_cutoffs[0];
    const int nb = space.fock_cutoffs[1];
    const double g = h.coupling();

    ObservableTrace trace;
    trace.times = params.time_grid();
    const Index count = static_cast<Index>(trace.times.size());
    for (auto* col : {&trace.sx, &trace.sy, &trace.sz, &trace.n_alpha, &trace.n_beta,
                      &trace.energy, &trace.norm}) {
        col->resize(count);
    }
    double metric_scale = 0.0;
    if (include_metric) {
        trace.h11.resize(count);
        trace.h12.resize(count);
        // (alpha_tilde + alpha_tilde^dag)/sqrt2 = e^{-r} (alpha + alpha^dag)/sqrt2
        metric_scale = std::numbers::sqrt2 * std::exp(-gravity::bogoliubov_params(params.mu).r);
    }

    auto record = [&](Index i, const cplx* psi) {
        const Sample s = measure(psi, na, nb, g);
        trace.sx[i] = s.sx;
        trace.sy[i] = s.sy;
        trace.sz[i] = s.sz;
        trace.n_alpha[i] = s.n_alpha;
        trace.n_beta[i] = s.n_beta;
        trace.energy[i] = s.energy;
        trace.norm[i] = s.norm;
        if (include_metric) {
            trace.h11[i] = metric_scale * s.re_alpha;
            trace.h12[i] = metric_scale * s.re_beta;
        }
    };

    const auto active = occupied_sectors(h, psi0);
    const Index dim = space.dimension();

    std::vector<Eigen::MatrixXcd> phased, local;
    for (const auto& a : active) {
        phased.emplace_back(a.coeffs.size(), kTimeBlock);
        local.emplace_back(a.coeffs.size(), kTimeBlock);
    }
    Eigen::VectorXcd psi(dim);
    for (Index start = 0; start < count; start += kTimeBlock) {
        const Index block = std::min(kTimeBlock, count - start);
        for (std::size_t s = 0; s < active.size(); ++s) {
            const auto& [sector, coeffs] = active[s];
            for (Index j = 0; j < block; ++j) {
                const double t = trace.times[start + j];
                for (Index k = 0; k < coeffs.size(); ++k) {
                    phased[s](k, j) = coeffs(k) * std::polar(1.0, -sector->energies(k) * t);
                }
            }
            local[s].leftCols(block).noalias() = sector->vectors * phased[s].leftCols(block);
        }
        for (Index j = 0; j < block; ++j) {
            const Index i = start + j;
            if (trace.times[i] == 0.0) {
                record(i, psi0.amplitudes().data());
                continue;
            }
            psi.setZero();
            for (std::size_t s = 0; s < active.size(); ++s) {
                embed_add(*active[s].sector, space, local[s].col(j).data(), psi.data());
            }
            record(i, psi.data());
        }
    }
    return trace;
}

double symmetry_residual(const MinimalHamiltonian& h, const OperatorMatrix& probe) {
    return commutator(h.matrix(), probe).entries.cwiseAbs().maxCoeff();
}

double symmetry_check(const MinimalHamiltonian& h) {
    const SpaceSpec& space = h.space();
    if (space.spin_dim != 2 || space.fock_cutoffs.size() != 2) {
        throw ShapeError("symmetry check needs a spin (x) alpha (x) beta space");
    }
    // S |s, a, b> = (-1)^a |1-s, a, b> is a signed involution, so
    // [H, S]_ij = H(i, p(j)) sign(j) - sign(i) H(p(i), j).
    const Index dim = space.dimension();
    const Index half = dim / 2;
    const Index block = space.fock_cutoffs[1];
    auto partner = [&](Index i) { return i < half ? i + half : i - half; };
    auto sign = [&](Index i) { return ((i % half) / block) % 2 == 0 ? 1.0 : -1.0; };
    const Eigen::MatrixXcd& m = h.matrix().entries;
    double worst = 0.0;
    for (Index j = 0; j < dim; ++j) {
        const Index pj = partner(j);
        const double sj = sign(j);
        for (Index i = 0; i < dim; ++i) {
            worst = std::max(worst, std::abs(m(i, pj) * sj - sign(i) * m(partner(i), j)));
        }
    }
    return worst;
}

std::vector<ConvergenceStep> truncation_convergence(const ModelParams& params, Axis direction,
                                                    Sign sign, const std::vector<int>& cutoffs) {
    if (cutoffs.size() < 2) throw DomainError("convergence study needs at least two cutoffs");
    for (std::size_t i = 1; i < cutoffs.size(); ++i) {
        if (cutoffs[i] <= cutoffs[i - 1]) throw DomainError("cutoffs must be strictly increasing");
    }

    auto run = [&](int cutoff) {
        ModelParams p = params;
        p.cutoff = cutoff;
        const MinimalHamiltonian h = build_minimal_hamiltonian(p);
        return observable_trace(h, initial_state(direction, sign, h.space()), p);
    };

    std::vector<ConvergenceStep> steps;
    ObservableTrace previous = run(cutoffs.front());
    for (std::size_t i = 1; i < cutoffs.size(); ++i) {
        ObservableTrace current = run(cutoffs[i]);
        double dev = 0.0;
        for (std::size_t k = 0; k < current.size(); ++k) {
            dev = std::max({dev, std::abs(current.sx[k] - previous.sx[k]),
                            std::abs(current.sy[k] - previous.sy[k]),
                            std::abs(current.sz[k] - previous.sz[k]),
                            std::abs(current.n_alpha[k] - previous.n_alpha[k]),
                            std::abs(current.n_beta[k] - previous.n_beta[k])});
        }
        steps.push_back({cutoffs[i - 1], cutoffs[i], dev});
        previous = std::move(current);
    }
    return steps;
}

}  // namespace spinmetric::minimal
