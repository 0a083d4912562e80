#include "kerrflux/dynamics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace kerrflux {

SparseMatrix sparse_kron(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(a.nonZeros()) *
                    static_cast<std::size_t>(b.nonZeros()));
    for (int ka = 0; ka < a.outerSize(); ++ka) {
        for (SparseMatrix::InnerIterator ita(a, ka); ita; ++ita) {
            for (int kb = 0; kb < b.outerSize(); ++kb) {
                for (SparseMatrix::InnerIterator itb(b, kb); itb; ++itb) {
                    entries.emplace_back(ita.row() * b.rows() + itb.row(),
                                         ita.col() * b.cols() + itb.col(),
                                         ita.value() * itb.value());
                }
            }
        }
    }
    out.setFromTriplets(entries.begin(), entries.end());
    return out;
}

SparseMatrix vectorized_commutator(const SparseMatrix& hamiltonian) {
    const Eigen::Index dim = hamiltonian.rows();
    SparseMatrix identity(dim, dim);
    identity.setIdentity();
    const Complex minus_i(0.0, -1.0);
    const SparseMatrix ht = hamiltonian.transpose();
    return SparseMatrix(minus_i * (sparse_kron(identity, hamiltonian) -
                                   sparse_kron(ht, identity)));
}

SparseMatrix vectorized_dissipator(const SparseMatrix& jump_op) {
    const Eigen::Index dim = jump_op.rows();
    SparseMatrix identity(dim, dim);
    identity.setIdentity();
    const SparseMatrix jdj = SparseMatrix(dag(jump_op) * jump_op);
    const SparseMatrix jc = jump_op.conjugate();
    const SparseMatrix jdjt = jdj.transpose();
    return SparseMatrix(sparse_kron(jc, jump_op) -
                        Complex(0.5, 0.0) * (sparse_kron(identity, jdj) +
                                             sparse_kron(jdjt, identity)));
}

Liouvillian build_liouvillian(const SparseMatrix& hamiltonian,
                              const NetworkModel& network, const FockBasis& basis) {
    const Eigen::Index dim = basis.dimension();
    if (hamiltonian.rows() != dim || hamiltonian.cols() != dim) {
        throw InternalError("build_liouvillian: Hamiltonian is " +
                            std::to_string(hamiltonian.rows()) + "x" +
                            std::to_string(hamiltonian.cols()) + " but the basis has dimension " +
                            std::to_string(dim));
    }
    if (basis.mode_count() != static_cast<int>(network.modes.size())) {
        throw InternalError("build_liouvillian: basis/network mode count mismatch");
    }

    Liouvillian liouvillian;
    liouvillian.hilbert_dimension = dim;
    liouvillian.generator = vectorized_commutator(hamiltonian);
    for (std::size_t m = 0; m < network.modes.size(); ++m) {
        const ModeSpec& mode = network.modes[m];
        if (!(mode.gamma > 0.0)) {
            throw ConfigError("mode '" + mode.label + "': gamma must be > 0");
        }
        liouvillian.generator +=
            SparseMatrix(Complex(mode.gamma, 0.0) *
                         vectorized_dissipator(annihilation(basis, static_cast<int>(m))));
        liouvillian.decay_channels.push_back({mode.label, mode.gamma});
    }
    liouvillian.generator = prune(std::move(liouvillian.generator));
    if (network.drive.epsilon != 0.0) {
        liouvillian.driven_mode = network.drive.target_mode;
        liouvillian.drive_epsilon = network.drive.epsilon;
    }
    return liouvillian;
}

namespace {

// Column index of rho(i, i) in the column-stacked vectorization.
inline Eigen::Index diag_index(Eigen::Index i, Eigen::Index dim) { return i * (dim + 1); }

int estimate_kernel_dimension(const SparseMatrix& generator) {
    const Eigen::Index n = generator.rows();
    if (n > 1600) return -1; // too large for a dense estimate
    const Eigen::MatrixXcd dense(generator);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(dense);
    const auto& sv = svd.singularValues();
    const double scale = sv.size() > 0 ? sv(0) : 0.0;
    int kernel = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= 1e-10 * std::max(scale, 1.0)) ++kernel;
    }
    return kernel;
}

} // namespace

SteadyState steady_state(const Liouvillian& liouvillian) {
    const auto t0 = std::chrono::steady_clock::now();
    const Eigen::Index dim = liouvillian.hilbert_dimension;
    const Eigen::Index n = dim * dim;
    if (liouvillian.generator.rows() != n || liouvillian.generator.cols() != n) {
        throw InternalError("steady_state: generator dimension does not match D^2");
    }

    // Constrained system: the first row (rho(0,0) component) is replaced by
    // the trace functional.
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(liouvillian.generator.nonZeros()) +
                    static_cast<std::size_t>(dim));
    for (int k = 0; k < liouvillian.generator.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(liouvillian.generator, k); it; ++it) {
            if (it.row() == 0) continue;
            entries.emplace_back(it.row(), it.col(), it.value());
        }
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
        entries.emplace_back(0, diag_index(i, dim), Complex(1.0, 0.0));
    }
    SparseMatrix constrained(n, n);
    constrained.setFromTriplets(entries.begin(), entries.end());
    constrained.makeCompressed();

    Eigen::SparseLU<SparseMatrix> lu;
    lu.analyzePattern(constrained);
    lu.factorize(constrained);
    if (lu.info() != Eigen::Success) {
        const int kernel = estimate_kernel_dimension(liouvillian.generator);
        std::ostringstream msg;
        msg << "steady_state: trace-constrained system is singular; the generator kernel is "
               "degenerate (estimated dimension ";
        if (kernel >= 0) {
            msg << kernel;
        } else {
            msg << ">= 2, not estimated at this size";
        }
        msg << ")";
        throw SolverError(msg.str());
    }

    DenseVector rhs = DenseVector::Zero(n);
    rhs(0) = Complex(1.0, 0.0);
    const DenseVector x = lu.solve(rhs);

    SteadyState ss;
    ss.rho = Eigen::Map<const DenseMatrix>(x.data(), dim, dim);
    ss.residual = (liouvillian.generator * x).norm();
    ss.driven_mode = liouvillian.driven_mode;
    ss.drive_epsilon = liouvillian.drive_epsilon;

    if (!std::isfinite(ss.residual) || ss.residual > 1e-8) {
        std::ostringstream msg;
        msg << "steady_state: residual " << ss.residual << " above tolerance 1e-8";
        throw SolverError(msg.str());
    }
    const double trace_error = std::abs(ss.rho.trace() - Complex(1.0, 0.0));
    if (trace_error > 1e-10) {
        throw SolverError("steady_state: trace deviates from 1 by " + std::to_string(trace_error));
    }
    const double herm_error = (ss.rho - ss.rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_error > 1e-10) {
        throw SolverError("steady_state: non-Hermitian density matrix, deviation " +
                          std::to_string(herm_error));
    }
    const DenseMatrix sym = 0.5 * (ss.rho + ss.rho.adjoint());
    Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(sym, Eigen::EigenvaluesOnly);
    ss.min_eigenvalue = eig.eigenvalues().minCoeff();
    if (ss.min_eigenvalue < -1e-8) {
        throw SolverError("steady_state: negative eigenvalue " +
                          std::to_string(ss.min_eigenvalue) + " beyond tolerance");
    }

    const auto t1 = std::chrono::steady_clock::now();
    ss.solver_info.method = "sparse-lu(trace-constrained)";
    ss.solver_info.iterations = 1;
    ss.solver_info.seconds = std::chrono::duration<double>(t1 - t0).count();
    return ss;
}

namespace {

DenseVector rk4_step(const SparseMatrix& generator, const DenseVector& y, double dt) {
    const DenseVector k1 = generator * y;
    const DenseVector k2 = generator * DenseVector(y + (0.5 * dt) * k1);
    const DenseVector k3 = generator * DenseVector(y + (0.5 * dt) * k2);
    const DenseVector k4 = generator * DenseVector(y + dt * k3);
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

} // namespace

DenseMatrix evolve(const Liouvillian& liouvillian, const DenseMatrix& rho0,
                   double t_final, double dt) {
    const Eigen::Index dim = liouvillian.hilbert_dimension;
    if (rho0.rows() != dim || rho0.cols() != dim) {
        throw InternalError("evolve: initial state dimension mismatch");
    }
    if (!(dt > 0.0) || !(t_final >= 0.0)) {
        throw UsageError("evolve: dt must be positive and t_final nonnegative");
    }

    const Complex trace0 = rho0.trace();
    DenseVector y = Eigen::Map<const DenseVector>(rho0.data(), dim * dim);

    const auto steps = static_cast<long>(std::ceil(t_final / dt - 1e-12));
    double t = 0.0;
    for (long step = 0; step < steps; ++step) {
        const double h = std::min(dt, t_final - t);
        const DenseVector full = rk4_step(liouvillian.generator, y, h);
        if (step % 8 == 0) {
            const DenseVector half =
                rk4_step(liouvillian.generator, rk4_step(liouvillian.generator, y, 0.5 * h),
                         0.5 * h);
            const double estimate = (full - half).cwiseAbs().maxCoeff();
            if (!std::isfinite(estimate) || estimate > 1e-8) {
                std::ostringstream msg;
                msg << "evolve: step-halving error estimate " << estimate
                    << " exceeds 1e-8 at t = " << t << "; reduce dt below " << h;
                throw SolverError(msg.str());
            }
        }
        y = full;
        t += h;
    }

    DenseMatrix rho = Eigen::Map<const DenseMatrix>(y.data(), dim, dim);
    const double drift = std::abs(rho.trace() - trace0);
    if (drift > 1e-8) {
        throw SolverError("evolve: trace drifted by " + std::to_string(drift) + " over the run");
    }
    return rho;
}

double AmplitudeSolution::mean_photon(int mode) const {
    // Leading order in the drive: only the one-photon amplitudes, matching
    // T = gamma_in gamma_out |<1_out|psi>|^2 / eps^2.
    double total = 0.0;
    for (const auto& [occ, amp] : amplitudes) {
        int photons = 0;
        for (int x : occ) photons += x;
        if (photons != 1) continue;
        total += occ[static_cast<std::size_t>(mode)] * std::norm(amp);
    }
    return total;
}

double AmplitudeSolution::pair_moment(int mode) const {
    double total = 0.0;
    for (const auto& [occ, amp] : amplitudes) {
        const int n = occ[static_cast<std::size_t>(mode)];
        total += n * (n - 1) * std::norm(amp);
    }
    return total;
}

AmplitudeSolution amplitude_oracle(const NetworkModel& network) {
    const int n_modes = static_cast<int>(network.modes.size());
    const int drive = network.mode_index(network.drive.target_mode);
    if (drive < 0) {
        throw ConfigError("amplitude_oracle: drive targets undeclared mode '" +
                          network.drive.target_mode + "'");
    }
    const double eps = network.drive.epsilon;
    if (!(eps > 0.0)) {
        throw UsageError("amplitude_oracle: requires a nonzero drive");
    }

    AmplitudeSolution solution;
    solution.epsilon = eps;
    solution.drive_order = 2;
    for (const ModeSpec& m : network.modes) solution.mode_labels.push_back(m.label);

    double min_gamma = network.modes.front().gamma;
    for (const ModeSpec& m : network.modes) min_gamma = std::min(min_gamma, m.gamma);
    if (eps > 0.1 * min_gamma) {
        std::ostringstream warn;
        warn << "amplitude_oracle: drive " << eps << " is not deep in the weak-drive regime "
             << "(epsilon <= 0.1 min gamma = " << 0.1 * min_gamma
             << "); perturbative amplitudes may be inaccurate";
        solution.warnings.push_back(warn.str());
    }

    // Excitation manifolds, honoring per-mode caps but never above 2 photons.
    std::vector<OccupationVector> one_photon, two_photon;
    const auto cap_of = [&](int m) {
        const auto& caps = network.truncation.per_mode_caps;
        return m < static_cast<int>(caps.size()) ? std::min(caps[static_cast<std::size_t>(m)], 2)
                                                 : 2;
    };
    for (int m = 0; m < n_modes; ++m) {
        OccupationVector occ(static_cast<std::size_t>(n_modes), 0);
        occ[static_cast<std::size_t>(m)] = 1;
        one_photon.push_back(occ);
    }
    const bool two_photon_allowed =
        !network.truncation.total_cap || *network.truncation.total_cap >= 2;
    for (int m = 0; two_photon_allowed && m < n_modes; ++m) {
        for (int k = m; k < n_modes; ++k) {
            OccupationVector occ(static_cast<std::size_t>(n_modes), 0);
            occ[static_cast<std::size_t>(m)] += 1;
            occ[static_cast<std::size_t>(k)] += 1;
            if (occ[static_cast<std::size_t>(m)] > cap_of(m)) continue;
            two_photon.push_back(occ);
        }
    }

    const double omega_target = network.modes[static_cast<std::size_t>(drive)].omega;
    const auto delta_of = [&](int m) {
        return network.drive.detuning +
               (network.modes[static_cast<std::size_t>(m)].omega - omega_target);
    };

    // <s'| H_nh |s> assembled directly from the network description; this
    // path shares nothing with the sparse-operator assembly it cross-checks.
    const auto element = [&](const OccupationVector& bra, const OccupationVector& ket) {
        Complex value(0.0, 0.0);
        if (bra == ket) {
            for (int m = 0; m < n_modes; ++m) {
                const double n = ket[static_cast<std::size_t>(m)];
                const ModeSpec& mode = network.modes[static_cast<std::size_t>(m)];
                value += Complex(delta_of(m) * n + mode.kerr_u * n * (n - 1.0),
                                 -0.5 * mode.gamma * n);
            }
            return value;
        }
        for (const CouplingSpec& c : network.couplings) {
            const int u = network.mode_index(c.from_mode);
            const int v = network.mode_index(c.to_mode);
            if (u < 0 || v < 0) {
                throw ConfigError("coupling references undeclared mode '" +
                                  (u < 0 ? c.from_mode : c.to_mode) + "'");
            }
            OccupationVector hop = ket;
            if (hop[static_cast<std::size_t>(u)] >= 1) {
                --hop[static_cast<std::size_t>(u)];
                ++hop[static_cast<std::size_t>(v)];
                if (hop == bra) {
                    const double amp = std::sqrt(static_cast<double>(
                                           ket[static_cast<std::size_t>(u)])) *
                                       std::sqrt(static_cast<double>(
                                           ket[static_cast<std::size_t>(v)] + 1));
                    value += c.strength * std::polar(1.0, c.phase) * amp;
                }
            }
            hop = ket;
            if (hop[static_cast<std::size_t>(v)] >= 1) {
                --hop[static_cast<std::size_t>(v)];
                ++hop[static_cast<std::size_t>(u)];
                if (hop == bra) {
                    const double amp = std::sqrt(static_cast<double>(
                                           ket[static_cast<std::size_t>(v)])) *
                                       std::sqrt(static_cast<double>(
                                           ket[static_cast<std::size_t>(u)] + 1));
                    value += c.strength * std::polar(1.0, -c.phase) * amp;
                }
            }
        }
        return value;
    };

    const auto block = [&](const std::vector<OccupationVector>& states) {
        const Eigen::Index n = static_cast<Eigen::Index>(states.size());
        DenseMatrix mat(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                mat(i, j) = element(states[static_cast<std::size_t>(i)],
                                    states[static_cast<std::size_t>(j)]);
            }
        }
        return mat;
    };

    const auto solve_block = [](const DenseMatrix& mat, const DenseVector& rhs,
                                const char* which) {
        Eigen::FullPivLU<DenseMatrix> lu(mat);
        if (!lu.isInvertible()) {
            throw SolverError(std::string("amplitude_oracle: singular ") + which +
                              " system (resonant configuration)");
        }
        return DenseVector(lu.solve(rhs));
    };

    // Order eps: drive lifts the vacuum into the driven one-photon state.
    const Eigen::Index n1 = static_cast<Eigen::Index>(one_photon.size());
    DenseVector rhs1 = DenseVector::Zero(n1);
    rhs1(drive) = Complex(-eps, 0.0);
    const DenseVector c1 = solve_block(block(one_photon), rhs1, "one-photon");

    // Order eps^2: drive lifts one-photon amplitudes into the two-photon manifold.
    const Eigen::Index n2 = static_cast<Eigen::Index>(two_photon.size());
    DenseVector rhs2 = DenseVector::Zero(n2);
    for (Eigen::Index p = 0; p < n2; ++p) {
        for (Eigen::Index k = 0; k < n1; ++k) {
            OccupationVector lifted = one_photon[static_cast<std::size_t>(k)];
            ++lifted[static_cast<std::size_t>(drive)];
            if (lifted == two_photon[static_cast<std::size_t>(p)]) {
                const double amp = std::sqrt(static_cast<double>(
                    one_photon[static_cast<std::size_t>(k)][static_cast<std::size_t>(drive)] + 1));
                rhs2(p) -= eps * amp * c1(k);
            }
        }
    }
    const DenseVector c2 = n2 > 0 ? solve_block(block(two_photon), rhs2, "two-photon")
                                  : DenseVector();

    solution.amplitudes.emplace(OccupationVector(static_cast<std::size_t>(n_modes), 0),
                                Complex(1.0, 0.0));
    for (Eigen::Index k = 0; k < n1; ++k) {
        solution.amplitudes.emplace(one_photon[static_cast<std::size_t>(k)], c1(k));
    }
    for (Eigen::Index p = 0; p < n2; ++p) {
        solution.amplitudes.emplace(two_photon[static_cast<std::size_t>(p)], c2(p));
    }
    return solution;
}

} // namespace kerrflux
