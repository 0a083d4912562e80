#pragma once

#include <map>
#include <string>
#include <vector>

#include "kerrflux/fockspace.hpp"
#include "kerrflux/model.hpp"
#include "kerrflux/types.hpp"

namespace kerrflux {

// Vectorization is column-stacking throughout: vec(rho)[i + D*j] = rho(i,j),
// so A rho B -> kron(B^T, A) vec(rho). The convention is validated by the
// trace functional being a left null vector of every generator.
SparseMatrix sparse_kron(const SparseMatrix& a, const SparseMatrix& b);

// -i (kron(I, H) - kron(H^T, I))
SparseMatrix vectorized_commutator(const SparseMatrix& hamiltonian);

// kron(conj(o), o) - 1/2 (kron(I, o^dag o) + kron((o^dag o)^T, I)); the rate
// is folded into the jump operator by the caller.
SparseMatrix vectorized_dissipator(const SparseMatrix& jump_op);

struct DecayChannel {
    std::string label;
    double rate = 0.0;
};

// Lindblad generator acting on vectorized density matrices.
struct Liouvillian {
    Eigen::Index hilbert_dimension = 0;
    SparseMatrix generator; // (D*D) x (D*D)
    std::vector<DecayChannel> decay_channels;
    std::string driven_mode; // empty when the drive amplitude is zero
    double drive_epsilon = 0.0;
};

Liouvillian build_liouvillian(const SparseMatrix& hamiltonian,
                              const NetworkModel& network,
                              const FockBasis& basis);

struct SolverInfo {
    std::string method;
    int iterations = 0;
    double seconds = 0.0;
};

struct SteadyState {
    DenseMatrix rho;
    double residual = 0.0;       // ||generator * vec(rho)||_2
    double min_eigenvalue = 0.0; // of (rho + rho^dag)/2
    SolverInfo solver_info;
    std::string driven_mode; // carried so observables can enforce port pairing
    double drive_epsilon = 0.0;
};

// Solves generator vec(rho) = 0 with trace(rho) = 1 by replacing the first
// scalar equation with the trace row and factorizing the square sparse
// system (the first row is the redundant one: the trace functional makes it
// a combination of the other diagonal rows). Verifies trace, Hermiticity and
// positivity before returning.
SteadyState steady_state(const Liouvillian& liouvillian);

// Classical fixed-step 4th-order integration of the vectorized generator.
// Every eighth step is re-taken as two half steps; if the discrepancy
// exceeds 1e-8 the step size is too coarse and a SolverError is thrown.
DenseMatrix evolve(const Liouvillian& liouvillian, const DenseMatrix& rho0,
                   double t_final, double dt);

// Perturbative steady-state amplitudes under the non-Hermitian Hamiltonian
// H - (i/2) sum_o gamma_o n_o, order by order in the drive amplitude.
// Independent of the sparse-operator machinery: the one- and two-excitation
// blocks are assembled densely from the network description alone.
struct AmplitudeSolution {
    std::map<OccupationVector, Complex> amplitudes; // total photons <= 2
    std::vector<std::string> mode_labels;
    int drive_order = 2;
    double epsilon = 0.0;
    std::vector<std::string> warnings;

    double mean_photon(int mode) const; // leading order: one-photon amplitudes
    double pair_moment(int mode) const; // sum_s n(n-1) |amp(s)|^2 (two-photon)
};

AmplitudeSolution amplitude_oracle(const NetworkModel& network);

} // namespace kerrflux
