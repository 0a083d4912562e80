#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "kerrflux/types.hpp"

namespace kerrflux {

using OccupationVector = std::vector<int>;

// Photon-number truncation for a multimode Fock space. Every mode keeps at
// most per_mode_caps[m] photons; total_cap, when set, additionally bounds the
// total photon number across modes.
struct TruncationPolicy {
    std::vector<int> per_mode_caps;
    std::optional<int> total_cap;

    void validate(int mode_count) const; // throws ConfigError
    bool operator==(const TruncationPolicy&) const = default;
};

// Truncated multimode Fock basis. State ordering is graded and deterministic:
// ascending total photon number, and within a grade states with more photons
// in earlier modes come first, so operator matrices are bit-reproducible
// across runs.
class FockBasis {
public:
    static FockBasis build(int mode_count, TruncationPolicy policy);

    int mode_count() const { return mode_count_; }
    Eigen::Index dimension() const { return static_cast<Eigen::Index>(states_.size()); }
    const std::vector<OccupationVector>& states() const { return states_; }
    const OccupationVector& state(Eigen::Index k) const { return states_[static_cast<std::size_t>(k)]; }
    const TruncationPolicy& policy() const { return policy_; }

    // Index of an occupation vector, or nullopt when the state is outside
    // the truncated space.
    std::optional<Eigen::Index> find(const OccupationVector& occ) const;
    // As find(), but absence is a bug.
    Eigen::Index index_of(const OccupationVector& occ) const;

private:
    FockBasis() = default;

    int mode_count_ = 0;
    TruncationPolicy policy_;
    std::vector<OccupationVector> states_;
    struct OccHash {
        std::size_t operator()(const OccupationVector& v) const;
    };
    std::unordered_map<OccupationVector, Eigen::Index, OccHash> index_;
};

FockBasis build_basis(int mode_count, TruncationPolicy policy);

// Ladder and number operators as sparse matrices on the truncated basis.
// annihilation maps |n> to sqrt(n_mode)|n - e_mode>; creation is its adjoint.
SparseMatrix annihilation(const FockBasis& basis, int mode);
SparseMatrix creation(const FockBasis& basis, int mode);
SparseMatrix number_operator(const FockBasis& basis, int mode);
// Diagonal n_mode (n_mode - 1), the two-photon Kerr shift.
SparseMatrix kerr_term(const FockBasis& basis, int mode);

// Conjugate transpose.
SparseMatrix dag(const SparseMatrix& op);

// One scaled operator product; factors multiply as matrices, so the
// rightmost factor acts first. Wrap a factor in dag() for its adjoint.
struct OperatorTerm {
    Complex coefficient{1.0, 0.0};
    std::vector<SparseMatrix> factors;
};

// Exact sparse sum of scaled products. Entries below kAssemblyDropTol after
// assembly are discarded.
SparseMatrix compose(Eigen::Index dimension, std::span<const OperatorTerm> terms);

SparseMatrix prune(SparseMatrix op, double tol = kAssemblyDropTol);

} // namespace kerrflux
