#include "kerrflux/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace kerrflux {

void TruncationPolicy::validate(int mode_count) const {
    if (mode_count < 1) {
        throw ConfigError("truncation: mode count must be at least 1");
    }
    if (static_cast<int>(per_mode_caps.size()) != mode_count) {
        throw ConfigError("truncation: expected " + std::to_string(mode_count) +
                          " per-mode caps, got " + std::to_string(per_mode_caps.size()));
    }
    for (std::size_t m = 0; m < per_mode_caps.size(); ++m) {
        if (per_mode_caps[m] < 1) {
            throw ConfigError("truncation: per-mode cap for mode " + std::to_string(m) +
                              " must be >= 1 (states |0>,|1> at minimum)");
        }
    }
    if (total_cap) {
        if (*total_cap < 1) {
            throw ConfigError("truncation: total cap must be >= 1");
        }
        const long cap_sum = std::accumulate(per_mode_caps.begin(), per_mode_caps.end(), 0L);
        if (*total_cap > cap_sum) {
            throw ConfigError("truncation: total cap " + std::to_string(*total_cap) +
                              " exceeds the sum of per-mode caps " + std::to_string(cap_sum));
        }
    }
}

std::size_t FockBasis::OccHash::operator()(const OccupationVector& v) const {
    std::size_t h = 14695981039346656037ull;
    for (int x : v) {
        h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull;
        h *= 1099511628211ull;
    }
    return h;
}

FockBasis FockBasis::build(int mode_count, TruncationPolicy policy) {
    policy.validate(mode_count);

    FockBasis basis;
    basis.mode_count_ = mode_count;
    basis.policy_ = std::move(policy);

    // Enumerate admissible occupation vectors by depth-first counting.
    OccupationVector occ(static_cast<std::size_t>(mode_count), 0);
    std::vector<OccupationVector> states;
    const auto& caps = basis.policy_.per_mode_caps;
    const int total_cap = basis.policy_.total_cap
                              ? *basis.policy_.total_cap
                              : std::accumulate(caps.begin(), caps.end(), 0);
    auto enumerate = [&](auto&& self, int mode, int used) -> void {
        if (mode == mode_count) {
            states.push_back(occ);
            return;
        }
        const int room = std::min(caps[static_cast<std::size_t>(mode)], total_cap - used);
        for (int n = 0; n <= room; ++n) {
            occ[static_cast<std::size_t>(mode)] = n;
            self(self, mode + 1, used + n);
        }
        occ[static_cast<std::size_t>(mode)] = 0;
    };
    enumerate(enumerate, 0, 0);

    // Graded ordering: total photon number ascending, then within a grade the
    // state with more photons in the earliest differing mode first, matching
    // e.g. (0,0),(1,0),(0,1),(2,0),(1,1),(0,2).
    std::sort(states.begin(), states.end(),
              [](const OccupationVector& x, const OccupationVector& y) {
                  const int tx = std::accumulate(x.begin(), x.end(), 0);
                  const int ty = std::accumulate(y.begin(), y.end(), 0);
                  if (tx != ty) return tx < ty;
                  return x > y; // lexicographically descending within a grade
              });

    basis.states_ = std::move(states);
    basis.index_.reserve(basis.states_.size());
    for (std::size_t k = 0; k < basis.states_.size(); ++k) {
        basis.index_.emplace(basis.states_[k], static_cast<Eigen::Index>(k));
    }
    return basis;
}

std::optional<Eigen::Index> FockBasis::find(const OccupationVector& occ) const {
    const auto it = index_.find(occ);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Eigen::Index FockBasis::index_of(const OccupationVector& occ) const {
    const auto idx = find(occ);
    if (!idx) throw InternalError("occupation vector not present in basis");
    return *idx;
}

FockBasis build_basis(int mode_count, TruncationPolicy policy) {
    return FockBasis::build(mode_count, std::move(policy));
}

namespace {

void check_mode(const FockBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.mode_count()) {
        throw ConfigError("mode index " + std::to_string(mode) + " out of range for " +
                          std::to_string(basis.mode_count()) + "-mode basis");
    }
}

} // namespace

SparseMatrix annihilation(const FockBasis& basis, int mode) {
    check_mode(basis, mode);
    const Eigen::Index dim = basis.dimension();
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(dim));
    for (Eigen::Index col = 0; col < dim; ++col) {
        const OccupationVector& s = basis.state(col);
        const int n = s[static_cast<std::size_t>(mode)];
        if (n < 1) continue;
        OccupationVector t = s;
        --t[static_cast<std::size_t>(mode)];
        if (const auto row = basis.find(t)) {
            entries.emplace_back(*row, col, Complex(std::sqrt(static_cast<double>(n)), 0.0));
        }
    }
    SparseMatrix op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseMatrix creation(const FockBasis& basis, int mode) {
    return dag(annihilation(basis, mode));
}

SparseMatrix number_operator(const FockBasis& basis, int mode) {
    check_mode(basis, mode);
    const Eigen::Index dim = basis.dimension();
    std::vector<Triplet> entries;
    for (Eigen::Index k = 0; k < dim; ++k) {
        const int n = basis.state(k)[static_cast<std::size_t>(mode)];
        if (n > 0) entries.emplace_back(k, k, Complex(n, 0.0));
    }
    SparseMatrix op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseMatrix kerr_term(const FockBasis& basis, int mode) {
    check_mode(basis, mode);
    const Eigen::Index dim = basis.dimension();
    std::vector<Triplet> entries;
    for (Eigen::Index k = 0; k < dim; ++k) {
        const int n = basis.state(k)[static_cast<std::size_t>(mode)];
        if (n > 1) entries.emplace_back(k, k, Complex(n * (n - 1), 0.0));
    }
    SparseMatrix op(dim, dim);
    op.setFromTriplets(entries.begin(), entries.end());
    return op;
}

SparseMatrix dag(const SparseMatrix& op) {
    return SparseMatrix(op.adjoint());
}

SparseMatrix prune(SparseMatrix op, double tol) {
    op.prune([tol](Eigen::Index, Eigen::Index, const Complex& v) {
        return std::abs(v) > tol;
    });
    op.makeCompressed();
    return op;
}

SparseMatrix compose(Eigen::Index dimension, std::span<const OperatorTerm> terms) {
    SparseMatrix sum(dimension, dimension);
    for (const OperatorTerm& term : terms) {
        SparseMatrix product(dimension, dimension);
        product.setIdentity();
        for (const SparseMatrix& factor : term.factors) {
            if (factor.rows() != dimension || factor.cols() != dimension) {
                throw InternalError("compose: factor dimension " +
                                    std::to_string(factor.rows()) + "x" +
                                    std::to_string(factor.cols()) + " does not match " +
                                    std::to_string(dimension));
            }
            product = SparseMatrix(product * factor);
        }
        sum += SparseMatrix(term.coefficient * product);
    }
    return prune(std::move(sum));
}

} // namespace kerrflux
