#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace kerrflux {

using Complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;

// Entries below this magnitude are dropped after operator assembly; they are
// numeric noise, not physics.
inline constexpr double kAssemblyDropTol = 1e-15;

// Bad user input: invalid truncation caps, unknown mode labels, malformed
// configuration files, unknown preset names.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// API misuse that would otherwise produce silently wrong physics, e.g.
// reading a transmission coefficient from a steady state whose drive sits on
// a different port.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure: singular constrained system, residual above tolerance,
// integrator step error, singular oracle system.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Correlation requested at a port whose output population is numerically
// zero; the ratio g2 is undefined there.
struct CorrelationUndefined : SolverError {
    using SolverError::SolverError;
};

// Inconsistent dimensions or other conditions that indicate a bug rather
// than bad input.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

} // namespace kerrflux
