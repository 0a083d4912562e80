#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "kerrflux/model.hpp"
#include "kerrflux/observables.hpp"

namespace kerrflux {

enum class SweepVariable { detuning, phase };

std::string to_string(SweepVariable v);

// Grid specification. A detuning sweep scans the probe detuning; a phase
// sweep scans the flux on the network's single canonical flux link and
// requires exactly one independent cycle. One steady-state solve per drive
// port per grid point.
struct SweepSpec {
    SweepVariable variable = SweepVariable::detuning;
    double start = -10.0;
    double stop = 10.0;
    int points = 401;
    std::vector<std::string> drive_ports;

    std::vector<double> grid() const;
    void validate(const NetworkModel& network) const; // throws ConfigError

    bool operator==(const SweepSpec&) const = default;
};

// Observables of one (grid point, ordered port pair) cell.
struct PairObservables {
    double transmission = 0.0;
    double g2 = 0.0;
    double mean_photon_out = 0.0;
    double residual = 0.0;
    bool solved = false;
    std::string error;
};

struct SweepResult {
    SweepVariable variable = SweepVariable::detuning;
    std::vector<double> grid;
    std::vector<PortPair> pairs; // per input port, every other mode as output
    std::vector<std::vector<PairObservables>> rows; // [grid index][pair index]

    bool all_solved() const;
    std::vector<std::size_t> failed_grid_indices() const;
};

// Rebuilds the Hamiltonian and solves the steady state for every grid point
// and drive port. Grid points are independent work items; with workers > 1
// they run concurrently, and rows are always emitted in grid order. A failed
// solve marks its cells and the sweep continues.
SweepResult run_sweep(const NetworkModel& network, const SweepSpec& sweep,
                      int workers = 1);

// Deterministic CSV: scan column, then per ordered pair T, g2, n_out,
// residual, then a status column; 17-significant-digit floats, LF endings.
// Byte-identical across runs on identical inputs.
void write_csv(const SweepResult& result, std::ostream& out);
std::string to_csv(const SweepResult& result);

} // namespace kerrflux
