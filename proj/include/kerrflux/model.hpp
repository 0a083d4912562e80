#pragma once

#include <string>
#include <vector>

#include "kerrflux/fockspace.hpp"
#include "kerrflux/types.hpp"

namespace kerrflux {

// Rates and frequencies are in units of the reference linewidth gamma unless
// absolute values are supplied (any nonzero omega switches RWA validation on).
struct ModeSpec {
    std::string label;
    double omega = 0.0;  // resonance frequency; 0 in dimensionless mode
    double kerr_u = 0.0; // Kerr strength U >= 0
    double gamma = 1.0;  // decay rate > 0

    bool operator==(const ModeSpec&) const = default;
};

// Hopping g e^{i phase} o_to^dag o_from + h.c.; a photon moving from_mode ->
// to_mode picks up e^{+i phase}.
struct CouplingSpec {
    std::string from_mode;
    std::string to_mode;
    double strength = 0.0;  // >= 0
    double phase = 0.0;     // radians in [0, 2pi)

    bool operator==(const CouplingSpec&) const = default;
};

// Coherent probe epsilon (o^dag + o) on target_mode, in the frame rotating at
// the probe frequency; detuning = omega_target - omega_probe.
struct DriveSpec {
    std::string target_mode;
    double epsilon = 0.0;
    double detuning = 0.0;

    bool operator==(const DriveSpec&) const = default;
};

// Declarative description of a driven dissipative mode network; the single
// source of truth for a scenario.
struct NetworkModel {
    std::vector<ModeSpec> modes;
    std::vector<CouplingSpec> couplings;
    DriveSpec drive;
    TruncationPolicy truncation;

    int mode_index(const std::string& label) const; // -1 when absent
    const ModeSpec& mode(const std::string& label) const;

    // Aggregates all violations into one ConfigError.
    void validate() const;

    bool operator==(const NetworkModel&) const = default;
};

// H = sum_o Delta_o n_o + sum_o U_o n_o(n_o-1)
//   + sum_links (g e^{i phi} o_to^dag o_from + h.c.) + eps (o_d^dag + o_d),
// Hermitian by construction. Per-mode detunings are
// Delta_o = drive.detuning + (omega_o - omega_target).
SparseMatrix build_hamiltonian(const NetworkModel& network, const FockBasis& basis);

// Observably equivalent network in which every spanning-tree link carries
// phase 0 and each independent cycle's flux sits on its single chord link.
// Links already carrying phase 0 are preferred for the tree, so canonical
// networks pass through unchanged.
NetworkModel gauge_canonicalize(const NetworkModel& network);

// Indices into network.couplings of the canonical flux-carrying links (the
// chords of the zero-phase-preferring spanning tree), one per independent
// cycle.
std::vector<std::size_t> flux_links(const NetworkModel& network);

// Total synthetic flux around the cycle closed by the given chord coupling,
// following the orientation of the tree path plus the chord.
double cycle_flux(const NetworkModel& network, std::size_t chord_index);

// Kerr strength U = hbar omega^2 c n2 / (n^2 v_eff) for a microresonator,
// SI inputs, result in rad/s.
double kerr_from_material(double omega, double n2, double n_linear, double v_eff);

// Parameter sets of the scenarios studied in this package, gamma = 1 units.
NetworkModel preset(const std::string& name);
const std::vector<std::string>& preset_names();

// Separated-timescale checks for reservoir-engineered configurations; each
// inequality violated by less than a factor of 5 yields a warning string.
std::vector<std::string> validate_timescales(const NetworkModel& network);

} // namespace kerrflux
