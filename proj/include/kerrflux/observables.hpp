#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "kerrflux/dynamics.hpp"
#include "kerrflux/fockspace.hpp"
#include "kerrflux/model.hpp"

namespace kerrflux {

// Directed source -> detector pair; the input mode must carry the drive of
// the steady state being analyzed.
struct PortPair {
    std::string input_mode;
    std::string output_mode;
};

double mean_photon(const SteadyState& ss, const FockBasis& basis, int mode);
double pair_moment(const SteadyState& ss, const FockBasis& basis, int mode);

// T = gamma_in gamma_out <o_out^dag o_out> / eps^2. Throws UsageError when
// the steady state was not driven at pair.input_mode.
double transmission(const SteadyState& ss, const PortPair& pair,
                    const NetworkModel& network, const FockBasis& basis);

// g2(0) = <o^dag o^dag o o> / <o^dag o>^2 at the output mode. Throws
// CorrelationUndefined when the output population is below 1e-14.
double g2_zero(const SteadyState& ss, const PortPair& pair,
               const NetworkModel& network, const FockBasis& basis);

// All single-solve observables for one driven steady state. transmission and
// g2 are keyed by output mode (the input is the drive port); undefined
// correlations are stored as NaN so sweep rows stay complete.
struct ObservableSet {
    std::string input_mode;
    double epsilon = 0.0;
    double detuning = 0.0;
    double flux_fingerprint = 0.0; // sum of coupling phases; scan-point guard
    double residual = 0.0;
    std::map<std::string, double> mean_photon;
    std::map<std::string, double> pair_moment;
    std::map<std::string, double> transmission;
    std::map<std::string, double> g2;
};

ObservableSet observable_set(const SteadyState& ss, const NetworkModel& network,
                             const FockBasis& basis);

struct NonreciprocitySummary {
    double t_forward = 0.0;
    double t_backward = 0.0;
    double isolation_db = 0.0; // 10 log10(T_fwd / T_bwd); +inf below 1e-14
    double g2_forward = 0.0;
    double g2_backward = 0.0;
    double contrast = 0.0; // g2_bwd / g2_fwd; +inf below 1e-14
};

// forward must be driven at pair.input_mode and backward at pair.output_mode,
// on the same network and scan point.
NonreciprocitySummary nonreciprocity_summary(const ObservableSet& forward,
                                             const ObservableSet& backward,
                                             const PortPair& pair);

struct CirculatorSummary {
    double t_cw = 0.0;
    double t_ccw = 0.0;
    double g2_cw = 0.0;
    double g2_ccw = 0.0;
    // Max relative pairwise deviation within each orientation triple; a
    // permutation-symmetry diagnostic.
    double t_deviation = 0.0;
    double g2_deviation = 0.0;
};

// solves maps each drive port of the ring (in ring order a, b, c) to its
// ObservableSet. ccw aggregates a->b, b->c, c->a; cw the reverse triple.
CirculatorSummary circulator_summary(const std::map<std::string, ObservableSet>& solves,
                                     std::span<const std::string> ring_order);

} // namespace kerrflux
