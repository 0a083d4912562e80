#include "kerrflux/effective.hpp"

#include <algorithm>
#include <cmath>

#include "kerrflux/dynamics.hpp"
#include "kerrflux/observables.hpp"

namespace kerrflux {

namespace {

const CouplingSpec* find_coupling(const NetworkModel& net, const std::string& u,
                                  const std::string& v) {
    for (const CouplingSpec& c : net.couplings) {
        if ((c.from_mode == u && c.to_mode == v) || (c.from_mode == v && c.to_mode == u)) {
            return &c;
        }
    }
    return nullptr;
}

// Phase picked up hopping u -> v across the link; the stored phase applies
// in the stored direction.
double hop_phase(const CouplingSpec& c, const std::string& u) {
    return c.from_mode == u ? c.phase : -c.phase;
}

} // namespace

EffectiveModel adiabatic_eliminate(const NetworkModel& network) {
    if (network.modes.size() != 3 || network.couplings.size() != 3) {
        throw UsageError("adiabatic_eliminate requires a three-mode ring");
    }

    // The eliminated mode is the fastest one; it must not carry the drive.
    std::size_t aux = 0;
    for (std::size_t m = 1; m < 3; ++m) {
        if (network.modes[m].gamma > network.modes[aux].gamma) aux = m;
    }
    const ModeSpec& fast = network.modes[aux];
    if (fast.label == network.drive.target_mode) {
        throw UsageError("adiabatic_eliminate: the fast mode '" + fast.label +
                         "' carries the drive and cannot be eliminated");
    }

    std::vector<std::size_t> kept;
    for (std::size_t m = 0; m < 3; ++m) {
        if (m != aux) kept.push_back(m);
    }
    const ModeSpec& mode_a = network.modes[kept[0]];
    const ModeSpec& mode_b = network.modes[kept[1]];

    const CouplingSpec* ab = find_coupling(network, mode_a.label, mode_b.label);
    const CouplingSpec* ac = find_coupling(network, mode_a.label, fast.label);
    const CouplingSpec* bc = find_coupling(network, mode_b.label, fast.label);
    if (ab == nullptr || ac == nullptr || bc == nullptr) {
        throw UsageError("adiabatic_eliminate: the three modes do not form a ring");
    }

    double slow_scale = std::max(mode_a.gamma, mode_b.gamma);
    for (const CouplingSpec& c : network.couplings) {
        slow_scale = std::max(slow_scale, c.strength);
    }
    if (fast.gamma < 5.0 * slow_scale) {
        throw UsageError("adiabatic_eliminate: gamma of '" + fast.label + "' (" +
                         std::to_string(fast.gamma) + ") does not dominate the remaining " +
                         "scales (" + std::to_string(slow_scale) + ") by the factor-5 margin");
    }

    const double omega_spread =
        std::max({network.modes[0].omega, network.modes[1].omega, network.modes[2].omega}) -
        std::min({network.modes[0].omega, network.modes[1].omega, network.modes[2].omega});
    if (omega_spread > 1e-12) {
        throw UsageError("adiabatic_eliminate assumes degenerate mode frequencies");
    }

    // Total cycle flux oriented a -> b -> c -> a.
    const double flux = hop_phase(*ab, mode_a.label) + hop_phase(*bc, mode_b.label) +
                        hop_phase(*ac, fast.label);

    EffectiveModel eff;
    eff.mode_a = mode_a.label;
    eff.mode_b = mode_b.label;
    eff.eliminated_mode = fast.label;
    eff.direct_hopping = ab->strength;
    eff.flux = flux;
    eff.j_induced = 2.0 * ac->strength * bc->strength / fast.gamma;
    eff.gamma_a_induced = 4.0 * ac->strength * ac->strength / fast.gamma;
    eff.gamma_b_induced = 4.0 * bc->strength * bc->strength / fast.gamma;
    const Complex i_unit(0.0, 1.0);
    eff.j_forward = eff.direct_hopping - i_unit * eff.j_induced * std::polar(1.0, -flux);
    eff.j_backward = eff.direct_hopping - i_unit * eff.j_induced * std::polar(1.0, flux);

    eff.base.modes = {mode_a, mode_b};
    eff.base.couplings = {{mode_a.label, mode_b.label, ab->strength, 0.0}};
    eff.base.drive = network.drive;
    eff.base.truncation.per_mode_caps = {
        network.truncation.per_mode_caps[kept[0]],
        network.truncation.per_mode_caps[kept[1]],
    };
    if (network.truncation.total_cap) {
        eff.base.truncation.total_cap =
            std::min(*network.truncation.total_cap,
                     eff.base.truncation.per_mode_caps[0] + eff.base.truncation.per_mode_caps[1]);
    }
    return eff;
}

SweepResult effective_observables(const EffectiveModel& eff, const FockBasis& basis,
                                  std::span<const double> detuning_grid) {
    if (basis.mode_count() != 2) {
        throw UsageError("effective_observables expects a two-mode basis");
    }
    eff.base.validate();

    // One collective jump carries both the induced decays and the
    // anti-Hermitian directional part of the hoppings.
    const SparseMatrix op_a = annihilation(basis, 0);
    const SparseMatrix op_b = annihilation(basis, 1);
    const SparseMatrix collective =
        prune(SparseMatrix(std::sqrt(eff.gamma_b_induced) * op_b +
                           Complex(std::sqrt(eff.gamma_a_induced), 0.0) *
                               std::polar(1.0, -eff.flux) * op_a));
    const SparseMatrix collective_dissipator = vectorized_dissipator(collective);

    SweepResult result;
    result.variable = SweepVariable::detuning;
    result.grid.assign(detuning_grid.begin(), detuning_grid.end());
    result.pairs = {{eff.mode_a, eff.mode_b}, {eff.mode_b, eff.mode_a}};
    result.rows.resize(result.grid.size());

    for (std::size_t g = 0; g < result.grid.size(); ++g) {
        result.rows[g].resize(result.pairs.size());
        for (std::size_t p = 0; p < result.pairs.size(); ++p) {
            const PortPair& pair = result.pairs[p];
            NetworkModel net = eff.base;
            net.drive.target_mode = pair.input_mode;
            net.drive.detuning = result.grid[g];

            Liouvillian liouvillian = build_liouvillian(build_hamiltonian(net, basis), net, basis);
            liouvillian.generator = prune(SparseMatrix(liouvillian.generator + collective_dissipator));
            liouvillian.decay_channels.push_back({"collective(" + eff.eliminated_mode + ")", 1.0});

            const SteadyState ss = steady_state(liouvillian);
            const ObservableSet set = observable_set(ss, net, basis);

            PairObservables& cell = result.rows[g][p];
            cell.transmission = set.transmission.at(pair.output_mode);
            cell.g2 = set.g2.at(pair.output_mode);
            cell.mean_photon_out = set.mean_photon.at(pair.output_mode);
            cell.residual = ss.residual;
            cell.solved = true;
        }
    }
    return result;
}

} // namespace kerrflux
