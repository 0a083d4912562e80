#include "kerrflux/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace kerrflux {

namespace {

constexpr double kPopulationFloor = 1e-14;

void check_mode(const FockBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.mode_count()) {
        throw UsageError("observable requested for mode index " + std::to_string(mode) +
                         " outside the basis");
    }
}

// <o^dag o> and <o^dag o^dag o o> are diagonal in the number basis, so both
// reduce to sums over diagonal populations.
double diagonal_moment(const SteadyState& ss, const FockBasis& basis, int mode, bool pair) {
    check_mode(basis, mode);
    double total = 0.0;
    for (Eigen::Index k = 0; k < basis.dimension(); ++k) {
        const double n = basis.state(k)[static_cast<std::size_t>(mode)];
        const double weight = pair ? n * (n - 1.0) : n;
        if (weight != 0.0) total += weight * ss.rho(k, k).real();
    }
    return total;
}

void check_pair(const SteadyState& ss, const PortPair& pair, const NetworkModel& network) {
    if (network.mode_index(pair.input_mode) < 0 || network.mode_index(pair.output_mode) < 0) {
        throw UsageError("port pair " + pair.input_mode + "->" + pair.output_mode +
                         " references a mode absent from the network");
    }
    if (!(ss.drive_epsilon > 0.0) || ss.driven_mode.empty()) {
        throw UsageError("steady state carries no drive; transmission and g2 are undefined");
    }
    if (ss.driven_mode != pair.input_mode) {
        throw UsageError("steady state was driven at '" + ss.driven_mode +
                         "' but the pair expects input at '" + pair.input_mode + "'");
    }
}

} // namespace

double mean_photon(const SteadyState& ss, const FockBasis& basis, int mode) {
    return diagonal_moment(ss, basis, mode, false);
}

double pair_moment(const SteadyState& ss, const FockBasis& basis, int mode) {
    return diagonal_moment(ss, basis, mode, true);
}

double transmission(const SteadyState& ss, const PortPair& pair,
                    const NetworkModel& network, const FockBasis& basis) {
    check_pair(ss, pair, network);
    const double gamma_in = network.mode(pair.input_mode).gamma;
    const double gamma_out = network.mode(pair.output_mode).gamma;
    const int out = network.mode_index(pair.output_mode);
    const double n_out = mean_photon(ss, basis, out);
    return gamma_in * gamma_out * n_out / (ss.drive_epsilon * ss.drive_epsilon);
}

double g2_zero(const SteadyState& ss, const PortPair& pair,
               const NetworkModel& network, const FockBasis& basis) {
    check_pair(ss, pair, network);
    const int out = network.mode_index(pair.output_mode);
    const double n_out = mean_photon(ss, basis, out);
    if (n_out < kPopulationFloor) {
        throw CorrelationUndefined("g2 at '" + pair.output_mode + "' is undefined: output " +
                                   "population " + std::to_string(n_out) + " below 1e-14");
    }
    return pair_moment(ss, basis, out) / (n_out * n_out);
}

ObservableSet observable_set(const SteadyState& ss, const NetworkModel& network,
                             const FockBasis& basis) {
    if (ss.driven_mode.empty()) {
        throw UsageError("observable_set requires a driven steady state");
    }
    ObservableSet set;
    set.input_mode = ss.driven_mode;
    set.epsilon = ss.drive_epsilon;
    set.detuning = network.drive.detuning;
    set.residual = ss.residual;
    for (const CouplingSpec& c : network.couplings) set.flux_fingerprint += c.phase;

    const double gamma_in = network.mode(ss.driven_mode).gamma;
    for (std::size_t m = 0; m < network.modes.size(); ++m) {
        const std::string& label = network.modes[m].label;
        const double n = mean_photon(ss, basis, static_cast<int>(m));
        const double nn = pair_moment(ss, basis, static_cast<int>(m));
        set.mean_photon[label] = n;
        set.pair_moment[label] = nn;
        if (label == ss.driven_mode) continue;
        set.transmission[label] =
            gamma_in * network.modes[m].gamma * n / (set.epsilon * set.epsilon);
        set.g2[label] = n >= kPopulationFloor ? nn / (n * n)
                                              : std::numeric_limits<double>::quiet_NaN();
    }
    return set;
}

NonreciprocitySummary nonreciprocity_summary(const ObservableSet& forward,
                                             const ObservableSet& backward,
                                             const PortPair& pair) {
    if (forward.input_mode != pair.input_mode || backward.input_mode != pair.output_mode) {
        throw UsageError("nonreciprocity_summary: solves are driven at '" + forward.input_mode +
                         "'/'" + backward.input_mode + "' but the pair is " + pair.input_mode +
                         "->" + pair.output_mode);
    }
    if (forward.detuning != backward.detuning ||
        forward.flux_fingerprint != backward.flux_fingerprint ||
        forward.epsilon != backward.epsilon) {
        throw UsageError("nonreciprocity_summary: forward and backward solves are from "
                         "different scan points");
    }

    const auto lookup = [](const ObservableSet& set, const std::map<std::string, double>& map,
                           const std::string& key) {
        const auto it = map.find(key);
        if (it == map.end()) {
            throw UsageError("nonreciprocity_summary: no observable toward '" + key +
                             "' in the solve driven at '" + set.input_mode + "'");
        }
        return it->second;
    };

    NonreciprocitySummary summary;
    summary.t_forward = lookup(forward, forward.transmission, pair.output_mode);
    summary.t_backward = lookup(backward, backward.transmission, pair.input_mode);
    summary.g2_forward = lookup(forward, forward.g2, pair.output_mode);
    summary.g2_backward = lookup(backward, backward.g2, pair.input_mode);

    constexpr double inf = std::numeric_limits<double>::infinity();
    summary.isolation_db = summary.t_backward < 1e-14
                               ? inf
                               : 10.0 * std::log10(summary.t_forward / summary.t_backward);
    summary.contrast =
        summary.g2_forward < 1e-14 ? inf : summary.g2_backward / summary.g2_forward;
    return summary;
}

CirculatorSummary circulator_summary(const std::map<std::string, ObservableSet>& solves,
                                     std::span<const std::string> ring_order) {
    if (ring_order.size() != 3) {
        throw UsageError("circulator_summary expects a three-mode ring order");
    }
    for (const std::string& port : ring_order) {
        if (!solves.contains(port)) {
            throw UsageError("circulator_summary: missing solve for drive port '" + port + "'");
        }
    }

    const auto value = [&](const std::map<std::string, double> ObservableSet::* field,
                           std::size_t in, std::size_t out) {
        const ObservableSet& set = solves.at(ring_order[in]);
        const auto& map = set.*field;
        const auto it = map.find(ring_order[out]);
        if (it == map.end()) {
            throw UsageError("circulator_summary: solve for '" + ring_order[in] +
                             "' lacks the output '" + ring_order[out] + "'");
        }
        return it->second;
    };

    // ccw follows the ring order a->b->c->a; cw is the reverse orientation.
    const std::array<std::pair<std::size_t, std::size_t>, 3> ccw{{{0, 1}, {1, 2}, {2, 0}}};
    const std::array<std::pair<std::size_t, std::size_t>, 3> cw{{{0, 2}, {2, 1}, {1, 0}}};

    const auto aggregate = [&](const std::map<std::string, double> ObservableSet::* field,
                               const auto& pairs) {
        std::array<double, 3> values{};
        for (std::size_t i = 0; i < 3; ++i) {
            values[i] = value(field, pairs[i].first, pairs[i].second);
        }
        const double mean = (values[0] + values[1] + values[2]) / 3.0;
        const double hi = *std::max_element(values.begin(), values.end());
        const double lo = *std::min_element(values.begin(), values.end());
        const double scale = std::max({std::abs(values[0]), std::abs(values[1]),
                                       std::abs(values[2]), 1e-300});
        return std::pair<double, double>{mean, (hi - lo) / scale};
    };

    CirculatorSummary summary;
    const auto [t_ccw, t_ccw_dev] = aggregate(&ObservableSet::transmission, ccw);
    const auto [t_cw, t_cw_dev] = aggregate(&ObservableSet::transmission, cw);
    const auto [g2_ccw, g2_ccw_dev] = aggregate(&ObservableSet::g2, ccw);
    const auto [g2_cw, g2_cw_dev] = aggregate(&ObservableSet::g2, cw);
    summary.t_ccw = t_ccw;
    summary.t_cw = t_cw;
    summary.g2_ccw = g2_ccw;
    summary.g2_cw = g2_cw;
    summary.t_deviation = std::max(t_ccw_dev, t_cw_dev);
    summary.g2_deviation = std::max(g2_ccw_dev, g2_cw_dev);
    return summary;
}

} // namespace kerrflux
