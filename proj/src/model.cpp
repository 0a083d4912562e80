#include "kerrflux/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

namespace kerrflux {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_phase(double phase) {
    double p = std::fmod(phase, kTwoPi);
    if (p < 0.0) p += kTwoPi;
    if (p == kTwoPi) p = 0.0;
    return p;
}

} // namespace

int NetworkModel::mode_index(const std::string& label) const {
    for (std::size_t m = 0; m < modes.size(); ++m) {
        if (modes[m].label == label) return static_cast<int>(m);
    }
    return -1;
}

const ModeSpec& NetworkModel::mode(const std::string& label) const {
    const int m = mode_index(label);
    if (m < 0) throw ConfigError("unknown mode '" + label + "'");
    return modes[static_cast<std::size_t>(m)];
}

void NetworkModel::validate() const {
    std::vector<std::string> issues;

    if (modes.empty()) issues.push_back("at least one mode is required");
    std::set<std::string> labels;
    for (const ModeSpec& m : modes) {
        if (m.label.empty()) issues.push_back("mode label must be nonempty");
        if (!labels.insert(m.label).second) {
            issues.push_back("duplicate mode label '" + m.label + "'");
        }
        if (!(m.gamma > 0.0)) {
            issues.push_back("mode '" + m.label + "': gamma must be > 0");
        }
        if (m.kerr_u < 0.0) {
            issues.push_back("mode '" + m.label + "': kerr must be >= 0");
        }
    }

    std::set<std::pair<std::string, std::string>> seen_pairs;
    for (const CouplingSpec& c : couplings) {
        if (mode_index(c.from_mode) < 0) {
            issues.push_back("coupling references undeclared mode '" + c.from_mode + "'");
        }
        if (mode_index(c.to_mode) < 0) {
            issues.push_back("coupling references undeclared mode '" + c.to_mode + "'");
        }
        if (c.from_mode == c.to_mode) {
            issues.push_back("coupling endpoints must differ (got '" + c.from_mode + "' twice)");
        }
        if (c.strength < 0.0) {
            issues.push_back("coupling " + c.from_mode + "-" + c.to_mode +
                             ": strength must be >= 0");
        }
        auto key = std::minmax(c.from_mode, c.to_mode);
        if (!seen_pairs.insert(key).second) {
            issues.push_back("more than one coupling between '" + key.first + "' and '" +
                             key.second + "'");
        }
    }

    if (mode_index(drive.target_mode) < 0) {
        issues.push_back("drive targets undeclared mode '" + drive.target_mode + "'");
    }
    if (!(drive.epsilon > 0.0)) {
        issues.push_back("drive epsilon must be > 0");
    }

    try {
        truncation.validate(static_cast<int>(modes.size()));
    } catch (const ConfigError& e) {
        issues.push_back(e.what());
    }

    // RWA sanity only applies when absolute frequencies are given.
    const bool any_omega = std::any_of(modes.begin(), modes.end(),
                                       [](const ModeSpec& m) { return m.omega != 0.0; });
    if (any_omega) {
        const bool all_omega = std::all_of(modes.begin(), modes.end(),
                                           [](const ModeSpec& m) { return m.omega > 0.0; });
        if (!all_omega) {
            issues.push_back("mode frequencies must be all zero (dimensionless) or all positive");
        } else {
            double min_omega = modes.front().omega;
            for (const ModeSpec& m : modes) min_omega = std::min(min_omega, m.omega);
            for (const CouplingSpec& c : couplings) {
                if (c.strength * 10.0 > min_omega) {
                    issues.push_back("coupling " + c.from_mode + "-" + c.to_mode +
                                     " violates the rotating-wave regime (strength " +
                                     std::to_string(c.strength) + " not << min frequency " +
                                     std::to_string(min_omega) + ")");
                }
            }
        }
    }

    if (!issues.empty()) {
        std::ostringstream msg;
        msg << "invalid network:";
        for (const std::string& s : issues) msg << "\n  - " << s;
        throw ConfigError(msg.str());
    }
}

SparseMatrix build_hamiltonian(const NetworkModel& network, const FockBasis& basis) {
    if (basis.mode_count() != static_cast<int>(network.modes.size())) {
        throw InternalError("basis has " + std::to_string(basis.mode_count()) +
                            " modes but the network has " +
                            std::to_string(network.modes.size()));
    }
    const int target = network.mode_index(network.drive.target_mode);
    if (target < 0) {
        throw ConfigError("drive targets undeclared mode '" + network.drive.target_mode + "'");
    }

    const std::size_t n_modes = network.modes.size();
    std::vector<SparseMatrix> lower(n_modes);
    std::vector<SparseMatrix> raise(n_modes);
    for (std::size_t m = 0; m < n_modes; ++m) {
        lower[m] = annihilation(basis, static_cast<int>(m));
        raise[m] = dag(lower[m]);
    }

    std::vector<OperatorTerm> terms;
    const double omega_target = network.modes[static_cast<std::size_t>(target)].omega;
    for (std::size_t m = 0; m < n_modes; ++m) {
        const ModeSpec& mode = network.modes[m];
        const double delta = network.drive.detuning + (mode.omega - omega_target);
        if (delta != 0.0) {
            terms.push_back({Complex(delta, 0.0), {number_operator(basis, static_cast<int>(m))}});
        }
        if (mode.kerr_u != 0.0) {
            terms.push_back({Complex(mode.kerr_u, 0.0), {kerr_term(basis, static_cast<int>(m))}});
        }
    }

    for (const CouplingSpec& c : network.couplings) {
        const int from = network.mode_index(c.from_mode);
        const int to = network.mode_index(c.to_mode);
        if (from < 0 || to < 0) {
            throw ConfigError("coupling references undeclared mode '" +
                              (from < 0 ? c.from_mode : c.to_mode) + "'");
        }
        // Annihilate before creating: with a total-photon cap the projected
        // product o_to^dag o_from is exact in this order, while the reverse
        // order loses the hop amplitudes of the top grade.
        const Complex amp = c.strength * std::polar(1.0, c.phase);
        terms.push_back({amp, {raise[static_cast<std::size_t>(to)], lower[static_cast<std::size_t>(from)]}});
        terms.push_back({std::conj(amp), {raise[static_cast<std::size_t>(from)], lower[static_cast<std::size_t>(to)]}});
    }

    if (network.drive.epsilon != 0.0) {
        const Complex eps(network.drive.epsilon, 0.0);
        terms.push_back({eps, {raise[static_cast<std::size_t>(target)]}});
        terms.push_back({eps, {lower[static_cast<std::size_t>(target)]}});
    }

    return compose(basis.dimension(), terms);
}

namespace {

// Spanning tree that prefers phase-0 links, so already-canonical networks
// keep their flux placement. Returns per-coupling tree membership.
std::vector<bool> spanning_tree(const NetworkModel& network) {
    const std::size_t n = network.modes.size();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto root = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            x = parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
        }
        return x;
    };

    std::vector<std::size_t> order(network.couplings.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return (network.couplings[i].phase == 0.0) > (network.couplings[j].phase == 0.0);
    });

    std::vector<bool> in_tree(network.couplings.size(), false);
    for (std::size_t k : order) {
        const CouplingSpec& c = network.couplings[k];
        const int u = network.mode_index(c.from_mode);
        const int v = network.mode_index(c.to_mode);
        if (u < 0 || v < 0) throw ConfigError("coupling references undeclared mode");
        const int ru = root(u);
        const int rv = root(v);
        if (ru != rv) {
            parent[static_cast<std::size_t>(ru)] = rv;
            in_tree[k] = true;
        }
    }
    return in_tree;
}

// Mode phase shifts theta that zero every tree-link phase: a link (u -> v,
// p) carries effective phase p + theta_u - theta_v after redefining each
// annihilation operator by e^{i theta}.
std::vector<double> tree_gauge(const NetworkModel& network, const std::vector<bool>& in_tree) {
    const std::size_t n = network.modes.size();
    std::vector<std::vector<std::pair<int, std::size_t>>> adjacency(n);
    for (std::size_t k = 0; k < network.couplings.size(); ++k) {
        if (!in_tree[k]) continue;
        const int u = network.mode_index(network.couplings[k].from_mode);
        const int v = network.mode_index(network.couplings[k].to_mode);
        adjacency[static_cast<std::size_t>(u)].push_back({v, k});
        adjacency[static_cast<std::size_t>(v)].push_back({u, k});
    }

    std::vector<double> theta(n, 0.0);
    std::vector<bool> visited(n, false);
    for (std::size_t start = 0; start < n; ++start) {
        if (visited[start]) continue;
        visited[start] = true;
        std::queue<int> frontier;
        frontier.push(static_cast<int>(start));
        while (!frontier.empty()) {
            const int u = frontier.front();
            frontier.pop();
            for (const auto& [v, k] : adjacency[static_cast<std::size_t>(u)]) {
                if (visited[static_cast<std::size_t>(v)]) continue;
                visited[static_cast<std::size_t>(v)] = true;
                const CouplingSpec& c = network.couplings[k];
                const bool forward = network.mode_index(c.from_mode) == u;
                theta[static_cast<std::size_t>(v)] =
                    forward ? theta[static_cast<std::size_t>(u)] + c.phase
                            : theta[static_cast<std::size_t>(u)] - c.phase;
                frontier.push(v);
            }
        }
    }
    return theta;
}

} // namespace

NetworkModel gauge_canonicalize(const NetworkModel& network) {
    const std::vector<bool> in_tree = spanning_tree(network);
    const std::vector<double> theta = tree_gauge(network, in_tree);

    NetworkModel out = network;
    for (std::size_t k = 0; k < out.couplings.size(); ++k) {
        CouplingSpec& c = out.couplings[k];
        if (in_tree[k]) {
            c.phase = 0.0;
            continue;
        }
        const int u = network.mode_index(c.from_mode);
        const int v = network.mode_index(c.to_mode);
        c.phase = wrap_phase(c.phase + theta[static_cast<std::size_t>(u)] -
                             theta[static_cast<std::size_t>(v)]);
    }
    return out;
}

std::vector<std::size_t> flux_links(const NetworkModel& network) {
    const std::vector<bool> in_tree = spanning_tree(network);
    std::vector<std::size_t> chords;
    for (std::size_t k = 0; k < in_tree.size(); ++k) {
        if (!in_tree[k]) chords.push_back(k);
    }
    return chords;
}

double cycle_flux(const NetworkModel& network, std::size_t chord_index) {
    if (chord_index >= network.couplings.size()) {
        throw InternalError("cycle_flux: coupling index out of range");
    }
    const std::vector<bool> in_tree = spanning_tree(network);
    if (in_tree[chord_index]) {
        throw UsageError("cycle_flux: coupling " + std::to_string(chord_index) +
                         " is a tree link, not a flux-carrying chord");
    }
    const std::vector<double> theta = tree_gauge(network, in_tree);
    const CouplingSpec& c = network.couplings[chord_index];
    const int u = network.mode_index(c.from_mode);
    const int v = network.mode_index(c.to_mode);
    return c.phase + theta[static_cast<std::size_t>(u)] - theta[static_cast<std::size_t>(v)];
}

double kerr_from_material(double omega, double n2, double n_linear, double v_eff) {
    if (!(omega > 0.0) || !(n2 > 0.0) || !(n_linear > 0.0) || !(v_eff > 0.0)) {
        throw ConfigError("kerr_from_material: all arguments must be positive");
    }
    constexpr double hbar = 1.054571817e-34;  // J s
    constexpr double c_light = 299792458.0;   // m / s
    return hbar * omega * omega * c_light * n2 / (n_linear * n_linear * v_eff);
}

namespace {

NetworkModel make_network(std::vector<ModeSpec> modes, std::vector<CouplingSpec> couplings,
                          DriveSpec drive) {
    NetworkModel net;
    net.modes = std::move(modes);
    net.couplings = std::move(couplings);
    net.drive = drive;
    net.truncation.per_mode_caps.assign(net.modes.size(), 3);
    net.truncation.total_cap = 3;
    return net;
}

} // namespace

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "fig2_asym_molecule", "fig4_cyclic3",       "fig5_reservoir",
        "fig6_sym_molecule",  "fig7_circulator",    "fig8_fourmode_asym",
        "fig9_fourmode_sym",
    };
    return names;
}

NetworkModel preset(const std::string& name) {
    const double half_pi = kPi / 2.0;
    const DriveSpec probe{"a", 0.01, 0.0};

    if (name == "fig2_asym_molecule") {
        return make_network({{"a", 0.0, 5.0, 1.0}, {"b", 0.0, 0.0, 1.0}},
                            {{"a", "b", 0.5, 0.0}}, probe);
    }
    if (name == "fig4_cyclic3") {
        return make_network(
            {{"a", 0.0, 5.0, 1.0}, {"b", 0.0, 0.0, 1.0}, {"c", 0.0, 0.0, 1.0}},
            {{"a", "b", 0.5, 0.0}, {"b", "c", 0.5, 0.0}, {"c", "a", 0.5, half_pi}}, probe);
    }
    if (name == "fig5_reservoir") {
        return make_network(
            {{"a", 0.0, 5.0, 1.0}, {"b", 0.0, 0.0, 1.0}, {"c", 0.0, 0.0, 100.0}},
            {{"a", "b", 0.5, 0.0}, {"b", "c", 5.0, 0.0}, {"c", "a", 5.0, half_pi}}, probe);
    }
    if (name == "fig6_sym_molecule") {
        return make_network(
            {{"a", 0.0, 5.0, 1.0}, {"b", 0.0, 5.0, 1.0}, {"c", 0.0, 0.0, 1.0}},
            {{"a", "b", 0.5, 0.0}, {"b", "c", 0.5, 0.0}, {"c", "a", 0.5, half_pi}}, probe);
    }
    if (name == "fig7_circulator") {
        return make_network(
            {{"a", 0.0, 5.0, 1.0}, {"b", 0.0, 5.0, 1.0}, {"c", 0.0, 5.0, 1.0}},
            {{"a", "b", 0.5, 0.0}, {"b", "c", 0.5, 0.0}, {"c", "a", 0.5, half_pi}}, probe);
    }
    if (name == "fig8_fourmode_asym") {
        return make_network({{"a", 0.0, 5.0, 1.0},
                             {"b", 0.0, 0.0, 1.0},
                             {"c", 0.0, 0.0, 1e-3},
                             {"d", 0.0, 0.0, 16.0}},
                            {{"a", "d", 2.0, 0.0},
                             {"c", "a", 0.5, half_pi},
                             {"b", "c", 0.5, 0.0},
                             {"d", "b", 2.0, 0.0}},
                            probe);
    }
    if (name == "fig9_fourmode_sym") {
        NetworkModel net = preset("fig8_fourmode_asym");
        net.modes[1].kerr_u = 5.0;
        return net;
    }

    std::ostringstream msg;
    msg << "unknown preset '" << name << "'; valid names:";
    for (const std::string& n : preset_names()) msg << " " << n;
    throw ConfigError(msg.str());
}

namespace {

bool is_simple_cycle(const NetworkModel& net) {
    if (net.couplings.size() != net.modes.size()) return false;
    std::vector<int> degree(net.modes.size(), 0);
    for (const CouplingSpec& c : net.couplings) {
        const int u = net.mode_index(c.from_mode);
        const int v = net.mode_index(c.to_mode);
        if (u < 0 || v < 0) return false;
        ++degree[static_cast<std::size_t>(u)];
        ++degree[static_cast<std::size_t>(v)];
    }
    return std::all_of(degree.begin(), degree.end(), [](int d) { return d == 2; });
}

std::string format_ratio(double fast, double slow) {
    std::ostringstream s;
    s.precision(6);
    s << fast << " vs " << slow;
    return s.str();
}

} // namespace

std::vector<std::string> validate_timescales(const NetworkModel& network) {
    std::vector<std::string> warnings;

    if (network.modes.size() == 3 && is_simple_cycle(network)) {
        // Reservoir-engineered ring: the fastest mode must dominate every
        // other rate and coupling for adiabatic elimination to hold.
        std::size_t aux = 0;
        for (std::size_t m = 1; m < 3; ++m) {
            if (network.modes[m].gamma >= network.modes[aux].gamma) aux = m;
        }
        double others = 0.0;
        for (std::size_t m = 0; m < 3; ++m) {
            if (m != aux) others = std::max(others, network.modes[m].gamma);
        }
        for (const CouplingSpec& c : network.couplings) {
            others = std::max(others, c.strength);
        }
        const double gamma_aux = network.modes[aux].gamma;
        if (gamma_aux < 5.0 * others) {
            warnings.push_back("adiabatic elimination of mode '" + network.modes[aux].label +
                               "' is invalid here: its decay rate does not dominate the "
                               "remaining rates and couplings (" +
                               format_ratio(gamma_aux, others) + ", factor-5 margin)");
        }
    }

    if (network.modes.size() == 4 && is_simple_cycle(network)) {
        // Indirectly coupled pair: gamma_fast >> min{G, gamma_mid} >> gamma_slow.
        std::size_t fast = 0, slow = 0;
        for (std::size_t m = 1; m < 4; ++m) {
            if (network.modes[m].gamma > network.modes[fast].gamma) fast = m;
            if (network.modes[m].gamma < network.modes[slow].gamma) slow = m;
        }
        double mid = std::numeric_limits<double>::infinity();
        for (std::size_t m = 0; m < 4; ++m) {
            if (m != fast && m != slow) mid = std::min(mid, network.modes[m].gamma);
        }
        for (const CouplingSpec& c : network.couplings) {
            mid = std::min(mid, c.strength);
        }
        const double gamma_fast = network.modes[fast].gamma;
        const double gamma_slow = network.modes[slow].gamma;
        if (gamma_fast < 5.0 * mid) {
            warnings.push_back("mode '" + network.modes[fast].label +
                               "' is not fast enough against the intermediate scales (" +
                               format_ratio(gamma_fast, mid) + ", factor-5 margin)");
        }
        if (mid < 5.0 * gamma_slow) {
            warnings.push_back("mode '" + network.modes[slow].label +
                               "' is not slow enough against the intermediate scales (" +
                               format_ratio(mid, gamma_slow) + ", factor-5 margin)");
        }
    }

    return warnings;
}

} // namespace kerrflux
