// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Reproduces the preset scenarios end to end and checks the published
// qualitative and quantitative targets at fixed tolerances.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "kerrflux/config.hpp"
#include "kerrflux/effective.hpp"
#include "kerrflux/observables.hpp"
#include "kerrflux/sweep.hpp"

using namespace kerrflux;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct PhysicalityStats {
    double worst_trace = 0.0;
    double worst_herm = 0.0;
    double worst_min_eig = 0.0; // most negative
    double worst_residual = 0.0;
    long solves = 0;
} g_stats;

struct Checks {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& label) {
        if (!condition) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += label;
        }
    }
};

ObservableSet solve_point(NetworkModel net, const FockBasis& basis) {
    const Liouvillian liouvillian =
        build_liouvillian(build_hamiltonian(net, basis), net, basis);
    const SteadyState ss = steady_state(liouvillian);
    g_stats.worst_trace = std::max(g_stats.worst_trace,
                                   std::abs(ss.rho.trace() - Complex(1.0, 0.0)));
    g_stats.worst_herm = std::max(g_stats.worst_herm,
                                  (ss.rho - ss.rho.adjoint()).cwiseAbs().maxCoeff());
    g_stats.worst_min_eig = std::min(g_stats.worst_min_eig, ss.min_eigenvalue);
    g_stats.worst_residual = std::max(g_stats.worst_residual, ss.residual);
    ++g_stats.solves;
    return observable_set(ss, net, basis);
}

ObservableSet solve_port(const NetworkModel& base, const FockBasis& basis,
                         const std::string& port, double detuning) {
    NetworkModel net = base;
    net.drive.target_mode = port;
    net.drive.detuning = detuning;
    return solve_point(std::move(net), basis);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

bool report(int number, const std::string& title, const Checks& checks,
            const std::string& values) {
    std::cout << (checks.ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << title
              << " -- " << values;
    if (!checks.ok) std::cout << " | failed: " << checks.detail;
    std::cout << "\n" << std::flush;
    return checks.ok;
}

// --- criterion 1: fig2 asymmetric molecule ------------------------------

bool criterion1() {
    const NetworkModel net = preset("fig2_asym_molecule");
    SweepSpec sweep = preset_sweep("fig2_asym_molecule"); // -10..10, 401 pts, a and b
    const SweepResult result = run_sweep(net, sweep, 4);

    const auto pair_of = [&](const std::string& in, const std::string& out) {
        for (std::size_t p = 0; p < result.pairs.size(); ++p) {
            if (result.pairs[p].input_mode == in && result.pairs[p].output_mode == out) return p;
        }
        throw InternalError("pair not found");
    };
    const std::size_t ab = pair_of("a", "b");
    const std::size_t ba = pair_of("b", "a");

    Checks checks;
    double g2_ab_0 = 0.0, g2_ba_0 = 0.0;
    double worst_t_asym = 0.0;
    bool bunching_ab = false, bunching_ba = false, interference_dip = false;
    for (std::size_t g = 0; g < result.grid.size(); ++g) {
        const double delta = result.grid[g];
        const PairObservables& fwd = result.rows[g][ab];
        const PairObservables& bwd = result.rows[g][ba];
        if (delta == 0.0) {
            g2_ab_0 = fwd.g2;
            g2_ba_0 = bwd.g2;
        }
        if (std::abs(delta) <= 2.0) {
            worst_t_asym = std::max(worst_t_asym,
                                    std::abs(fwd.transmission - bwd.transmission) /
                                        fwd.transmission);
        }
        // Two-photon resonance and interference windows at |Delta| = U, U/2.
        if (std::abs(std::abs(delta) - 5.0) <= 1.0) {
            if (fwd.g2 > 10.0) bunching_ab = true;
            if (bwd.g2 > 10.0) bunching_ba = true;
        }
        if (std::abs(std::abs(delta) - 2.5) <= 1.0 && fwd.g2 < 0.1) interference_dip = true;
    }

    checks.expect(std::abs(g2_ab_0 - 0.45) <= 0.05, "g2_ab(0) = 0.45 +/- 0.05");
    checks.expect(g2_ba_0 < 0.1, "g2_ba(0) < 0.1");
    checks.expect(worst_t_asym < 0.05, "relative T asymmetry < 0.05 on [-2, 2]");
    checks.expect(bunching_ab && bunching_ba, "both g2 exceed 10 near the two-photon resonance");
    checks.expect(interference_dip, "g2_ab < 0.1 near the interference point");

    std::ostringstream values;
    values << "g2_ab(0)=" << fmt(g2_ab_0) << " g2_ba(0)=" << fmt(g2_ba_0)
           << " maxTasym=" << fmt(worst_t_asym);
    return report(1, "fig2 nonreciprocal blockade without nonreciprocal transmission", checks,
                  values.str());
}

// --- criterion 2: fig4 cyclic three-mode system --------------------------

bool criterion2() {
    const NetworkModel base = preset("fig4_cyclic3");
    const FockBasis basis = build_basis(3, base.truncation);

    Checks checks;
    NetworkModel at_half = base; // preset default phi = pi/2
    const ObservableSet fwd = solve_port(at_half, basis, "a", 0.0);
    const ObservableSet bwd = solve_port(at_half, basis, "b", 0.0);
    checks.expect(bwd.transmission.at("a") >= 0.9, "T_ba >= 0.9 at phi = pi/2");
    checks.expect(fwd.transmission.at("b") <= 0.1, "T_ab <= 0.1 at phi = pi/2");
    checks.expect(bwd.g2.at("a") < 0.1, "g2_ba < 0.1 at phi = pi/2");
    checks.expect(fwd.g2.at("b") > 10.0, "g2_ab > 10 at phi = pi/2");

    std::ostringstream values;
    values << "phi=pi/2: T_ba=" << fmt(bwd.transmission.at("a"))
           << " T_ab=" << fmt(fwd.transmission.at("b")) << " g2_ba=" << fmt(bwd.g2.at("a"))
           << " g2_ab=" << fmt(fwd.g2.at("b"));

    for (double phi : {0.0, kPi}) {
        NetworkModel net = base;
        net.couplings[2].phase = phi;
        const ObservableSet f = solve_port(net, basis, "a", 0.0);
        const ObservableSet b = solve_port(net, basis, "b", 0.0);
        const double asym = std::abs(b.transmission.at("a") - f.transmission.at("b"));
        checks.expect(asym < 0.02, "reciprocal T at phi = " + fmt(phi));
        checks.expect(b.g2.at("a") < f.g2.at("b"), "g2_ba < g2_ab at phi = " + fmt(phi));
    }
    return report(2, "fig4 flux-controlled nonreciprocity", checks, values.str());
}

// --- criterion 3: fig5 reservoir vs adiabatic elimination -----------------

bool criterion3() {
    const NetworkModel full = preset("fig5_reservoir");
    const FockBasis basis3 = build_basis(3, full.truncation);

    const EffectiveModel eff = adiabatic_eliminate(full);
    const FockBasis basis2 = build_basis(2, eff.base.truncation);

    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(-2.0 + 0.2 * i);
    const SweepResult reduced = effective_observables(eff, basis2, grid);

    Checks checks;
    double worst = 0.0;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const ObservableSet fwd = solve_port(full, basis3, "a", grid[g]);
        const ObservableSet bwd = solve_port(full, basis3, "b", grid[g]);
        worst = std::max(worst, std::abs(fwd.transmission.at("b") -
                                         reduced.rows[g][0].transmission));
        worst = std::max(worst, std::abs(bwd.transmission.at("a") -
                                         reduced.rows[g][1].transmission));
    }
    checks.expect(worst < 0.05, "full vs effective T within 5% absolute");

    const ObservableSet fwd0 = solve_port(full, basis3, "a", 0.0);
    const ObservableSet bwd0 = solve_port(full, basis3, "b", 0.0);
    checks.expect(bwd0.transmission.at("a") >= 0.9, "full T_ba >= 0.9");
    checks.expect(fwd0.transmission.at("b") <= 0.1, "full T_ab <= 0.1");
    checks.expect(std::abs(eff.j_forward) <= 1e-15, "j_forward = 0 at phi = pi/2");
    checks.expect(std::abs(eff.j_backward - Complex(2 * eff.direct_hopping, 0.0)) <= 1e-15,
                  "j_backward = 2J at phi = pi/2");

    std::ostringstream values;
    values << "max|T_full-T_eff|=" << fmt(worst) << " T_ba=" << fmt(bwd0.transmission.at("a"))
           << " |j_fwd|=" << fmt(std::abs(eff.j_forward));
    return report(3, "fig5 reservoir engineering vs adiabatic elimination", checks, values.str());
}

// --- criterion 4: fig6 symmetric molecule, bidirectional blockade ---------

bool criterion4() {
    const NetworkModel base = preset("fig6_sym_molecule");
    const FockBasis basis = build_basis(3, base.truncation);

    Checks checks;
    for (double phi : {0.25 * kPi, 0.5 * kPi, 0.75 * kPi}) {
        NetworkModel net = base;
        net.couplings[2].phase = phi;
        const ObservableSet fwd = solve_port(net, basis, "a", 0.0);
        const ObservableSet bwd = solve_port(net, basis, "b", 0.0);
        checks.expect(bwd.g2.at("a") < fwd.g2.at("b"),
                      "g2_ba < g2_ab at phi = " + fmt(phi / kPi) + "pi");
    }
    for (double phi : {1.25 * kPi, 1.5 * kPi, 1.75 * kPi}) {
        NetworkModel net = base;
        net.couplings[2].phase = phi;
        const ObservableSet fwd = solve_port(net, basis, "a", 0.0);
        const ObservableSet bwd = solve_port(net, basis, "b", 0.0);
        checks.expect(bwd.g2.at("a") > fwd.g2.at("b"),
                      "g2_ba > g2_ab at phi = " + fmt(phi / kPi) + "pi");
    }

    double worst_exchange = 0.0;
    for (double phi : {0.0, kPi}) {
        NetworkModel net = base;
        net.couplings[2].phase = phi;
        const ObservableSet fwd = solve_port(net, basis, "a", 0.0);
        const ObservableSet bwd = solve_port(net, basis, "b", 0.0);
        const double rel = std::abs(fwd.g2.at("b") - bwd.g2.at("a")) /
                           std::max(fwd.g2.at("b"), bwd.g2.at("a"));
        worst_exchange = std::max(worst_exchange, rel);
    }
    checks.expect(worst_exchange < 1e-6, "exchange symmetry at phi = 0, pi within 1e-6");

    return report(4, "fig6 direction of blockade follows the flux half-plane", checks,
                  "exchange dev=" + fmt(worst_exchange));
}

// --- criterion 5: fig7 circulator ----------------------------------------

CirculatorSummary circulator_at(const NetworkModel& base, const FockBasis& basis, double phi) {
    NetworkModel net = base;
    net.couplings[2].phase = phi;
    std::map<std::string, ObservableSet> solves;
    for (const std::string port : {"a", "b", "c"}) {
        solves.emplace(port, solve_port(net, basis, port, 0.0));
    }
    const std::vector<std::string> ring = {"a", "b", "c"};
    return circulator_summary(solves, ring);
}

bool criterion5() {
    const NetworkModel base = preset("fig7_circulator");
    const FockBasis basis = build_basis(3, base.truncation);

    Checks checks;
    double worst_dev = 0.0;
    for (int i = 1; i <= 19; i += 2) { // phi = 0.1 pi ... 1.9 pi
        const CirculatorSummary summary = circulator_at(base, basis, 0.1 * i * kPi);
        worst_dev = std::max({worst_dev, summary.t_deviation, summary.g2_deviation});
    }
    checks.expect(worst_dev < 1e-8, "permutation symmetry diagnostic < 1e-8");

    const CirculatorSummary at_half = circulator_at(base, basis, kPi / 2);
    checks.expect(at_half.t_cw >= 0.9, "T_cw >= 0.9 at phi = pi/2");
    checks.expect(at_half.t_ccw <= 0.1, "T_ccw <= 0.1 at phi = pi/2");
    checks.expect(at_half.g2_cw < 0.1, "g2_cw < 0.1 at phi = pi/2");
    checks.expect(at_half.g2_ccw > 10.0, "g2_ccw > 10 at phi = pi/2");

    const CirculatorSummary at_three_half = circulator_at(base, basis, 3 * kPi / 2);
    const auto swapped = [](double x, double y) {
        return std::abs(x - y) <= 1e-9 * std::max({std::abs(x), std::abs(y), 1.0});
    };
    checks.expect(swapped(at_three_half.t_ccw, at_half.t_cw) &&
                      swapped(at_three_half.t_cw, at_half.t_ccw) &&
                      swapped(at_three_half.g2_ccw, at_half.g2_cw) &&
                      swapped(at_three_half.g2_cw, at_half.g2_ccw),
                  "orientation swaps exactly at phi = 3pi/2");

    std::ostringstream values;
    values << "T_cw=" << fmt(at_half.t_cw) << " T_ccw=" << fmt(at_half.t_ccw)
           << " g2_cw=" << fmt(at_half.g2_cw) << " g2_ccw=" << fmt(at_half.g2_ccw)
           << " dev=" << fmt(worst_dev);
    return report(5, "fig7 circulator with nonreciprocal blockade", checks, values.str());
}

// --- criterion 6: figs 8-9 indirectly coupled pair ------------------------

bool criterion6() {
    Checks checks;
    std::ostringstream values;
    for (const std::string name : {"fig8_fourmode_asym", "fig9_fourmode_sym"}) {
        const NetworkModel base = preset(name);
        const FockBasis basis = build_basis(4, base.truncation);

        const double step = 0.1;
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(-2.0 + step * i);

        std::vector<ObservableSet> fwd, bwd;
        for (double delta : grid) {
            fwd.push_back(solve_port(base, basis, "a", delta));
            bwd.push_back(solve_port(base, basis, "b", delta));
        }
        std::size_t peak_ab = 0, peak_ba = 0;
        for (std::size_t g = 1; g < grid.size(); ++g) {
            if (fwd[g].transmission.at("b") > fwd[peak_ab].transmission.at("b")) peak_ab = g;
            if (bwd[g].transmission.at("a") > bwd[peak_ba].transmission.at("a")) peak_ba = g;
        }
        checks.expect(std::abs(grid[peak_ab] + 0.5) <= step + 1e-12,
                      name + ": T_ab peak within one step of -1/2");
        checks.expect(std::abs(grid[peak_ba] - 0.5) <= step + 1e-12,
                      name + ": T_ba peak within one step of +1/2");
        checks.expect(fwd[peak_ab].transmission.at("b") >= 0.9, name + ": T_ab peak >= 0.9");
        checks.expect(bwd[peak_ba].transmission.at("a") >= 0.9, name + ": T_ba peak >= 0.9");

        values << name << ": peaks at " << fmt(grid[peak_ab]) << "/" << fmt(grid[peak_ba])
               << " T=" << fmt(fwd[peak_ab].transmission.at("b")) << "/"
               << fmt(bwd[peak_ba].transmission.at("a")) << " ";

        if (name == "fig9_fourmode_sym") {
            bool blockaded_forward = false;
            for (std::size_t g = 0; g < grid.size(); ++g) {
                if (std::abs(grid[g] + 0.5) <= step + 1e-12 &&
                    fwd[g].transmission.at("b") >= 0.9 && fwd[g].g2.at("b") < 0.1) {
                    blockaded_forward = true;
                }
            }
            checks.expect(blockaded_forward,
                          "fig9: g2_ab < 0.1 with T_ab >= 0.9 near Delta = -1/2");
            values << "g2_ab(-0.5)=" << fmt(fwd[peak_ab].g2.at("b"));
        }
    }
    return report(6, "figs 8-9 indirect coupling peaks and blockade", checks, values.str());
}

// --- criterion 7: three-way oracle equivalence ----------------------------

bool criterion7() {
    Checks checks;
    double worst_n = 0.0, worst_g2 = 0.0;
    for (const std::string& name : preset_names()) {
        const NetworkModel net = preset(name); // drive on a, Delta = 0, phi = pi/2 defaults
        const int n_modes = static_cast<int>(net.modes.size());
        const FockBasis basis = build_basis(n_modes, net.truncation);
        const Liouvillian liouvillian =
            build_liouvillian(build_hamiltonian(net, basis), net, basis);
        const SteadyState ss = steady_state(liouvillian);

        const double dt = name == "fig5_reservoir" ? 1e-3
                          : net.modes.size() == 4  ? 2e-3
                                                   : 5e-3;
        DenseMatrix rho0 = DenseMatrix::Zero(basis.dimension(), basis.dimension());
        rho0(0, 0) = Complex(1.0, 0.0);
        const DenseMatrix evolved = evolve(liouvillian, rho0, 50.0, dt);

        const AmplitudeSolution oracle = amplitude_oracle(net);
        const double eps = net.drive.epsilon;
        const double bright_floor = eps * eps / 200.0;

        for (int m = 0; m < n_modes; ++m) {
            double n_ss = 0.0, nn_ss = 0.0, n_ev = 0.0, nn_ev = 0.0;
            for (Eigen::Index k = 0; k < basis.dimension(); ++k) {
                const double occ = basis.state(k)[static_cast<std::size_t>(m)];
                n_ss += occ * ss.rho(k, k).real();
                nn_ss += occ * (occ - 1.0) * ss.rho(k, k).real();
                n_ev += occ * evolved(k, k).real();
                nn_ev += occ * (occ - 1.0) * evolved(k, k).real();
            }
            // steady_state vs evolve: every mode.
            const double dn_ev = std::abs(n_ev - n_ss) / std::max(n_ss, 1e-300);
            worst_n = std::max(worst_n, dn_ev);
            checks.expect(dn_ev < 1e-3, name + ": evolve <n> mode " + std::to_string(m));
            if (n_ss >= 1e-14 && nn_ss / (n_ss * n_ss) > 1e-12) {
                const double g2_ss = nn_ss / (n_ss * n_ss);
                const double g2_ev = nn_ev / (n_ev * n_ev);
                const double dg_ev = std::abs(g2_ev - g2_ss) / g2_ss;
                worst_g2 = std::max(worst_g2, dg_ev);
                checks.expect(dg_ev < 1e-2, name + ": evolve g2 mode " + std::to_string(m));
            }
            // oracle: bright modes only (the perturbative pure-state ansatz
            // does not carry the jump-recycled population that dominates
            // interference-quenched ports).
            if (n_ss >= bright_floor) {
                const double n_or = oracle.mean_photon(m);
                const double dn_or = std::abs(n_or - n_ss) / n_ss;
                worst_n = std::max(worst_n, dn_or);
                checks.expect(dn_or < 1e-3, name + ": oracle <n> mode " + std::to_string(m));
                const double g2_ss = nn_ss / (n_ss * n_ss);
                const double g2_or = oracle.pair_moment(m) / (n_or * n_or);
                const double dg_or = std::abs(g2_or - g2_ss) / g2_ss;
                worst_g2 = std::max(worst_g2, dg_or);
                checks.expect(dg_or < 1e-2, name + ": oracle g2 mode " + std::to_string(m));
            }
        }
    }
    std::ostringstream values;
    values << "worst dn=" << fmt(worst_n) << " worst dg2=" << fmt(worst_g2);
    return report(7, "steady state, long-time evolution and amplitude oracle agree", checks,
                  values.str());
}

// --- criterion 8: physicality of every steady state -----------------------

bool criterion8() {
    Checks checks;
    checks.expect(g_stats.worst_trace <= 1e-10, "trace within 1e-10");
    checks.expect(g_stats.worst_herm <= 1e-10, "Hermiticity within 1e-10");
    checks.expect(g_stats.worst_min_eig >= -1e-8, "min eigenvalue >= -1e-8");
    checks.expect(g_stats.worst_residual <= 1e-8, "residual <= 1e-8");
    std::ostringstream values;
    values << g_stats.solves << " solves: |tr-1|<=" << fmt(g_stats.worst_trace)
           << " herm<=" << fmt(g_stats.worst_herm) << " mineig>=" << fmt(g_stats.worst_min_eig)
           << " res<=" << fmt(g_stats.worst_residual);
    return report(8, "physicality of every steady state", checks, values.str());
}

// --- criterion 9: symmetry suite ------------------------------------------

bool criterion9() {
    Checks checks;

    // Gauge invariance: redistribute the fig4 link phases at fixed total flux.
    {
        const NetworkModel base = preset("fig4_cyclic3");
        const FockBasis basis = build_basis(3, base.truncation);
        NetworkModel shuffled = base;
        shuffled.couplings[0].phase = 0.9;
        shuffled.couplings[1].phase = 5.1;
        shuffled.couplings[2].phase = kPi / 2 - 6.0; // total unchanged
        double worst = 0.0;
        for (const std::string port : {"a", "b"}) {
            const ObservableSet ref = solve_port(base, basis, port, 0.0);
            const ObservableSet alt = solve_port(shuffled, basis, port, 0.0);
            for (const auto& [out, t] : ref.transmission) {
                worst = std::max(worst, std::abs(t - alt.transmission.at(out)));
                const double g_ref = ref.g2.at(out);
                const double g_alt = alt.g2.at(out);
                if (std::isnan(g_ref) || std::isnan(g_alt)) continue;
                worst = std::max(worst,
                                 std::abs(g_ref - g_alt) / std::max(1.0, std::abs(g_ref)));
            }
        }
        checks.expect(worst < 1e-10, "gauge invariance within 1e-10");
    }

    // Flux periodicity: phi and phi + 2 pi.
    {
        const NetworkModel base = preset("fig4_cyclic3");
        const FockBasis basis = build_basis(3, base.truncation);
        NetworkModel wrapped = base;
        wrapped.couplings[2].phase += 2 * kPi;
        double worst = 0.0;
        const ObservableSet ref = solve_port(base, basis, "a", 0.0);
        const ObservableSet alt = solve_port(wrapped, basis, "a", 0.0);
        for (const auto& [out, t] : ref.transmission) {
            worst = std::max(worst, std::abs(t - alt.transmission.at(out)));
            const double g_ref = ref.g2.at(out);
            const double g_alt = alt.g2.at(out);
            if (!std::isnan(g_ref) && !std::isnan(g_alt)) {
                worst = std::max(worst,
                                 std::abs(g_ref - g_alt) / std::max(1.0, std::abs(g_ref)));
            }
        }
        checks.expect(worst < 1e-10, "flux 2pi periodicity within 1e-10");
    }

    // Linear network: coherent output everywhere sampled.
    {
        NetworkModel linear = preset("fig4_cyclic3");
        for (ModeSpec& m : linear.modes) m.kerr_u = 0.0;
        const FockBasis basis = build_basis(3, linear.truncation);
        double worst = 0.0;
        for (double phi : {0.3, 0.5 * kPi, 1.4 * kPi}) {
            for (double delta : {0.0, 0.8}) {
                NetworkModel net = linear;
                net.couplings[2].phase = phi;
                const ObservableSet set = solve_port(net, basis, "a", delta);
                for (const auto& [out, g2] : set.g2) {
                    if (!std::isnan(g2)) worst = std::max(worst, std::abs(g2 - 1.0));
                }
            }
        }
        checks.expect(worst < 1e-6, "U = 0 coherence |g2 - 1| < 1e-6");
    }

    // U = 0, phi = 0 reciprocity across the scan.
    {
        NetworkModel linear = preset("fig4_cyclic3");
        for (ModeSpec& m : linear.modes) m.kerr_u = 0.0;
        linear.couplings[2].phase = 0.0;
        const FockBasis basis = build_basis(3, linear.truncation);
        double worst = 0.0;
        for (double delta : {-1.5, -0.5, 0.0, 0.5, 1.5}) {
            const ObservableSet fwd = solve_port(linear, basis, "a", delta);
            const ObservableSet bwd = solve_port(linear, basis, "b", delta);
            worst = std::max(worst,
                             std::abs(fwd.transmission.at("b") - bwd.transmission.at("a")));
        }
        checks.expect(worst < 1e-8, "U = 0, phi = 0 reciprocity within 1e-8");
    }

    // Drive scaling: halving eps moves T and g2 by < 1e-3 relative on ports
    // with a leading-order signal. Interference-quenched ports carry only
    // next-order light whose T and g2 scale with eps by construction.
    {
        double worst = 0.0;
        for (const std::string& name : preset_names()) {
            NetworkModel net = preset(name);
            const FockBasis basis =
                build_basis(static_cast<int>(net.modes.size()), net.truncation);
            const double bright_floor = net.drive.epsilon * net.drive.epsilon / 200.0;
            const ObservableSet full = solve_port(net, basis, "a", 0.0);
            net.drive.epsilon /= 2.0;
            const ObservableSet half = solve_port(net, basis, "a", 0.0);
            for (const auto& [out, t] : full.transmission) {
                if (full.mean_photon.at(out) < bright_floor) continue;
                worst = std::max(worst, std::abs(half.transmission.at(out) - t) / t);
                const double g_full = full.g2.at(out);
                const double g_half = half.g2.at(out);
                if (!std::isnan(g_full) && !std::isnan(g_half)) {
                    worst = std::max(worst, std::abs(g_half - g_full) / g_full);
                }
            }
        }
        checks.expect(worst < 1e-3, "drive scaling invariance within 1e-3");
    }

    return report(9, "gauge, periodicity, coherence, reciprocity and drive scaling", checks, "");
}

// --- criterion 10: convergence suite ---------------------------------------

bool criterion10() {
    Checks checks;
    double worst_truncation = 0.0;

    for (const std::string& name : preset_names()) {
        NetworkModel net = preset(name);
        const int n_modes = static_cast<int>(net.modes.size());
        const FockBasis basis3 = build_basis(n_modes, net.truncation);

        NetworkModel wide = net;
        wide.truncation.per_mode_caps.assign(static_cast<std::size_t>(n_modes), 4);
        wide.truncation.total_cap = 4;
        const FockBasis basis4 = build_basis(n_modes, wide.truncation);

        for (const std::string port : {"a", "b"}) {
            NetworkModel n3 = net;
            n3.drive.target_mode = port;
            NetworkModel n4 = wide;
            n4.drive.target_mode = port;
            const ObservableSet coarse = solve_point(n3, basis3);
            const ObservableSet fine = solve_point(n4, basis4);
            for (const auto& [out, t] : coarse.transmission) {
                if (t > 1e-300) {
                    worst_truncation =
                        std::max(worst_truncation, std::abs(fine.transmission.at(out) - t) / t);
                }
                const double g3 = coarse.g2.at(out);
                const double g4 = fine.g2.at(out);
                if (!std::isnan(g3) && !std::isnan(g4)) {
                    worst_truncation = std::max(worst_truncation, std::abs(g4 - g3) / g3);
                }
            }
        }
    }
    checks.expect(worst_truncation < 1e-4, "cap 3 -> 4 changes observables by < 1e-4");

    // Effective-model error halves when gamma_c doubles at fixed J'.
    const auto discrepancy = [&](double gamma_c) {
        NetworkModel full = preset("fig5_reservoir");
        full.modes[2].gamma = gamma_c;
        const double coupling = std::sqrt(0.5 * gamma_c / 2.0); // keeps J' = 1/2
        full.couplings[1].strength = coupling;
        full.couplings[2].strength = coupling;
        const FockBasis basis3 = build_basis(3, full.truncation);

        const EffectiveModel eff = adiabatic_eliminate(full);
        const FockBasis basis2 = build_basis(2, eff.base.truncation);
        std::vector<double> grid;
        for (int i = 0; i <= 8; ++i) grid.push_back(-2.0 + 0.5 * i);
        const SweepResult reduced = effective_observables(eff, basis2, grid);

        double worst_t = 0.0, worst_g2 = 0.0;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            const ObservableSet fwd = solve_port(full, basis3, "a", grid[g]);
            const ObservableSet bwd = solve_port(full, basis3, "b", grid[g]);
            worst_t = std::max(worst_t, std::abs(fwd.transmission.at("b") -
                                                 reduced.rows[g][0].transmission));
            worst_t = std::max(worst_t, std::abs(bwd.transmission.at("a") -
                                                 reduced.rows[g][1].transmission));
            // g2 on the transmitting channel.
            if (bwd.transmission.at("a") >= 0.01 && !std::isnan(bwd.g2.at("a")) &&
                !std::isnan(reduced.rows[g][1].g2)) {
                worst_g2 = std::max(worst_g2, std::abs(bwd.g2.at("a") - reduced.rows[g][1].g2) /
                                                  bwd.g2.at("a"));
            }
        }
        return std::pair{worst_t, worst_g2};
    };
    const auto [t100, g100] = discrepancy(100.0);
    const auto [t200, g200] = discrepancy(200.0);
    checks.expect(t200 <= 0.5 * t100, "T discrepancy halves when gamma_c doubles");
    checks.expect(g200 <= 0.5 * g100, "g2 discrepancy halves when gamma_c doubles");

    std::ostringstream values;
    values << "max cap3->4 shift=" << fmt(worst_truncation) << " eff T err "
           << fmt(t100) << "->" << fmt(t200) << " g2 err " << fmt(g100) << "->" << fmt(g200);
    return report(10, "truncation and elimination convergence", checks, values.str());
}

} // namespace

int main() {
    int failures = 0;
    failures += !criterion1();
    failures += !criterion2();
    failures += !criterion3();
    failures += !criterion4();
    failures += !criterion5();
    failures += !criterion6();
    failures += !criterion7();
    failures += !criterion8();
    failures += !criterion9();
    failures += !criterion10();
    if (failures == 0) {
        std::cout << "all 10 acceptance criteria passed\n";
    } else {
        std::cout << failures << " acceptance criteria failed\n";
    }
    return failures;
}
