#include "kerrflux/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "kerrflux/dynamics.hpp"

namespace kerrflux {

std::string to_string(SweepVariable v) {
    return v == SweepVariable::detuning ? "detuning" : "phase";
}

std::vector<double> SweepSpec::grid() const {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        values.push_back(start);
        return values;
    }
    for (int i = 0; i < points; ++i) {
        values.push_back(start + (stop - start) * static_cast<double>(i) /
                                     static_cast<double>(points - 1));
    }
    return values;
}

void SweepSpec::validate(const NetworkModel& network) const {
    std::vector<std::string> issues;
    if (points < 1) issues.push_back("sweep points must be >= 1");
    if (points > 1 && !(start < stop)) {
        issues.push_back("sweep start must be below stop");
    }
    if (drive_ports.empty()) {
        issues.push_back("sweep needs at least one drive port");
    }
    std::set<std::string> seen;
    for (const std::string& port : drive_ports) {
        if (network.mode_index(port) < 0) {
            issues.push_back("drive port '" + port + "' is not a declared mode");
        }
        if (!seen.insert(port).second) {
            issues.push_back("drive port '" + port + "' listed twice");
        }
    }
    if (variable == SweepVariable::phase && flux_links(network).size() != 1) {
        issues.push_back("a phase sweep needs exactly one independent flux loop, found " +
                         std::to_string(flux_links(network).size()));
    }
    if (!issues.empty()) {
        std::ostringstream msg;
        msg << "invalid sweep:";
        for (const std::string& s : issues) msg << "\n  - " << s;
        throw ConfigError(msg.str());
    }
}

bool SweepResult::all_solved() const {
    for (const auto& row : rows) {
        for (const PairObservables& cell : row) {
            if (!cell.solved) return false;
        }
    }
    return true;
}

std::vector<std::size_t> SweepResult::failed_grid_indices() const {
    std::vector<std::size_t> failed;
    for (std::size_t g = 0; g < rows.size(); ++g) {
        for (const PairObservables& cell : rows[g]) {
            if (!cell.solved) {
                failed.push_back(g);
                break;
            }
        }
    }
    return failed;
}

SweepResult run_sweep(const NetworkModel& network, const SweepSpec& sweep, int workers) {
    network.validate();
    sweep.validate(network);
    if (workers < 1) workers = 1;

    const NetworkModel canonical = gauge_canonicalize(network);
    std::size_t flux_link = 0;
    if (sweep.variable == SweepVariable::phase) {
        flux_link = flux_links(canonical).front();
    }

    SweepResult result;
    result.variable = sweep.variable;
    result.grid = sweep.grid();
    for (const std::string& port : sweep.drive_ports) {
        for (const ModeSpec& mode : canonical.modes) {
            if (mode.label != port) result.pairs.push_back({port, mode.label});
        }
    }
    result.rows.assign(result.grid.size(),
                       std::vector<PairObservables>(result.pairs.size()));

    const FockBasis basis =
        build_basis(static_cast<int>(canonical.modes.size()), canonical.truncation);

    // One task per (grid point, drive port); each writes only its own cells.
    struct Task {
        std::size_t grid_index;
        std::string port;
    };
    std::vector<Task> tasks;
    for (std::size_t g = 0; g < result.grid.size(); ++g) {
        for (const std::string& port : sweep.drive_ports) {
            tasks.push_back({g, port});
        }
    }

    const auto run_task = [&](const Task& task) {
        NetworkModel point = canonical;
        if (sweep.variable == SweepVariable::detuning) {
            point.drive.detuning = result.grid[task.grid_index];
        } else {
            point.couplings[flux_link].phase = result.grid[task.grid_index];
        }
        point.drive.target_mode = task.port;

        std::vector<std::size_t> cells;
        for (std::size_t p = 0; p < result.pairs.size(); ++p) {
            if (result.pairs[p].input_mode == task.port) cells.push_back(p);
        }

        try {
            const SparseMatrix hamiltonian = build_hamiltonian(point, basis);
            const Liouvillian liouvillian = build_liouvillian(hamiltonian, point, basis);
            const SteadyState ss = steady_state(liouvillian);
            const ObservableSet set = observable_set(ss, point, basis);
            for (std::size_t p : cells) {
                PairObservables& cell = result.rows[task.grid_index][p];
                const std::string& out = result.pairs[p].output_mode;
                cell.transmission = set.transmission.at(out);
                cell.g2 = set.g2.at(out);
                cell.mean_photon_out = set.mean_photon.at(out);
                cell.residual = ss.residual;
                cell.solved = true;
            }
        } catch (const std::exception& e) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            for (std::size_t p : cells) {
                PairObservables& cell = result.rows[task.grid_index][p];
                cell.transmission = nan;
                cell.g2 = nan;
                cell.mean_photon_out = nan;
                cell.residual = nan;
                cell.solved = false;
                cell.error = e.what();
            }
        }
    };

    if (workers == 1 || tasks.size() <= 1) {
        for (const Task& task : tasks) run_task(task);
    } else {
        std::atomic<std::size_t> next{0};
        const std::size_t n_threads =
            std::min<std::size_t>(static_cast<std::size_t>(workers), tasks.size());
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < tasks.size();
                     i = next.fetch_add(1)) {
                    run_task(tasks[i]);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    return result;
}

namespace {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace

void write_csv(const SweepResult& result, std::ostream& out) {
    out << to_string(result.variable);
    for (const PortPair& pair : result.pairs) {
        const std::string suffix = pair.input_mode + "_to_" + pair.output_mode;
        out << ",T_" << suffix << ",g2_" << suffix << ",n_" << suffix << ",residual_" << suffix;
    }
    out << ",status\n";

    for (std::size_t g = 0; g < result.grid.size(); ++g) {
        out << format_double(result.grid[g]);
        std::string failures;
        for (std::size_t p = 0; p < result.pairs.size(); ++p) {
            const PairObservables& cell = result.rows[g][p];
            out << ',' << format_double(cell.transmission) << ',' << format_double(cell.g2)
                << ',' << format_double(cell.mean_photon_out) << ','
                << format_double(cell.residual);
            if (!cell.solved) {
                if (!failures.empty()) failures += ';';
                failures += result.pairs[p].input_mode + "->" + result.pairs[p].output_mode;
            }
        }
        out << ',' << (failures.empty() ? "ok" : "failed(" + failures + ")") << '\n';
    }
}

std::string to_csv(const SweepResult& result) {
    std::ostringstream out;
    write_csv(result, out);
    return out.str();
}

} // namespace kerrflux
