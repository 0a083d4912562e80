#include "kerrflux/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <tuple>

namespace kerrflux {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

std::string trim(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return std::string(s.substr(begin, end - begin));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::string current;
    for (char ch : s) {
        if (ch == ',') {
            items.push_back(trim(current));
            current.clear();
        } else {
            current += ch;
        }
    }
    items.push_back(trim(current));
    return items;
}

// Plain decimal real, or a multiple of pi written with a "pi" suffix
// ("0.5pi", "pi", "-pi").
std::optional<double> parse_real(const std::string& text) {
    std::string value = trim(text);
    double scale = 1.0;
    if (value.size() >= 2 && value.substr(value.size() - 2) == "pi") {
        scale = kPi;
        value = trim(value.substr(0, value.size() - 2));
        if (value.empty() || value == "+") value = "1";
        if (value == "-") value = "-1";
    }
    if (value.empty()) return std::nullopt;
    char* end = nullptr;
    const double parsed = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size()) return std::nullopt;
    return parsed * scale;
}

std::optional<int> parse_int(const std::string& text) {
    const std::string value = trim(text);
    if (value.empty()) return std::nullopt;
    char* end = nullptr;
    const long parsed = std::strtol(value.c_str(), &end, 10);
    if (end != value.c_str() + value.size()) return std::nullopt;
    return static_cast<int>(parsed);
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

struct Section {
    std::string name;
    int line = 0;
    std::vector<std::tuple<std::string, std::string, int>> entries; // key, value, line
};

} // namespace

ParsedConfig parse_config(std::string_view text) {
    std::vector<std::string> errors;
    std::vector<Section> sections;

    std::istringstream stream{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(stream, raw)) {
        ++line_no;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back("line " + std::to_string(line_no) + ": malformed section header");
                continue;
            }
            const std::string name = trim(line.substr(1, line.size() - 2));
            static const std::vector<std::string> known = {"mode", "coupling", "drive", "sweep",
                                                           "truncation"};
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                errors.push_back("line " + std::to_string(line_no) + ": unknown section [" +
                                 name + "]");
                sections.push_back({"", line_no, {}}); // swallow its keys
                continue;
            }
            sections.push_back({name, line_no, {}});
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        if (sections.empty()) {
            errors.push_back("line " + std::to_string(line_no) + ": key outside any section");
            continue;
        }
        sections.back().entries.emplace_back(trim(line.substr(0, eq)),
                                             trim(line.substr(eq + 1)), line_no);
    }

    ParsedConfig parsed;
    NetworkModel& model = parsed.model;
    model.truncation.total_cap = 3;
    bool saw_drive = false;
    bool saw_sweep = false;
    bool saw_truncation = false;
    std::vector<int> uniform_caps;
    std::vector<std::pair<std::string, int>> coupling_endpoints; // label, line
    bool sweep_has_range = false;
    bool sweep_has_points = false;
    bool sweep_has_ports = false;

    const auto bad_value = [&](const std::string& key, const std::string& value, int line) {
        errors.push_back("line " + std::to_string(line) + ": cannot parse " + key + " value '" +
                         value + "'");
    };

    for (const Section& section : sections) {
        if (section.name.empty()) continue;

        if (section.name == "mode") {
            ModeSpec mode;
            for (const auto& [key, value, line] : section.entries) {
                if (key == "label") {
                    mode.label = value;
                } else if (key == "omega") {
                    if (auto v = parse_real(value)) mode.omega = *v;
                    else bad_value(key, value, line);
                } else if (key == "kerr") {
                    if (auto v = parse_real(value)) mode.kerr_u = *v;
                    else bad_value(key, value, line);
                } else if (key == "gamma") {
                    if (auto v = parse_real(value)) mode.gamma = *v;
                    else bad_value(key, value, line);
                } else {
                    errors.push_back("line " + std::to_string(line) + ": unknown [mode] key '" +
                                     key + "'");
                }
            }
            if (mode.label.empty()) {
                errors.push_back("line " + std::to_string(section.line) +
                                 ": [mode] section needs a label");
            }
            model.modes.push_back(std::move(mode));
        } else if (section.name == "coupling") {
            CouplingSpec coupling;
            int endpoint_line = section.line;
            bool has_strength = false;
            for (const auto& [key, value, line] : section.entries) {
                if (key == "from") {
                    coupling.from_mode = value;
                    endpoint_line = line;
                } else if (key == "to") {
                    coupling.to_mode = value;
                    endpoint_line = line;
                } else if (key == "g") {
                    if (auto v = parse_real(value)) {
                        coupling.strength = *v;
                        has_strength = true;
                    } else {
                        bad_value(key, value, line);
                    }
                } else if (key == "phase") {
                    if (auto v = parse_real(value)) {
                        double wrapped = std::fmod(*v, kTwoPi);
                        if (wrapped < 0.0) wrapped += kTwoPi;
                        if (wrapped != *v) {
                            parsed.notes.push_back("line " + std::to_string(line) + ": phase " +
                                                   format_double(*v) + " normalized to " +
                                                   format_double(wrapped));
                        }
                        coupling.phase = wrapped;
                    } else {
                        bad_value(key, value, line);
                    }
                } else {
                    errors.push_back("line " + std::to_string(line) +
                                     ": unknown [coupling] key '" + key + "'");
                }
            }
            if (coupling.from_mode.empty() || coupling.to_mode.empty() || !has_strength) {
                errors.push_back("line " + std::to_string(section.line) +
                                 ": [coupling] needs from, to and g");
            }
            coupling_endpoints.emplace_back(coupling.from_mode, endpoint_line);
            coupling_endpoints.emplace_back(coupling.to_mode, endpoint_line);
            model.couplings.push_back(std::move(coupling));
        } else if (section.name == "drive") {
            if (saw_drive) {
                errors.push_back("line " + std::to_string(section.line) +
                                 ": duplicate [drive] section");
            }
            saw_drive = true;
            for (const auto& [key, value, line] : section.entries) {
                if (key == "target") {
                    model.drive.target_mode = value;
                } else if (key == "epsilon") {
                    if (auto v = parse_real(value)) model.drive.epsilon = *v;
                    else bad_value(key, value, line);
                } else if (key == "detuning") {
                    if (auto v = parse_real(value)) model.drive.detuning = *v;
                    else bad_value(key, value, line);
                } else {
                    errors.push_back("line " + std::to_string(line) + ": unknown [drive] key '" +
                                     key + "'");
                }
            }
        } else if (section.name == "sweep") {
            if (saw_sweep) {
                errors.push_back("line " + std::to_string(section.line) +
                                 ": duplicate [sweep] section");
            }
            saw_sweep = true;
            for (const auto& [key, value, line] : section.entries) {
                if (key == "variable") {
                    if (value == "detuning") {
                        parsed.sweep.variable = SweepVariable::detuning;
                    } else if (value == "phase") {
                        parsed.sweep.variable = SweepVariable::phase;
                    } else {
                        errors.push_back("line " + std::to_string(line) +
                                         ": sweep variable must be detuning or phase");
                    }
                } else if (key == "start") {
                    if (auto v = parse_real(value)) parsed.sweep.start = *v;
                    else bad_value(key, value, line);
                    sweep_has_range = true;
                } else if (key == "stop") {
                    if (auto v = parse_real(value)) parsed.sweep.stop = *v;
                    else bad_value(key, value, line);
                    sweep_has_range = true;
                } else if (key == "points") {
                    if (auto v = parse_int(value)) parsed.sweep.points = *v;
                    else bad_value(key, value, line);
                    sweep_has_points = true;
                } else if (key == "drive_ports") {
                    parsed.sweep.drive_ports = split_list(value);
                    sweep_has_ports = true;
                } else {
                    errors.push_back("line " + std::to_string(line) + ": unknown [sweep] key '" +
                                     key + "'");
                }
            }
        } else if (section.name == "truncation") {
            if (saw_truncation) {
                errors.push_back("line " + std::to_string(section.line) +
                                 ": duplicate [truncation] section");
            }
            saw_truncation = true;
            for (const auto& [key, value, line] : section.entries) {
                if (key == "total_cap") {
                    if (auto v = parse_int(value)) model.truncation.total_cap = *v;
                    else bad_value(key, value, line);
                } else if (key == "per_mode_cap") {
                    uniform_caps.clear();
                    bool ok = true;
                    for (const std::string& item : split_list(value)) {
                        if (auto v = parse_int(item)) {
                            uniform_caps.push_back(*v);
                        } else {
                            ok = false;
                        }
                    }
                    if (!ok) bad_value(key, value, line);
                } else {
                    errors.push_back("line " + std::to_string(line) +
                                     ": unknown [truncation] key '" + key + "'");
                }
            }
        }
    }

    // Per-mode caps: a single value applies to every mode.
    if (uniform_caps.size() == 1) {
        model.truncation.per_mode_caps.assign(model.modes.size(), uniform_caps.front());
    } else if (!uniform_caps.empty()) {
        model.truncation.per_mode_caps = uniform_caps;
    } else {
        model.truncation.per_mode_caps.assign(model.modes.size(), 3);
    }

    if (!saw_drive) {
        errors.push_back("missing [drive] section");
    }

    // Sweep defaults: published detuning grid, or the phase grid when the
    // variable says so; drive only the probe port unless told otherwise.
    if (!sweep_has_range) {
        if (parsed.sweep.variable == SweepVariable::phase) {
            parsed.sweep.start = 0.0;
            parsed.sweep.stop = kTwoPi;
        } else {
            parsed.sweep.start = -10.0;
            parsed.sweep.stop = 10.0;
        }
    }
    if (!sweep_has_points) {
        parsed.sweep.points = parsed.sweep.variable == SweepVariable::phase ? 201 : 401;
    }
    if (!sweep_has_ports && saw_drive) {
        parsed.sweep.drive_ports = {model.drive.target_mode};
    }

    for (const auto& [label, line] : coupling_endpoints) {
        if (!label.empty() && model.mode_index(label) < 0) {
            errors.push_back("line " + std::to_string(line) +
                             ": coupling references undeclared mode '" + label + "'");
        }
    }

    if (errors.empty()) {
        try {
            model.validate();
        } catch (const ConfigError& e) {
            errors.push_back(e.what());
        }
    }
    if (errors.empty()) {
        try {
            parsed.sweep.validate(model);
        } catch (const ConfigError& e) {
            errors.push_back(e.what());
        }
    }

    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "configuration errors:";
        for (const std::string& e : errors) msg << "\n  " << e;
        throw ConfigError(msg.str());
    }
    return parsed;
}

ParsedConfig parse_config_file(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_config(buffer.str());
}

std::string serialize_config(const NetworkModel& model, const SweepSpec& sweep) {
    std::ostringstream out;
    for (const ModeSpec& mode : model.modes) {
        out << "[mode]\n";
        out << "label = " << mode.label << "\n";
        out << "omega = " << format_double(mode.omega) << "\n";
        out << "kerr = " << format_double(mode.kerr_u) << "\n";
        out << "gamma = " << format_double(mode.gamma) << "\n\n";
    }
    for (const CouplingSpec& coupling : model.couplings) {
        out << "[coupling]\n";
        out << "from = " << coupling.from_mode << "\n";
        out << "to = " << coupling.to_mode << "\n";
        out << "g = " << format_double(coupling.strength) << "\n";
        out << "phase = " << format_double(coupling.phase) << "\n\n";
    }
    out << "[drive]\n";
    out << "target = " << model.drive.target_mode << "\n";
    out << "epsilon = " << format_double(model.drive.epsilon) << "\n";
    out << "detuning = " << format_double(model.drive.detuning) << "\n\n";

    out << "[truncation]\n";
    if (model.truncation.total_cap) {
        out << "total_cap = " << *model.truncation.total_cap << "\n";
    }
    const auto& caps = model.truncation.per_mode_caps;
    const bool uniform =
        !caps.empty() && std::all_of(caps.begin(), caps.end(),
                                     [&](int c) { return c == caps.front(); });
    out << "per_mode_cap = ";
    if (uniform) {
        out << caps.front();
    } else {
        for (std::size_t i = 0; i < caps.size(); ++i) {
            if (i) out << ", ";
            out << caps[i];
        }
    }
    out << "\n\n";

    out << "[sweep]\n";
    out << "variable = " << to_string(sweep.variable) << "\n";
    out << "start = " << format_double(sweep.start) << "\n";
    out << "stop = " << format_double(sweep.stop) << "\n";
    out << "points = " << sweep.points << "\n";
    out << "drive_ports = ";
    for (std::size_t i = 0; i < sweep.drive_ports.size(); ++i) {
        if (i) out << ", ";
        out << sweep.drive_ports[i];
    }
    out << "\n";
    return out.str();
}

SweepSpec preset_sweep(const std::string& name) {
    SweepSpec sweep;
    if (name == "fig6_sym_molecule" || name == "fig7_circulator") {
        sweep.variable = SweepVariable::phase;
        sweep.start = 0.0;
        sweep.stop = kTwoPi;
        sweep.points = 201;
    } else {
        sweep.variable = SweepVariable::detuning;
        sweep.start = -10.0;
        sweep.stop = 10.0;
        sweep.points = 401;
    }
    sweep.drive_ports = {"a", "b"};
    if (name == "fig7_circulator") sweep.drive_ports = {"a", "b", "c"};
    // Unknown names surface through preset() itself.
    preset(name);
    return sweep;
}

} // namespace kerrflux
