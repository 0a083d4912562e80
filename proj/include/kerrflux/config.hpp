#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kerrflux/model.hpp"
#include "kerrflux/sweep.hpp"

namespace kerrflux {

// Parsed configuration document. notes carries non-fatal normalizations
// (e.g. a coupling phase of 2pi wrapped to 0).
struct ParsedConfig {
    NetworkModel model;
    SweepSpec sweep;
    std::vector<std::string> notes;
};

// Line-oriented format with [mode], [coupling], [drive], [sweep] and
// [truncation] sections of key = value pairs; '#' starts a comment. Numeric
// values accept a "pi" suffix (phase = 0.5pi). All validation errors are
// reported together, each with its line number, in one ConfigError.
ParsedConfig parse_config(std::string_view text);

ParsedConfig parse_config_file(const std::string& path);

// Inverse of parse_config up to comments; round-trips exactly (17
// significant digits).
std::string serialize_config(const NetworkModel& model, const SweepSpec& sweep);

// Sweep matching the scan published for the named preset scenario.
SweepSpec preset_sweep(const std::string& name);

} // namespace kerrflux
