#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

// Sweep configuration: line-based UTF-8 text, `key = value` pairs grouped
// under bracketed section headers, comments starting with '#'.
//
//   [sweep]              run metadata: master_seed, shots, output, strategy
//   [axis.<name>]        one swept parameter (at most two axes):
//                        unit, scale = linear|log, min, max, points (>= 2)
//   [fixed]              named scalars, optionally "<value> <unit>"
//
// Units come from the table {Hz, s, K, dimensionless}; frequencies are
// ordinary (cycles/s) everywhere.  Parse errors carry file:line positions.

namespace thermoq::sweep {

// Thrown on malformed or inconsistent configuration (CLI exit code 1).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when a hard numerical invariant fails during a run (exit code 2).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown when file output cannot be produced (exit code 3).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepAxis {
    std::string name;
    std::string unit = "dimensionless";
    std::string scale = "linear";  // linear | log
    double min = 0.0;
    double max = 0.0;
    long points = 0;  // >= 2 for any declared axis

    // The grid values, endpoints exactly min and max.
    std::vector<double> grid() const;
};

struct FixedParam {
    double value = 0.0;
    std::string unit = "dimensionless";
};

struct SweepConfig {
    std::vector<SweepAxis> axes;  // declaration order; at most two
    std::map<std::string, FixedParam> fixed;
    std::string strategy;  // optional selector, command-interpreted
    long shots = 100000;
    std::uint64_t master_seed = 42424242ULL;
    std::string output;  // base output file name; empty -> per-command default

    bool has(const std::string& name) const;
    double get(const std::string& name, double fallback) const;
    // Fixed parameter that must be present (ConfigError otherwise).
    double require(const std::string& name) const;
    // The axis with this name, or nullptr.
    const SweepAxis* axis(const std::string& name) const;
};

SweepConfig parse_config(const std::string& text, const std::string& filename);
SweepConfig parse_config_file(const std::string& path);

// Canonical text form; parse(serialize(parse(text))) == parse(text) and
// serialize of that is byte-identical (round-trip idempotence).
std::string serialize_config(const SweepConfig& config);

}  // namespace thermoq::sweep
