#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "sweep/config.hpp"

// The CLI subcommands.  Each takes the resolved config, emits CSV (or JSON)
// plus a run manifest into the output directory, and returns 0; hard failures
// throw (ConfigError -> 1, NumericalError -> 2, IoError -> 3, mapped by
// run_command).

namespace thermoq::sweep {

struct RunContext {
    std::filesystem::path out_dir = ".";
    int workers = 1;
    std::optional<std::uint64_t> seed_override;
    std::optional<long> shots_override;
    bool inject_corruption = false;  // validate-only negative-control hook
};

// Built-in config text used when --config is not given (also what
// --dump-config prints).  Throws ConfigError for unknown commands.
std::string default_config(const std::string& command);

// Probe-coherence QFI over a (temperature, tau) grid, plus the optimal-tau
// companion file (per-temperature tau*, deltaT_min).
int cmd_fig_coherence_qfi(SweepConfig config, const RunContext& ctx);
// Phase-shift QFI over a (temperature, tau) grid.
int cmd_fig_phase_qfi(SweepConfig config, const RunContext& ctx);
// Qubit-only Ramsey QFI over a (temperature, tau) grid.
int cmd_qubit_qfi(SweepConfig config, const RunContext& ctx);
// Cross-Kerr map over (chi_a1, chi_b2) at fixed J and Delta_12, plus
// fixed-level contour crossings.
int cmd_coupler_map(SweepConfig config, const RunContext& ctx);
// Exact-diagonalization vs perturbative cross-Kerr at coupling scales
// {1, 1/2, 1/4}; the shrinking-error trend is a hard invariant.
int cmd_coupler_validate(SweepConfig config, const RunContext& ctx);
// Ramsey visibility families (displaced-thermal and thermal variance) over
// (tau_R, chi); monotone decay is a hard invariant.
int cmd_visibility(SweepConfig config, const RunContext& ctx);
// Side-by-side QFI / visibility / Fisher-rate table for all three strategies
// over a tau grid at fixed temperature.
int cmd_compare(SweepConfig config, const RunContext& ctx);
// Monte Carlo oracle suite: sampled envelopes vs closed forms / exact
// references, trajectory autocorrelation, stationarity chi-squared.
int cmd_mc_validate(SweepConfig config, const RunContext& ctx);
// Full oracle comparison report (text + JSON): envelope route agreement,
// MC spot checks, ED-vs-PT trend, finite-difference QFI oracle; documented
// approximation gaps are reported as soft findings and never fail the run.
int cmd_validate(SweepConfig config, const RunContext& ctx);

// Loads the config (file or builtin default), applies --seed/--shots
// overrides, dispatches, and maps exceptions to the exit-code contract
// (0 ok, 1 config, 2 numerical, 3 I/O).
int run_command(const std::string& command, const RunContext& ctx,
                const std::string& config_path);

}  // namespace thermoq::sweep
