#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "thermoq/rng.hpp"

// Seeded Monte Carlo oracles for the closed-form envelopes: Bose-Einstein
// phase ensembles and birth-death thermal trajectories with exponential
// number correlations.  Estimates are byte-deterministic for a fixed
// (master_seed, stream_index): shots are processed in fixed 4096-shot blocks
// with Kahan-compensated partial sums combined in block order, so the result
// is independent of worker scheduling.

namespace thermoq {

struct McEstimate {
    std::complex<double> mean{0.0, 0.0};
    std::complex<double> std_error{0.0, 0.0};  // componentwise sample std / sqrt(shots)
    long shots = 0;
};

enum class PhaseStatistics {
    discrete_thermal,  // phi = lambda tau n, n ~ geometric(n_bar) — ground truth
    gaussian           // phi ~ Normal(0, sigma_phi^2) — the closed-form model
};

// Ensemble average of exp(-2 alpha^2 (1 - cos phi)); real-valued (imaginary
// parts of the estimate are identically zero).  In gaussian mode the
// expectation equals coherence_envelope_exact by construction; the discrete
// mode is the physical Bose-Einstein ground truth.
McEstimate mc_coherence_envelope(double alpha, double lambda_hz, double tau_s,
                                 double n_bar, long shots, RngSeed seed,
                                 PhaseStatistics statistics);

// Exact discrete-ensemble mean sum_n P(n) exp(-2 alpha^2 (1-cos(lambda tau n)))
// (geometric weights, truncated at 1e-16 tail mass): the zero-variance limit
// of the discrete MC, used to validate it independently of the closed form.
double discrete_coherence_reference(double alpha, double lambda_hz,
                                    double tau_s, double n_bar);

struct JumpTrajectory {
    // times[0] = 0 carries the initial occupation; photon_numbers[k] is the
    // value on [times[k], times[k+1]) (or to tau for the last entry).
    std::vector<double> times;
    std::vector<long> photon_numbers;

    long value_at(double t) const;
    // Exact integral of n(t) dt over [0, tau] for piecewise-constant n.
    double integral(double tau_s) const;
};

// Birth-death jump process with rates up(n->n+1) = kappa n_bar (n+1) and
// down(n->n-1) = kappa (1+n_bar) n (kappa angular internally), started from
// the stationary geometric distribution; exponential waiting times.  The
// stationary autocorrelation is <dn(0) dn(t)> = n_bar(1+n_bar) e^{-kappa t}.
// Throws after 1e7 jumps (runaway guard).
JumpTrajectory simulate_thermal_trajectory(double n_bar, double kappa_hz,
                                           double tau_s, RngSeed seed);

// Average of e^{-i phi} with phi = 2 chi_a * integral n(t) dt along simulated
// trajectories; complex mean compares against qubit_only_envelope as
// amplitude e^{-Gamma_q} and phase -2 chi_a n_bar tau.
McEstimate mc_qubit_only_envelope(double chi_a_hz, double n_bar,
                                  double kappa_hz, double tau_s, long shots,
                                  RngSeed seed);

struct AutocorrelationPoint {
    double lag_s = 0.0;
    double value = 0.0;      // mean of dn(t0) dn(t0+lag)
    double std_error = 0.0;
    double reference = 0.0;  // n_bar (1+n_bar) e^{-kappa lag}
};

// Empirical stationary autocorrelation from fresh trajectories, measured at
// t0 and t0 + lag (t0 = tau/2); one trajectory per shot.
std::vector<AutocorrelationPoint> trajectory_autocorrelation(
    double n_bar, double kappa_hz, double tau_s,
    const std::vector<double>& lags_s, long trajectories, RngSeed seed);

struct ChiSquaredResult {
    double statistic = 0.0;
    int dof = 0;
    double critical_p001 = 0.0;  // upper 0.1% point for this dof
    bool pass = false;           // statistic < critical value
};

// Goodness of fit of the trajectory marginal at t = tau/2 against the
// geometric distribution; occupation bins merged upward until every expected
// count is >= 5 (dof capped so the 0.1% critical value stays tabulated).
ChiSquaredResult stationarity_chisq(double n_bar, double kappa_hz,
                                    double tau_s, long trajectories,
                                    RngSeed seed);

}  // namespace thermoq
