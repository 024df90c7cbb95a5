#pragma once

#include <functional>
#include <optional>

#include "thermoq/envelopes.hpp"
#include "thermoq/physics.hpp"

// Quantum Fisher information per shot for the three strategies, the derived
// sensitivity bound deltaT = 1/sqrt(nu*F), the Fisher-information rate, and
// the optimal-interaction-time search.

namespace thermoq {

enum class Strategy { coherence_mediated, phase_shift, qubit_only };

struct ProtocolParams {
    double lambda_hz = 0.0;  // cross-Kerr rate
    double tau_s = 0.0;      // interaction time
    long nu = 1;             // repetitions (enters only through sensitivity)
    double tau_oh_s = 0.0;   // per-shot overhead; > 0 switches optimal_tau to
                             // maximizing F/(tau + tau_oh)
    double alpha = 0.0;      // probe coherent amplitude
    double chi_a_hz = 0.0;   // dispersive shift, qubit-only strategy
    double chi_b_hz = 0.0;   // dispersive shift to the probe (parasitic use)
    double tau_R_s = 0.0;    // Ramsey window (parasitic use)
};

struct QfiResult {
    double qfi = 0.0;          // per K^2, per shot
    double sensitivity = 0.0;  // kelvin; +inf flags F == 0
    std::optional<double> tau_opt_s;
    long nu = 1;
    Strategy strategy = Strategy::coherence_mediated;
};

// Bloch-vector QFI, F = (dC)^2/(1-C^2) + C^2 (dPhi)^2.
// C == 1 with dC != 0 is singular and returns +inf (detect with std::isinf);
// C == 1 with dC == 0 returns the analytic limit (dPhi)^2.
double bloch_qfi(double C, double dC_dT, double Phi, double dPhi_dT);

// Coherence-mediated strategy.  Gamma_phi = (lambda*tau)^2 n(n+1),
// C = exp[-2 alpha^2 (1-e^{-Gamma})],
// dC/dT = -C * 2 alpha^2 e^{-Gamma} (lambda*tau)^2 (1+2n) dn/dT,
// F = (dC/dT)^2/(1-C^2), evaluated in the overflow-safe form
// F = (dg)^2/expm1(2g) with g = 2 alpha^2(1-e^{-Gamma}).
// The T -> 0 limit returns F = 0 (all factors vanish analytically).
QfiResult qfi_coherence(const ThermalModeSpec& thermal,
                        const ProtocolParams& proto);

// Weak-dephasing shortcut F ~= alpha^2 (lambda*tau)^2 n (hbar w / kB T^2)^2.
double qfi_coherence_weak(const ThermalModeSpec& thermal,
                          const ProtocolParams& proto);

// Phase-shift strategy, F = (lambda*tau * dn/dT)^2; unit probe visibility.
QfiResult qfi_phase(const ThermalModeSpec& thermal, double lambda_hz,
                    double tau_s, long nu = 1);

// Pure-state phase QFI F = 4 alpha^2 (dphi/dT)^2; qfi_phase equals this at
// alpha = 1 with the factor 4 divided out.
double qfi_phase_pure_state(double alpha, double dphi_dT);

// Qubit-only strategy,
//   F = (dGamma)^2 e^{-2Gamma}/(1-e^{-2Gamma}) + e^{-2Gamma}(2 chi tau)^2 (dn/dT)^2
// with Gamma = (2 chi)^2 n(n+1) f_kappa(tau) and
// dGamma = (2 chi)^2 f_kappa(tau) (1+2n) dn/dT.  The amplitude term uses
// (dGamma)^2/expm1(2 Gamma) with the Gamma -> 0 limit (dGamma)^2/(2 Gamma).
QfiResult qfi_qubit_only(const ThermalModeSpec& thermal, double chi_a_hz,
                         double tau_s, long nu = 1);

// deltaT = 1/sqrt(nu*F); +inf for F == 0.
double sensitivity(double qfi, long nu);

// F(tau)/(tau + tau_oh); domain error when the denominator is zero.
double fisher_rate(const std::function<double(double)>& qfi_of_tau,
                   double tau_s, double tau_oh_s);

struct OptimalTau {
    double tau_s = 0.0;
    bool at_lower_edge = false;  // maximum pinned to a bracket endpoint
    bool at_upper_edge = false;  //   (monotone objective over the bracket)
};

// Golden-section search on log(tau), refined to 1e-3 relative in tau.
// Maximizes the strategy's QFI, or the Fisher rate when proto.tau_oh_s > 0.
OptimalTau optimal_tau(Strategy strategy, const ThermalModeSpec& thermal,
                       const ProtocolParams& proto, double tau_lo_s,
                       double tau_hi_s);

// Central-difference QFI through bloch_qfi; independent derivative oracle
// for tests and the validation command.  rel_step in (0, 1e-3].
double finite_difference_qfi(Strategy strategy, const ThermalModeSpec& thermal,
                             const ProtocolParams& proto, double rel_step);

// Strategy envelope (C, Phi) as a function of temperature -- the common
// input to both the analytic and the finite-difference QFI paths.
CoherencePoint strategy_coherence(Strategy strategy, double omega_hz,
                                  double kappa_hz, double temperature_k,
                                  const ProtocolParams& proto);

}  // namespace thermoq
