#pragma once

// Coherence envelopes and visibility functions for the three estimation
// strategies, plus the exact Gaussian-ensemble envelope used as an oracle
// against the closed form.

namespace thermoq {

struct CoherencePoint {
    double amplitude = 1.0;  // C, in [0, 1]
    double phase = 0.0;      // Phi, radians
};

struct DephasingParams {
    double lambda_hz = 0.0;  // cross-Kerr rate
    double tau_s = 0.0;      // interaction time
    double chi_a_hz = 0.0;   // qubit <-> thermal-mode dispersive shift
    double chi_b_hz = 0.0;   // qubit <-> probe dispersive shift
    double tau_R_s = 0.0;    // Ramsey window
};

// Accumulated phase variance sigma_phi^2 = (lambda*tau)^2 * n*(n+1),
// lambda in ordinary Hz (converted to angular internally).
double phase_variance(double lambda_hz, double tau_s, double n_bar);

// Closed-form probe coherence C = exp[-2 alpha^2 (1 - exp(-gamma_phi))].
// Monotone decreasing in gamma_phi, saturates at exp(-2 alpha^2).
double coherence_envelope_closed(double alpha, double gamma_phi);

// Exact Gaussian-ensemble coherence
//   C = e^{-A} [ I_0(A) + 2 sum_{k>=1} I_k(A) e^{-k^2 sigma^2 / 2} ],  A = 2 alpha^2,
// i.e. <exp(-A(1-cos phi))> over phi ~ Normal(0, sigma^2).  The Bessel series
// is the canonical route (truncated when a term falls below 1e-14 of the
// running sum); coherence_envelope_exact_quadrature evaluates the same average
// by Gauss-Hermite quadrature and the two must agree to 1e-10 absolute.
double coherence_envelope_exact(double alpha, double sigma_sq);
double coherence_envelope_exact_quadrature(double alpha, double sigma_sq);

// Dephasing filter f_kappa(tau) = (kappa*tau - 1 + e^{-kappa*tau}) / kappa^2
// with kappa angular internally; kappa == 0 takes the analytic tau^2/2 branch.
// Interpolates between quasi-static (tau^2/2) and Markovian (tau/kappa).
double filter_function(double kappa_hz, double tau_s);

// Qubit Ramsey response to the thermal mode:
//   amplitude = exp(-Gamma_q),  Gamma_q = (2 chi_a)^2 n(n+1) f_kappa(tau),
//   phase     = 2 chi_a n tau.
CoherencePoint qubit_only_envelope(double chi_a_hz, double n_bar,
                                   double kappa_hz, double tau_s);

// Parasitic Ramsey decay from a spectator mode m with photon-number variance
// var_n: exp{-4 chi_m^2 var_n f_kappa_m(tau_R)}.  The caller chooses the
// statistics (thermal vs displaced-thermal) by choosing var_n.
double parasitic_envelope(double chi_m_hz, double var_n, double kappa_m_hz,
                          double tau_R_s);

// Markovian limit of the parasitic decay: gamma = 4 chi^2 var_n / kappa.
// Returned as an ordinary frequency (the angular rate divided by 2pi).
double markovian_dephasing_rate_hz(double chi_hz, double var_n,
                                   double kappa_hz);

// Phase-to-quadrature mapping gain g_m = 2 |beta| chi_b tau_s (radians).
double mapping_gain(double beta, double chi_b_hz, double tau_s);

// Mapped readout angle theta_q = g_m * 2 alpha * cos(phi_b - theta).
double mapped_angle(double g_m, double alpha, double phi_b, double theta);

}  // namespace thermoq
