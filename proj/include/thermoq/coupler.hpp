#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "thermoq/jacobi.hpp"

// The two-transmon bridge that engineers a cross-Kerr between the thermal
// mode a and the probe mode b: the dispersive/perturbative formula and an
// exact-diagonalization oracle on the truncated product Fock space.

namespace thermoq {

struct CouplerCircuit {
    // Bare frequencies and couplings, ordinary Hz.
    double omega_a_hz = 0.0;
    double omega_b_hz = 0.0;
    double omega_1_hz = 0.0;  // transmon 1 (couples to mode a)
    double omega_2_hz = 0.0;  // transmon 2 (couples to mode b)
    double g_a1_hz = 0.0;
    double g_b2_hz = 0.0;
    double j_xy_hz = 0.0;     // qubit-qubit exchange

    double delta_a1_hz() const { return omega_a_hz - omega_1_hz; }
    double delta_b2_hz() const { return omega_b_hz - omega_2_hz; }
    double delta_12_hz() const { return omega_1_hz - omega_2_hz; }

    // True when the circuit leaves the dispersive regime the perturbative
    // formula assumes: |g/Delta| > 0.1 on either arm or |J/Delta_12| > 0.2.
    bool outside_dispersive_regime() const;

    // Uniformly scale all three couplings (used by the PT-validity trend).
    CouplerCircuit scaled_couplings(double s) const;
};

struct FockTruncation {
    int n_max = 3;  // photons per bosonic mode; Hilbert dim (n_max+1)^2 * 4
};

// One dressed level assigned to a bare product label by maximum overlap.
struct DressedState {
    int n_a = 0, n_b = 0, q1 = 0, q2 = 0;  // bare label (q: 0 ground, 1 excited)
    double energy_rad_s = 0.0;
    double overlap_sq = 0.0;               // |<bare|dressed>|^2
    bool ambiguous = false;                // overlap_sq <= 0.5
};

struct DressedSpectrum {
    std::vector<DressedState> states;
};

// chi = -g^2/Delta.  Hz in, Hz out (the 2pi factors cancel exactly).
double chi_from_g(double g_hz, double delta_hz);

// lambda = 8 chi_a1 chi_b2 J^2 / Delta_12^3.  Hz in, Hz out.
double lambda_perturbative(double chi_a1_hz, double chi_b2_hz, double j_xy_hz,
                           double delta_12_hz);

// Product-basis index: ((n_a*(n_max+1) + n_b)*2 + q1)*2 + q2.
std::size_t basis_index(int n_a, int n_b, int q1, int q2, int n_max);

// H = H_0 + V in rad/s on the product basis.  V conserves the total
// excitation number N = n_a + n_b + q1 + q2, so H is block-diagonal over N;
// excitation_blocks exposes the grouping.  Throws std::domain_error when the
// matrix would exceed 1e6 entries.
SymMatrix build_hamiltonian(const CouplerCircuit& circuit,
                            const FockTruncation& trunc);

// Basis indices grouped by total excitation number N = 0, 1, 2, ...
std::vector<std::vector<std::size_t>> excitation_blocks(
    const FockTruncation& trunc);

struct LambdaExactResult {
    double lambda_hz = 0.0;
    int n_max_used = 0;
    double convergence_step_rel = 0.0;   // |lambda(n+1)-lambda(n)| / |lambda|
    bool converged = false;
    std::array<DressedState, 4> assignments{};  // |00gg>, |10gg>, |01gg>, |11gg>
};

// Exact cross-Kerr from the dressed spectrum:
//   lambda = E(11gg) - E(10gg) - E(01gg) + E(00gg),
// dressed levels assigned by maximum overlap (ties broken toward the lowest
// bare index; overlap <= 0.5 flags the assignment).  n_max is raised from
// trunc.n_max until the result moves by < 1% (or the 1e-12*omega_a noise
// floor), capped at 6.
LambdaExactResult lambda_exact(const CouplerCircuit& circuit,
                               FockTruncation trunc = {});

// Probe loss inherited from a lossy transmon: (g/Delta)^2 / (2 pi T1), Hz.
double inverse_purcell(double g_hz, double delta_hz, double t1_s);

}  // namespace thermoq
