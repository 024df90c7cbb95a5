#pragma once

#include <optional>
#include <stdexcept>

// Unit conventions, used throughout the library:
//  - every frequency-like argument or field whose name ends in _hz is an
//    ordinary frequency (cycles/s), i.e. the omega/2pi values the literature
//    quotes; the 2pi conversion happens inside each routine,
//  - times are seconds, temperatures kelvin, phases radians,
//  - rates returned by the library are ordinary frequencies (Hz) unless the
//    name says otherwise.

namespace thermoq {

inline constexpr double hbar = 1.054571817e-34;  // J*s   (CODATA 2018)
inline constexpr double k_B  = 1.380649e-23;     // J/K   (exact, SI 2019)
inline constexpr double two_pi = 6.28318530717958647692528676655900577;

// Bose-Einstein occupancy n = 1/(exp(hbar*omega/kB*T) - 1).
// Exponents above 700 return exactly 0 instead of underflowing through expm1;
// deep sub-mK sweep points must not abort a run.
double occupancy(double f_hz, double temperature_k);

// dn/dT = (hbar*omega/kB*T^2) * n*(n+1).  Always > 0 on the valid domain.
double occupancy_derivative(double f_hz, double temperature_k);

// Photon-number variance of a thermal state, n*(n+1).
double thermal_variance(double n_bar);

// Photon-number variance of a displaced thermal state:
// n_b*(1+n_b) + alpha^2*(1+2*n_b).
double displaced_thermal_variance(double n_bar_b, double alpha);

// Inverse of occupancy: T = hbar*omega / (kB * ln(1 + 1/n)).
double temperature_from_occupancy(double f_hz, double n_bar);

// The thermal (sensing) mode: frequency, linewidth, and exactly one of
// {temperature, occupancy} at construction -- the other is derived.
struct ThermalModeSpec {
    double omega_hz = 0.0;   // mode frequency, ordinary Hz
    double kappa_hz = 0.0;   // linewidth, ordinary Hz
    double n_bar = 0.0;
    std::optional<double> temperature_k;  // absent when n_bar == 0 was supplied

    static ThermalModeSpec from_temperature(double omega_hz, double kappa_hz,
                                            double temperature_k);
    static ThermalModeSpec from_occupancy(double omega_hz, double kappa_hz,
                                          double n_bar);

    // dBar{n}/dT at this mode's own (omega, T).  Zero when the mode is empty.
    double occupancy_slope() const;
};

// The coherent probe mode.  Only |alpha| enters any envelope, so the
// amplitude is stored as a nonnegative real and the global phase is dropped.
struct ProbeSpec {
    double omega_hz = 0.0;
    double kappa_hz = 0.0;
    double alpha = 0.0;                // coherent amplitude, >= 0
    double residual_occupancy = 0.0;   // thermal background of the probe

    ProbeSpec() = default;
    ProbeSpec(double omega_hz_, double kappa_hz_, double alpha_,
              double residual_occupancy_ = 0.0);
};

}  // namespace thermoq
