#include "thermoq/physics.hpp"

#include <cmath>

namespace thermoq {

namespace {

// hbar*omega / kB*T for an ordinary-frequency input.
double thermal_exponent(double f_hz, double temperature_k) {
    if (f_hz <= 0.0) throw std::domain_error("occupancy: frequency must be > 0");
    if (temperature_k <= 0.0)
        throw std::domain_error("occupancy: temperature must be > 0");
    return hbar * two_pi * f_hz / (k_B * temperature_k);
}

}  // namespace

double occupancy(double f_hz, double temperature_k) {
    double x = thermal_exponent(f_hz, temperature_k);
    if (x > 700.0) return 0.0;  // documented underflow guard
    return 1.0 / std::expm1(x);
}

double occupancy_derivative(double f_hz, double temperature_k) {
    double x = thermal_exponent(f_hz, temperature_k);
    if (x > 700.0) return 0.0;
    double n = 1.0 / std::expm1(x);
    return (x / temperature_k) * n * (n + 1.0);
}

double thermal_variance(double n_bar) {
    if (n_bar < 0.0) throw std::domain_error("thermal_variance: n_bar < 0");
    return n_bar * (n_bar + 1.0);
}

double displaced_thermal_variance(double n_bar_b, double alpha) {
    if (n_bar_b < 0.0 || alpha < 0.0)
        throw std::domain_error("displaced_thermal_variance: negative input");
    return n_bar_b * (1.0 + n_bar_b) + alpha * alpha * (1.0 + 2.0 * n_bar_b);
}

double temperature_from_occupancy(double f_hz, double n_bar) {
    if (f_hz <= 0.0)
        throw std::domain_error("temperature_from_occupancy: frequency must be > 0");
    if (n_bar <= 0.0)
        throw std::domain_error("temperature_from_occupancy: n_bar must be > 0");
    return hbar * two_pi * f_hz / (k_B * std::log1p(1.0 / n_bar));
}

ThermalModeSpec ThermalModeSpec::from_temperature(double omega_hz,
                                                  double kappa_hz,
                                                  double temperature_k) {
    if (omega_hz <= 0.0)
        throw std::domain_error("ThermalModeSpec: omega must be > 0");
    if (kappa_hz < 0.0)
        throw std::domain_error("ThermalModeSpec: kappa must be >= 0");
    if (temperature_k <= 0.0)
        throw std::domain_error("ThermalModeSpec: temperature must be > 0");
    ThermalModeSpec s;
    s.omega_hz = omega_hz;
    s.kappa_hz = kappa_hz;
    s.temperature_k = temperature_k;
    s.n_bar = occupancy(omega_hz, temperature_k);
    return s;
}

ThermalModeSpec ThermalModeSpec::from_occupancy(double omega_hz,
                                                double kappa_hz,
                                                double n_bar) {
    if (omega_hz <= 0.0)
        throw std::domain_error("ThermalModeSpec: omega must be > 0");
    if (kappa_hz < 0.0)
        throw std::domain_error("ThermalModeSpec: kappa must be >= 0");
    if (n_bar < 0.0) throw std::domain_error("ThermalModeSpec: n_bar < 0");
    ThermalModeSpec s;
    s.omega_hz = omega_hz;
    s.kappa_hz = kappa_hz;
    s.n_bar = n_bar;
    if (n_bar > 0.0)  // n_bar == 0 is the T -> 0 limit; no finite temperature
        s.temperature_k = temperature_from_occupancy(omega_hz, n_bar);
    return s;
}

double ThermalModeSpec::occupancy_slope() const {
    if (!temperature_k) return 0.0;
    return occupancy_derivative(omega_hz, *temperature_k);
}

ProbeSpec::ProbeSpec(double omega_hz_, double kappa_hz_, double alpha_,
                     double residual_occupancy_)
    : omega_hz(omega_hz_),
      kappa_hz(kappa_hz_),
      alpha(alpha_),
      residual_occupancy(residual_occupancy_) {
    if (omega_hz <= 0.0) throw std::domain_error("ProbeSpec: omega must be > 0");
    if (kappa_hz < 0.0) throw std::domain_error("ProbeSpec: kappa must be >= 0");
    if (alpha < 0.0) throw std::domain_error("ProbeSpec: alpha must be >= 0");
    if (residual_occupancy < 0.0)
        throw std::domain_error("ProbeSpec: residual occupancy must be >= 0");
}

}  // namespace thermoq
