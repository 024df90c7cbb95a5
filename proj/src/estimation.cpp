#include "thermoq/estimation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace thermoq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// (dGamma)^2 e^{-2G}/(1 - e^{-2G}); both envelope-decay QFI terms reduce to
// this shape.  Written with exponentials in [0, 1] so deep decay degrades
// gracefully to (dGamma)^2 e^{-2G} instead of dividing by an overflowed
// expm1(2G); -expm1(-2G) also keeps the weak-decay denominator 2G accurate.
double amplitude_term(double gamma, double dgamma) {
    if (dgamma == 0.0) return 0.0;
    if (gamma <= 0.0) return 0.0;  // dgamma != 0 with gamma == 0 cannot occur:
                                   // both carry the same n(n+1)-type factor
    return dgamma * dgamma * std::exp(-2.0 * gamma) /
           (-std::expm1(-2.0 * gamma));
}

}  // namespace

double bloch_qfi(double C, double dC_dT, double Phi, double dPhi_dT) {
    (void)Phi;  // the QFI depends on the phase only through its slope
    if (C < 0.0 || C > 1.0) throw std::domain_error("bloch_qfi: C outside [0,1]");
    if (C == 1.0) {
        if (dC_dT != 0.0) return kInf;  // singular pure-state amplitude term
        return dPhi_dT * dPhi_dT;
    }
    return dC_dT * dC_dT / (1.0 - C * C) + C * C * dPhi_dT * dPhi_dT;
}

QfiResult qfi_coherence(const ThermalModeSpec& thermal,
                        const ProtocolParams& proto) {
    QfiResult out;
    out.strategy = Strategy::coherence_mediated;
    out.nu = proto.nu;

    double n = thermal.n_bar;
    double dn = thermal.occupancy_slope();
    double lt = two_pi * proto.lambda_hz * proto.tau_s;
    double a2 = proto.alpha * proto.alpha;

    if (n <= 0.0 || dn == 0.0 || lt == 0.0 || a2 == 0.0) {
        out.qfi = 0.0;  // analytic zero-temperature / zero-coupling limit
        out.sensitivity = kInf;
        return out;
    }

    double gamma = lt * lt * n * (n + 1.0);
    double dgamma = lt * lt * (1.0 + 2.0 * n) * dn;
    // g = 2 a^2 (1 - e^{-Gamma}); C = e^{-g}; dC = -C dg;
    // F = (dC)^2/(1-C^2) = (dg)^2 / expm1(2g).
    double g = -2.0 * a2 * std::expm1(-gamma);
    double dg = 2.0 * a2 * std::exp(-gamma) * dgamma;
    out.qfi = amplitude_term(g, dg);
    out.sensitivity = sensitivity(out.qfi, proto.nu);
    return out;
}

double qfi_coherence_weak(const ThermalModeSpec& thermal,
                          const ProtocolParams& proto) {
    double n = thermal.n_bar;
    if (n <= 0.0 || !thermal.temperature_k) return 0.0;
    double T = *thermal.temperature_k;
    double lt = two_pi * proto.lambda_hz * proto.tau_s;
    double x_over_T = hbar * two_pi * thermal.omega_hz / (k_B * T * T);
    double a2 = proto.alpha * proto.alpha;
    return a2 * lt * lt * n * x_over_T * x_over_T;
}

QfiResult qfi_phase(const ThermalModeSpec& thermal, double lambda_hz,
                    double tau_s, long nu) {
    QfiResult out;
    out.strategy = Strategy::phase_shift;
    out.nu = nu;
    double s = two_pi * lambda_hz * tau_s * thermal.occupancy_slope();
    out.qfi = s * s;
    out.sensitivity = sensitivity(out.qfi, nu);
    return out;
}

double qfi_phase_pure_state(double alpha, double dphi_dT) {
    if (alpha < 0.0) throw std::domain_error("qfi_phase_pure_state: alpha < 0");
    return 4.0 * alpha * alpha * dphi_dT * dphi_dT;
}

QfiResult qfi_qubit_only(const ThermalModeSpec& thermal, double chi_a_hz,
                         double tau_s, long nu) {
    QfiResult out;
    out.strategy = Strategy::qubit_only;
    out.nu = nu;

    double n = thermal.n_bar;
    double dn = thermal.occupancy_slope();
    if (n <= 0.0 || dn == 0.0) {
        out.qfi = 0.0;
        out.sensitivity = kInf;
        return out;
    }

    double two_chi = 2.0 * two_pi * chi_a_hz;
    double f = filter_function(thermal.kappa_hz, tau_s);
    double gamma = two_chi * two_chi * n * (n + 1.0) * f;
    double dgamma = two_chi * two_chi * f * (1.0 + 2.0 * n) * dn;
    double phase_slope = two_chi * tau_s * dn;
    out.qfi = amplitude_term(gamma, dgamma) +
              std::exp(-2.0 * gamma) * phase_slope * phase_slope;
    out.sensitivity = sensitivity(out.qfi, nu);
    return out;
}

double sensitivity(double qfi, long nu) {
    if (nu < 1) throw std::domain_error("sensitivity: nu must be >= 1");
    if (qfi < 0.0) throw std::domain_error("sensitivity: negative QFI");
    if (qfi == 0.0) return kInf;  // flagged: no information at this point
    return 1.0 / std::sqrt(double(nu) * qfi);
}

double fisher_rate(const std::function<double(double)>& qfi_of_tau,
                   double tau_s, double tau_oh_s) {
    if (tau_s < 0.0 || tau_oh_s < 0.0)
        throw std::domain_error("fisher_rate: negative time");
    double total = tau_s + tau_oh_s;
    if (total == 0.0) throw std::domain_error("fisher_rate: zero total time");
    return qfi_of_tau(tau_s) / total;
}

CoherencePoint strategy_coherence(Strategy strategy, double omega_hz,
                                  double kappa_hz, double temperature_k,
                                  const ProtocolParams& proto) {
    double n = occupancy(omega_hz, temperature_k);
    switch (strategy) {
        case Strategy::coherence_mediated: {
            double gamma = phase_variance(proto.lambda_hz, proto.tau_s, n);
            return {coherence_envelope_closed(proto.alpha, gamma), 0.0};
        }
        case Strategy::phase_shift: {
            // Unit visibility; the temperature lives in the phase.
            return {1.0, two_pi * proto.lambda_hz * proto.tau_s * n};
        }
        case Strategy::qubit_only:
            return qubit_only_envelope(proto.chi_a_hz, n, kappa_hz, proto.tau_s);
    }
    throw std::logic_error("strategy_coherence: unknown strategy");
}

namespace {

double strategy_qfi(Strategy strategy, const ThermalModeSpec& thermal,
                    const ProtocolParams& proto, double tau_s) {
    ProtocolParams p = proto;
    p.tau_s = tau_s;
    switch (strategy) {
        case Strategy::coherence_mediated: return qfi_coherence(thermal, p).qfi;
        case Strategy::phase_shift:
            return qfi_phase(thermal, p.lambda_hz, tau_s, p.nu).qfi;
        case Strategy::qubit_only:
            return qfi_qubit_only(thermal, p.chi_a_hz, tau_s, p.nu).qfi;
    }
    throw std::logic_error("strategy_qfi: unknown strategy");
}

}  // namespace

OptimalTau optimal_tau(Strategy strategy, const ThermalModeSpec& thermal,
                       const ProtocolParams& proto, double tau_lo_s,
                       double tau_hi_s) {
    if (!(tau_lo_s > 0.0) || !(tau_hi_s > tau_lo_s))
        throw std::domain_error("optimal_tau: need 0 < tau_lo < tau_hi");

    auto objective = [&](double u) {  // u = log(tau)
        double tau = std::exp(u);
        double f = strategy_qfi(strategy, thermal, proto, tau);
        if (proto.tau_oh_s > 0.0) f /= (tau + proto.tau_oh_s);
        return f;
    };

    // Golden-section on log(tau) to 1e-3 relative in tau.
    const double invphi = 0.6180339887498948482;
    double a = std::log(tau_lo_s), b = std::log(tau_hi_s);
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = objective(c), fd = objective(d);
    const double tol = 1e-3;  // log-space width ~ relative width in tau
    while (b - a > tol) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = objective(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = objective(d);
        }
    }

    OptimalTau out;
    double u_star = 0.5 * (a + b);
    out.tau_s = std::exp(u_star);
    // A maximum pinned against a bracket edge means the objective was
    // monotone over the bracket; report it rather than pretending an
    // interior optimum.
    double lo = std::log(tau_lo_s), hi = std::log(tau_hi_s);
    out.at_lower_edge = (u_star - lo) <= 2.0 * tol;
    out.at_upper_edge = (hi - u_star) <= 2.0 * tol;
    return out;
}

double finite_difference_qfi(Strategy strategy, const ThermalModeSpec& thermal,
                             const ProtocolParams& proto, double rel_step) {
    if (!(rel_step > 0.0) || rel_step > 1e-3)
        throw std::domain_error("finite_difference_qfi: rel_step outside (0, 1e-3]");
    if (!thermal.temperature_k)
        throw std::domain_error("finite_difference_qfi: needs a temperature");
    double T = *thermal.temperature_k;
    double h = rel_step * T;

    auto point = [&](double temp) {
        return strategy_coherence(strategy, thermal.omega_hz, thermal.kappa_hz,
                                  temp, proto);
    };
    CoherencePoint lo = point(T - h);
    CoherencePoint mid = point(T);
    CoherencePoint hi = point(T + h);
    double dC = (hi.amplitude - lo.amplitude) / (2.0 * h);
    double dPhi = (hi.phase - lo.phase) / (2.0 * h);
    return bloch_qfi(mid.amplitude, dC, mid.phase, dPhi);
}

}  // namespace thermoq
