#include "thermoq/envelopes.hpp"

#include <cmath>
#include <stdexcept>

#include "thermoq/physics.hpp"
#include "thermoq/quadrature.hpp"

namespace thermoq {

double phase_variance(double lambda_hz, double tau_s, double n_bar) {
    if (tau_s < 0.0) throw std::domain_error("phase_variance: tau < 0");
    if (n_bar < 0.0) throw std::domain_error("phase_variance: n_bar < 0");
    double lt = two_pi * lambda_hz * tau_s;
    return lt * lt * n_bar * (n_bar + 1.0);
}

double coherence_envelope_closed(double alpha, double gamma_phi) {
    if (gamma_phi < 0.0)
        throw std::domain_error("coherence_envelope_closed: gamma_phi < 0");
    double a2 = alpha * alpha;
    // 1 - e^{-Gamma} via expm1 keeps the weak-dephasing tail accurate.
    return std::exp(2.0 * a2 * std::expm1(-gamma_phi));
}

double coherence_envelope_exact(double alpha, double sigma_sq) {
    if (sigma_sq < 0.0)
        throw std::domain_error("coherence_envelope_exact: sigma_sq < 0");
    if (sigma_sq == 0.0) return 1.0;
    double A = 2.0 * alpha * alpha;
    if (A == 0.0) return 1.0;
    if (A > 600.0)  // e^{-A} I_k(A) would overflow the unscaled Bessel call
        return coherence_envelope_exact_quadrature(alpha, sigma_sq);

    // e^{-A} [ I_0(A) + 2 sum_k I_k(A) e^{-k^2 sigma^2/2} ]; with all the
    // Gaussian factors at 1 the bracket sums to e^{A} exactly, so the result
    // lands in [e^{-A} I_0(A), 1].
    double sum = std::cyl_bessel_i(0.0, A);
    for (int k = 1; k <= 3000; ++k) {
        double damp = std::exp(-0.5 * double(k) * double(k) * sigma_sq);
        if (damp == 0.0) break;
        double term = 2.0 * std::cyl_bessel_i(double(k), A) * damp;
        sum += term;
        if (term < 1e-14 * sum) break;
    }
    return std::exp(-A) * sum;
}

double coherence_envelope_exact_quadrature(double alpha, double sigma_sq) {
    if (sigma_sq < 0.0)
        throw std::domain_error("coherence_envelope_exact: sigma_sq < 0");
    if (sigma_sq == 0.0) return 1.0;
    double A = 2.0 * alpha * alpha;
    if (A == 0.0) return 1.0;

    // <exp(-A(1-cos phi))>, phi ~ N(0, sigma^2): substitute phi = sqrt(2) sigma x
    // to get the e^{-x^2} weight; double the order until stable to 1e-12.
    // Wide sigma makes the integrand oscillate under the Gaussian, so the
    // escalation has to reach a few thousand nodes before it resolves.
    double scale = std::sqrt(2.0 * sigma_sq);
    const double inv_sqrt_pi = 0.5641895835477562869480794515607726;
    double prev = 0.0;
    for (std::size_t order = 200; order <= 3200; order *= 2) {
        const GaussHermiteRule& rule = gauss_hermite(order);
        double acc = 0.0, comp = 0.0;  // Kahan: the weights span ~300 decades
        for (std::size_t i = 0; i < order; ++i) {
            double f = rule.weights[i] *
                       std::exp(-A * (1.0 - std::cos(scale * rule.nodes[i])));
            double y = f - comp;
            double t = acc + y;
            comp = (t - acc) - y;
            acc = t;
        }
        double value = inv_sqrt_pi * acc;
        if (order > 200 && std::abs(value - prev) <= 1e-12) return value;
        prev = value;
    }
    return prev;
}

double filter_function(double kappa_hz, double tau_s) {
    if (kappa_hz < 0.0) throw std::domain_error("filter_function: kappa < 0");
    if (tau_s < 0.0) throw std::domain_error("filter_function: tau < 0");
    if (kappa_hz == 0.0) return 0.5 * tau_s * tau_s;  // analytic kappa -> 0 branch
    double k = two_pi * kappa_hz;
    double x = k * tau_s;
    // x - 1 + e^{-x} written as x + expm1(-x): the O(1) terms never meet, so
    // the result stays positive down to x ~ 1e-300.
    return (x + std::expm1(-x)) / (k * k);
}

CoherencePoint qubit_only_envelope(double chi_a_hz, double n_bar,
                                   double kappa_hz, double tau_s) {
    if (n_bar < 0.0) throw std::domain_error("qubit_only_envelope: n_bar < 0");
    double two_chi = 2.0 * two_pi * chi_a_hz;
    double gamma =
        two_chi * two_chi * n_bar * (n_bar + 1.0) * filter_function(kappa_hz, tau_s);
    return {std::exp(-gamma), two_chi * n_bar * tau_s};
}

double parasitic_envelope(double chi_m_hz, double var_n, double kappa_m_hz,
                          double tau_R_s) {
    if (var_n < 0.0) throw std::domain_error("parasitic_envelope: var_n < 0");
    double chi = two_pi * chi_m_hz;
    return std::exp(-4.0 * chi * chi * var_n * filter_function(kappa_m_hz, tau_R_s));
}

double markovian_dephasing_rate_hz(double chi_hz, double var_n,
                                   double kappa_hz) {
    if (kappa_hz <= 0.0)
        throw std::domain_error("markovian_dephasing_rate: kappa must be > 0");
    if (var_n < 0.0)
        throw std::domain_error("markovian_dephasing_rate: var_n < 0");
    double chi = two_pi * chi_hz;
    double gamma_rad = 4.0 * chi * chi * var_n / (two_pi * kappa_hz);
    return gamma_rad / two_pi;
}

double mapping_gain(double beta, double chi_b_hz, double tau_s) {
    if (beta < 0.0 || chi_b_hz < 0.0 || tau_s < 0.0)
        throw std::domain_error("mapping_gain: negative input");
    return 2.0 * beta * two_pi * chi_b_hz * tau_s;
}

double mapped_angle(double g_m, double alpha, double phi_b, double theta) {
    return g_m * 2.0 * alpha * std::cos(phi_b - theta);
}

}  // namespace thermoq
