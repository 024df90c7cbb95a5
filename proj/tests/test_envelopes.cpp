#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "thermoq/envelopes.hpp"
#include "thermoq/physics.hpp"
#include "thermoq/quadrature.hpp"

using namespace thermoq;

namespace {
// The 1 GHz / 10 mK working point.
constexpr double kNbar = 8.3043733888619861e-3;
constexpr double kVar = 8.3733360062436252e-3;
}  // namespace

TEST_CASE("phase variance at lambda*tau = half cycle") {
    // 2*pi * 25 kHz * 20 us = pi, so sigma^2 = pi^2 n(n+1).
    CHECK(phase_variance(2.5e4, 2e-5, kNbar) ==
          doctest::Approx(8.2641513899022077e-2).epsilon(1e-14));
    // Doubling tau exactly quadruples the variance (pure powers of two).
    double s1 = phase_variance(5e4, 1e-5, 1.0);
    double s2 = phase_variance(5e4, 2e-5, 1.0);
    CHECK(s2 == 4.0 * s1);
    CHECK(phase_variance(5e4, 1e-5, 0.0) == 0.0);
}

TEST_CASE("closed-form envelope") {
    CHECK(coherence_envelope_closed(2.0, 8.2641513899022077e-2) ==
          doctest::Approx(0.53017354410679702).epsilon(1e-14));
    CHECK(coherence_envelope_closed(2.0, 0.0) == 1.0);
    // Saturates at e^{-2 alpha^2} for strong dephasing.
    CHECK(coherence_envelope_closed(2.0, 1e9) ==
          doctest::Approx(std::exp(-8.0)).epsilon(1e-12));
    // Monotone decreasing in gamma.
    double prev = 2.0;
    for (double g : {0.0, 1e-3, 1e-2, 0.1, 1.0, 10.0}) {
        double c = coherence_envelope_closed(1.0, g);
        CHECK(c < prev);
        prev = c;
    }
}

TEST_CASE("exact Gaussian-average envelope: frozen grid") {
    // Independently evaluated by adaptive quadrature of
    // E[exp(-2 alpha^2 (1 - cos phi))], phi ~ N(0, sigma^2).
    struct Point {
        double alpha, sigma_sq, value;
    };
    const Point pts[] = {
        {0.5, 0.1, 0.97644636516902394}, {0.5, 1.0, 0.84005704111996837},
        {0.5, 4.0, 0.68738676168853363}, {1.0, 0.1, 0.91444954544663259},
        {1.0, 1.0, 0.59552453181374476}, {1.0, 4.0, 0.36683794031822026},
        {2.0, 0.1, 0.74767676173746156}, {2.0, 1.0, 0.33769414445814638},
        {2.0, 4.0, 0.17981394102505188}, {2.0, 1e-3, 0.99602482123223318},
    };
    for (const Point& p : pts) {
        CHECK(coherence_envelope_exact(p.alpha, p.sigma_sq) ==
              doctest::Approx(p.value).epsilon(1e-13));
        // Series and quadrature routes agree far below test tolerance.
        CHECK(std::abs(coherence_envelope_exact(p.alpha, p.sigma_sq) -
                       coherence_envelope_exact_quadrature(p.alpha,
                                                           p.sigma_sq)) <=
              1e-10);
    }
    CHECK(coherence_envelope_exact(2.0, 0.0) == 1.0);
    // sigma^2 -> inf: phase fully randomized, e^{-A} I_0(A) with A = 8.
    CHECK(coherence_envelope_exact(2.0, 1e12) ==
          doctest::Approx(0.14343178185685031).epsilon(1e-12));
}

TEST_CASE("closed form overestimates the initial decay rate by 2") {
    double ratio = std::log(coherence_envelope_closed(2.0, 1e-3)) /
                   std::log(coherence_envelope_exact(2.0, 1e-3));
    CHECK(ratio == doctest::Approx(2.007481545).epsilon(1e-6));
    CHECK(ratio > 1.8);
    CHECK(ratio < 2.2);
}

TEST_CASE("finite-linewidth filter") {
    CHECK(filter_function(1e3, 1e-6) ==
          doctest::Approx(4.9895444531794784e-13).epsilon(1e-13));
    CHECK(filter_function(1e6, 1e-3) ==
          doctest::Approx(1.5912961279598475e-10).epsilon(1e-13));
    // kappa = 0 is the quasi-static tau^2/2 limit, exactly.
    CHECK(filter_function(0.0, 3e-6) == 0.5 * 3e-6 * 3e-6);
    // ... and tiny kappa approaches it smoothly.
    CHECK(filter_function(1e-4, 3e-6) ==
          doctest::Approx(0.5 * 3e-6 * 3e-6).epsilon(1e-8));
    // Long-time Markovian limit: f -> tau/kappa_ang.
    double kappa = 1e6, tau = 1.0;
    CHECK(filter_function(kappa, tau) ==
          doctest::Approx(tau / (two_pi * kappa)).epsilon(1e-5));
    // Monotone increasing in tau.
    double prev = -1.0;
    for (double t : {1e-7, 1e-6, 1e-5, 1e-4}) {
        double f = filter_function(1e3, t);
        CHECK(f > prev);
        prev = f;
    }
}

TEST_CASE("qubit-only envelope at the working point") {
    auto cp = qubit_only_envelope(2e4, kNbar, 1e3, 5e-5);
    CHECK(-std::log(cp.amplitude) ==
          doctest::Approx(0.59701157455459951).epsilon(1e-12));
    CHECK(cp.phase == doctest::Approx(0.10435583372446156).epsilon(1e-13));

    // kappa*tau >> 1: decay rate approaches the Markovian white-noise rate.
    double chi = 2e4, kappa = 1e6, tau = 1.0;
    double gamma_ang = two_pi * markovian_dephasing_rate_hz(chi, kVar, kappa);
    auto mk = qubit_only_envelope(chi, kNbar, kappa, tau);
    CHECK(-std::log(mk.amplitude) ==
          doctest::Approx(gamma_ang * tau).epsilon(1e-5));
}

TEST_CASE("parasitic readout envelope") {
    CHECK(parasitic_envelope(2e4, 4.0, 0.0, 3e-6) ==
          doctest::Approx(0.32078683976570282).epsilon(1e-13));
    // Quasi-static limit written out directly.
    double chi_ang = two_pi * 2e4;
    CHECK(parasitic_envelope(2e4, 4.0, 0.0, 3e-6) ==
          doctest::Approx(std::exp(-(2 * chi_ang) * (2 * chi_ang) * 4.0 *
                                   0.5 * 3e-6 * 3e-6))
              .epsilon(1e-14));
    CHECK(parasitic_envelope(2e4, 0.0, 0.0, 3e-6) == 1.0);
}

TEST_CASE("Markovian dephasing rate and readout mapping") {
    CHECK(markovian_dephasing_rate_hz(2e4, kVar, 4e9) ==
          doctest::Approx(3.3493344024974501e-3).epsilon(1e-14));
    CHECK(two_pi * markovian_dephasing_rate_hz(2e4, kVar, 4e9) ==
          doctest::Approx(2.1044488706603098e-2).epsilon(1e-14));
    CHECK(mapping_gain(0.1, 2e4, 1e-6) ==
          doctest::Approx(0.025132741228718346).epsilon(1e-15));
    CHECK(mapped_angle(0.025132741228718346, 2.0, two_pi / 8.0, 0.0) ==
          doctest::Approx(0.07108612701053386).epsilon(1e-14));
}

TEST_CASE("Gauss-Hermite rules") {
    const double sqrt_pi = 1.7724538509055160273;
    for (std::size_t order : {1u, 2u, 5u, 64u, 200u}) {
        const auto& rule = gauss_hermite(order);
        REQUIRE(rule.nodes.size() == order);
        double wsum = 0.0, xsum = 0.0, x2sum = 0.0;
        for (std::size_t i = 0; i < order; ++i) {
            wsum += rule.weights[i];
            xsum += rule.weights[i] * rule.nodes[i];
            x2sum += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
            if (i) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
            CHECK(rule.weights[i] > 0.0);
        }
        CHECK(wsum == doctest::Approx(sqrt_pi).epsilon(1e-13));
        CHECK(xsum == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
        if (order >= 2)
            CHECK(x2sum == doctest::Approx(sqrt_pi / 2.0).epsilon(1e-12));
    }
    // Degree-9 polynomial integrated exactly by the 5-point rule:
    // integral of x^8 e^{-x^2} = 105/16 sqrt(pi).
    const auto& r5 = gauss_hermite(5);
    double x8 = 0.0;
    for (std::size_t i = 0; i < 5; ++i)
        x8 += r5.weights[i] * std::pow(r5.nodes[i], 8);
    CHECK(x8 == doctest::Approx(105.0 / 16.0 * sqrt_pi).epsilon(1e-12));
}

TEST_CASE("envelope domain errors") {
    CHECK_THROWS_AS((void)phase_variance(5e4, -1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS((void)coherence_envelope_exact(1.0, -0.1),
                    std::domain_error);
    CHECK_THROWS_AS((void)filter_function(-1.0, 1e-6), std::domain_error);
    CHECK_THROWS_AS((void)markovian_dephasing_rate_hz(2e4, 1.0, 0.0),
                    std::domain_error);
}
