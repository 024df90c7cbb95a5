#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "thermoq/kernels.hpp"
#include "thermoq/physics.hpp"
#include "thermoq/rng.hpp"

using namespace thermoq;
using namespace thermoq::kernels;

TEST_CASE("dispatch reports a coherent mode") {
    SimdMode mode = active_mode();
    std::string name = mode_name(mode);
    CHECK((name == "scalar" || name == "avx2"));
    if (mode == SimdMode::avx2) CHECK(avx2_available());
}

TEST_CASE("ramsey weights: scalar reference values") {
    // w = exp(-A (1 - cos phi)).
    const double A = 3.0;
    const double phi[] = {0.0, two_pi / 4.0, two_pi / 2.0, -two_pi / 2.0, 37.5};
    double w[5];
    ramsey_weights_scalar(A, phi, w, 5);
    CHECK(w[0] == 1.0);
    CHECK(w[1] == doctest::Approx(std::exp(-3.0)).epsilon(1e-15));
    CHECK(w[2] == doctest::Approx(std::exp(-6.0)).epsilon(1e-15));
    CHECK(w[3] == w[2]);
    CHECK(w[4] ==
          doctest::Approx(std::exp(-3.0 * (1.0 - std::cos(37.5))))
              .epsilon(1e-15));
}

TEST_CASE("box-muller phases: scalar reference values") {
    // z = sigma * sqrt(-2 ln(1-u1)) * cos(2 pi u2).
    const double u1[] = {0.0, 0.5, 0.9999};
    const double u2[] = {0.0, 0.25, 0.125};
    double z[3];
    boxmuller_phases_scalar(2.0, u1, u2, z, 3);
    CHECK(z[0] == 0.0);  // ln(1) = 0
    // cos(pi/2) underflows to cos's tiny residue; magnitude bound instead.
    CHECK(std::abs(z[1]) < 1e-15);
    CHECK(z[2] == doctest::Approx(2.0 * std::sqrt(-2.0 * std::log(1.0 - 0.9999)) *
                                  std::cos(two_pi * 0.125))
                      .epsilon(1e-14));
}

TEST_CASE("vector and scalar kernels agree to rounding") {
    if (!avx2_available()) {
        MESSAGE("AVX2 not available on this host; equivalence pair untested");
        return;
    }
    const std::size_t n = 40013;  // odd on purpose: exercises the tail path
    std::vector<double> phi(n), u1(n), u2(n);
    SplitMix64 rng({2026, 8});
    for (std::size_t i = 0; i < n; ++i) {
        phi[i] = (rng.uniform() - 0.5) * 80.0;  // multiple 2 pi wraps
        u1[i] = rng.uniform();
        u2[i] = rng.uniform();
    }

    for (double A : {0.5, 2.0, 8.0}) {
        std::vector<double> ws(n), wv(n);
        ramsey_weights_scalar(A, phi.data(), ws.data(), n);
        ramsey_weights_avx2(A, phi.data(), wv.data(), n);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double denom = std::max(std::abs(ws[i]), 1e-300);
            worst = std::max(worst, std::abs(ws[i] - wv[i]) / denom);
        }
        // exp(-2A) spans down to e^{-16}; relative agreement must hold
        // everywhere, not just near 1.
        CHECK(worst <= 1e-13);
    }

    for (double sigma : {0.3, 1.0, 2.5}) {
        std::vector<double> zs(n), zv(n);
        boxmuller_phases_scalar(sigma, u1.data(), u2.data(), zs.data(), n);
        boxmuller_phases_avx2(sigma, u1.data(), u2.data(), zv.data(), n);
        double worst = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            worst = std::max(worst, std::abs(zs[i] - zv[i]) /
                                        std::max(std::abs(zs[i]), 1.0));
        CHECK(worst <= 1e-13);
    }

    // The dispatching entry point matches whichever path it selected.
    std::vector<double> wd(n), ws(n);
    ramsey_weights(2.0, phi.data(), wd.data(), n);
    if (active_mode() == SimdMode::avx2)
        ramsey_weights_avx2(2.0, phi.data(), ws.data(), n);
    else
        ramsey_weights_scalar(2.0, phi.data(), ws.data(), n);
    CHECK(std::memcmp(wd.data(), ws.data(), n * sizeof(double)) == 0);
}

TEST_CASE("kernel edge cases") {
    // Zero-length calls are no-ops.
    ramsey_weights(1.0, nullptr, nullptr, 0);
    boxmuller_phases(1.0, nullptr, nullptr, nullptr, 0);

    // u1 -> 1-2^-53 (the largest uniform draw) stays finite.
    double u1 = 1.0 - 0x1.0p-53, u2 = 0.7, z;
    boxmuller_phases(1.5, &u1, &u2, &z, 1);
    CHECK(std::isfinite(z));
    CHECK(std::abs(z) < 1.5 * 20.0);  // sqrt(2*53*ln 2) ~ 8.6

    // Weights stay inside (0, 1] for any phase.
    const double phis[] = {1e-9, 0.1, 3.0, 100.0, -1e4};
    double w[5];
    ramsey_weights(4.0, phis, w, 5);
    for (double x : w) {
        CHECK(x > 0.0);
        CHECK(x <= 1.0);
    }
}
