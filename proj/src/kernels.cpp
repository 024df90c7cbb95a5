#include "thermoq/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace thermoq::kernels {

namespace {

SimdMode resolve_mode() {
    if (const char* env = std::getenv("THERMOQ_SIMD")) {
        std::string v(env);
        if (v == "scalar") return SimdMode::scalar;
        if (v == "avx2")
            // A forced request on unsupported hardware degrades to scalar
            // rather than crashing on an illegal instruction.
            return avx2_available() ? SimdMode::avx2 : SimdMode::scalar;
        // Unknown values (and "auto") fall through to detection.
    }
    return avx2_available() ? SimdMode::avx2 : SimdMode::scalar;
}

}  // namespace

SimdMode active_mode() {
    static const SimdMode mode = resolve_mode();
    return mode;
}

const char* mode_name(SimdMode mode) {
    return mode == SimdMode::avx2 ? "avx2" : "scalar";
}

bool avx2_available() {
#if defined(THERMOQ_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

void ramsey_weights_scalar(double A, const double* phi, double* w,
                           std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        w[i] = std::exp(-A * (1.0 - std::cos(phi[i])));
}

void boxmuller_phases_scalar(double sigma, const double* u1, const double* u2,
                             double* z, std::size_t n) {
    constexpr double two_pi = 6.28318530717958647692528676655900577;
    for (std::size_t i = 0; i < n; ++i)
        z[i] = sigma * std::sqrt(-2.0 * std::log(1.0 - u1[i])) *
               std::cos(two_pi * u2[i]);
}

#if !defined(THERMOQ_HAVE_AVX2)
// Non-x86 builds still provide the symbols so callers can link; they defer
// to the scalar reference.
void ramsey_weights_avx2(double A, const double* phi, double* w,
                         std::size_t n) {
    ramsey_weights_scalar(A, phi, w, n);
}

void boxmuller_phases_avx2(double sigma, const double* u1, const double* u2,
                           double* z, std::size_t n) {
    boxmuller_phases_scalar(sigma, u1, u2, z, n);
}
#endif

void ramsey_weights(double A, const double* phi, double* w, std::size_t n) {
    if (active_mode() == SimdMode::avx2)
        ramsey_weights_avx2(A, phi, w, n);
    else
        ramsey_weights_scalar(A, phi, w, n);
}

void boxmuller_phases(double sigma, const double* u1, const double* u2,
                      double* z, std::size_t n) {
    if (active_mode() == SimdMode::avx2)
        boxmuller_phases_avx2(sigma, u1, u2, z, n);
    else
        boxmuller_phases_scalar(sigma, u1, u2, z, n);
}

}  // namespace thermoq::kernels
