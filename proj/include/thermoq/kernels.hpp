#pragma once

#include <cstddef>

// Array kernels on the Monte Carlo hot path, in a scalar libm reference
// implementation and an AVX2 variant selected at runtime.  The two variants
// are equivalence-tested (unit tests bound the element-wise difference); the
// discrete integer sampling stays scalar in every path so that a one-ulp
// difference can never change a sampled integer.
//
// Selection: THERMOQ_SIMD = scalar | avx2 | auto (default auto -> CPUID).

namespace thermoq::kernels {

enum class SimdMode { scalar, avx2 };

// The mode the dispatching entry points resolved at first use.
SimdMode active_mode();
const char* mode_name(SimdMode mode);

// True when the avx2 variant is compiled in and the CPU supports it.
bool avx2_available();

// w[i] = exp(-A * (1 - cos(phi[i]))) — the Ramsey weight transform.
void ramsey_weights(double A, const double* phi, double* w, std::size_t n);
void ramsey_weights_scalar(double A, const double* phi, double* w,
                           std::size_t n);
void ramsey_weights_avx2(double A, const double* phi, double* w,
                         std::size_t n);

// z[i] = sigma * sqrt(-2 ln(1 - u1[i])) * cos(2 pi u2[i]) — Box-Muller
// (cosine branch), u1, u2 uniform on [0, 1).
void boxmuller_phases(double sigma, const double* u1, const double* u2,
                      double* z, std::size_t n);
void boxmuller_phases_scalar(double sigma, const double* u1, const double* u2,
                             double* z, std::size_t n);
void boxmuller_phases_avx2(double sigma, const double* u1, const double* u2,
                           double* z, std::size_t n);

}  // namespace thermoq::kernels
