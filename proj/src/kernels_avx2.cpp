// AVX2 + FMA variants of the Monte Carlo array kernels.  This translation
// unit is compiled with -mavx2 -mfma on x86_64 only; callers reach it through
// the runtime dispatch in kernels.cpp, never directly on unsupported CPUs.
//
// exp / cos / log are the classic Cephes double-precision rationals (Moshier,
// netlib cephes), evaluated lane-parallel.  Accuracy is a few ulp against
// libm, which the equivalence tests bound explicitly.

#if defined(THERMOQ_HAVE_AVX2)

#include <immintrin.h>

#include <cstddef>

#include "thermoq/kernels.hpp"

namespace thermoq::kernels {

namespace {

// exp(x) for x in [-708.396, 709]; inputs outside are clamped (the callers'
// arguments are -A*(1-cos) <= 0, so the upper clamp is never live).
inline __m256d vexp(__m256d x) {
    const __m256d one = _mm256_set1_pd(1.0);
    x = _mm256_max_pd(x, _mm256_set1_pd(-708.396418532264106224));
    x = _mm256_min_pd(x, _mm256_set1_pd(709.0));

    // n = floor(log2(e) * x + 0.5); reduce x by n*ln2 in two parts.
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    __m256d px = _mm256_floor_pd(_mm256_fmadd_pd(log2e, x, _mm256_set1_pd(0.5)));
    // Integer-valued double -> int64 lanes via the 2^52+2^51 bias trick.
    const __m256d bias = _mm256_set1_pd(6755399441055744.0);
    __m256i n = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(px, bias)),
                                 _mm256_castpd_si256(bias));
    x = _mm256_fnmadd_pd(px, _mm256_set1_pd(6.93145751953125e-1), x);
    x = _mm256_fnmadd_pd(px, _mm256_set1_pd(1.42860682030941723212e-6), x);

    __m256d xx = _mm256_mul_pd(x, x);
    __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
    p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(3.02994407707441961300e-2));
    p = _mm256_fmadd_pd(p, xx, _mm256_set1_pd(9.99999999999999999910e-1));
    p = _mm256_mul_pd(p, x);
    __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
    q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.52448340349684104192e-3));
    q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.27265548208155028766e-1));
    q = _mm256_fmadd_pd(q, xx, _mm256_set1_pd(2.0));
    __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
    e = _mm256_fmadd_pd(e, _mm256_set1_pd(2.0), one);

    // e * 2^n (n in [-1022, 1023] after the clamps).
    __m256i pow2 = _mm256_slli_epi64(
        _mm256_add_epi64(n, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(e, _mm256_castsi256_pd(pow2));
}

// cos(x), |x| up to ~1e9 (int32 quadrant index); the callers' phases are far
// smaller.  Extended-precision pi/4 reduction, then the sin/cos minimax
// polynomials selected per octant.
inline __m256d vcos(__m256d x) {
    const __m256d abs_mask =
        _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    x = _mm256_and_pd(x, abs_mask);

    // Even quadrant count y = 2*floor((x*4/pi + 1)/2), exactly the classic
    // "round odd octants up" rule.
    const __m256d four_over_pi = _mm256_set1_pd(1.27323954473516268615);
    __m256d u = _mm256_mul_pd(x, four_over_pi);
    __m256d v = _mm256_floor_pd(
        _mm256_mul_pd(_mm256_add_pd(u, _mm256_set1_pd(1.0)),
                      _mm256_set1_pd(0.5)));
    __m256d y = _mm256_add_pd(v, v);

    __m128i j32 = _mm256_cvtpd_epi32(y);  // y is an exact small integer
    __m256i j = _mm256_cvtepi32_epi64(j32);
    j = _mm256_and_si256(j, _mm256_set1_epi64x(7));
    __m256d oct_high = _mm256_castsi256_pd(_mm256_cmpeq_epi64(
        _mm256_and_si256(j, _mm256_set1_epi64x(4)), _mm256_set1_epi64x(4)));
    __m256d use_sin = _mm256_castsi256_pd(_mm256_cmpeq_epi64(
        _mm256_and_si256(j, _mm256_set1_epi64x(3)), _mm256_set1_epi64x(2)));

    // z = ((x - y*DP1) - y*DP2) - y*DP3
    __m256d z = _mm256_fnmadd_pd(y, _mm256_set1_pd(7.85398125648498535156e-1), x);
    z = _mm256_fnmadd_pd(y, _mm256_set1_pd(3.77489470793079817668e-8), z);
    z = _mm256_fnmadd_pd(y, _mm256_set1_pd(2.69515142907905952645e-15), z);
    __m256d zz = _mm256_mul_pd(z, z);

    __m256d s = _mm256_set1_pd(1.58962301576546568060e-10);
    s = _mm256_fmadd_pd(s, zz, _mm256_set1_pd(-2.50507477628578072866e-8));
    s = _mm256_fmadd_pd(s, zz, _mm256_set1_pd(2.75573136213857245213e-6));
    s = _mm256_fmadd_pd(s, zz, _mm256_set1_pd(-1.98412698295895385996e-4));
    s = _mm256_fmadd_pd(s, zz, _mm256_set1_pd(8.33333333332211858878e-3));
    s = _mm256_fmadd_pd(s, zz, _mm256_set1_pd(-1.66666666666666307295e-1));
    s = _mm256_fmadd_pd(_mm256_mul_pd(s, zz), z, z);  // z + z*zz*P(zz)

    __m256d c = _mm256_set1_pd(-1.13585365213876817300e-11);
    c = _mm256_fmadd_pd(c, zz, _mm256_set1_pd(2.08757008419747316778e-9));
    c = _mm256_fmadd_pd(c, zz, _mm256_set1_pd(-2.75573141792967388112e-7));
    c = _mm256_fmadd_pd(c, zz, _mm256_set1_pd(2.48015872888517179954e-5));
    c = _mm256_fmadd_pd(c, zz, _mm256_set1_pd(-1.38888888888730564116e-3));
    c = _mm256_fmadd_pd(c, zz, _mm256_set1_pd(4.16666666666665929218e-2));
    c = _mm256_mul_pd(_mm256_mul_pd(c, zz), zz);
    c = _mm256_fnmadd_pd(zz, _mm256_set1_pd(0.5), _mm256_add_pd(c, _mm256_set1_pd(1.0)));

    __m256d r = _mm256_blendv_pd(c, s, use_sin);
    __m256d sign = _mm256_and_pd(_mm256_xor_pd(oct_high, use_sin),
                                 _mm256_set1_pd(-0.0));
    return _mm256_xor_pd(r, sign);
}

// ln(x) for normal positive x (callers pass 1-u in (0, 1]).
inline __m256d vlog(__m256d x) {
    const __m256i mant_mask = _mm256_set1_epi64x(0x000fffffffffffffLL);
    const __m256i half_bits = _mm256_set1_epi64x(0x3fe0000000000000LL);
    __m256i bits = _mm256_castpd_si256(x);
    __m256i ei = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52),
                                  _mm256_set1_epi64x(1022));
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, mant_mask), half_bits));

    const __m256d sqrth = _mm256_set1_pd(0.70710678118654752440);
    __m256d below = _mm256_cmp_pd(m, sqrth, _CMP_LT_OQ);
    ei = _mm256_add_epi64(ei, _mm256_castpd_si256(below));  // mask == -1
    __m256d xm = _mm256_sub_pd(
        _mm256_blendv_pd(m, _mm256_add_pd(m, m), below), _mm256_set1_pd(1.0));

    const __m256d bias = _mm256_set1_pd(6755399441055744.0);
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(
            _mm256_add_epi64(ei, _mm256_castpd_si256(bias))),
        bias);

    __m256d z = _mm256_mul_pd(xm, xm);
    __m256d p = _mm256_set1_pd(1.01875663804580931796e-4);
    p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(4.97494994976747001425e-1));
    p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(4.70579119878881725854e0));
    p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(1.44989225341610930846e1));
    p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(1.79368678507819816313e1));
    p = _mm256_fmadd_pd(p, xm, _mm256_set1_pd(7.70838733755885391666e0));
    __m256d q = _mm256_add_pd(xm, _mm256_set1_pd(1.12873587189167450590e1));
    q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(4.52279145837532221105e1));
    q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(8.29875266912776603211e1));
    q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(7.11544750618563894466e1));
    q = _mm256_fmadd_pd(q, xm, _mm256_set1_pd(2.31251620126765340583e1));

    __m256d y = _mm256_div_pd(
        _mm256_mul_pd(_mm256_mul_pd(xm, z), p), q);
    y = _mm256_fnmadd_pd(e, _mm256_set1_pd(2.121944400546905827679e-4), y);
    y = _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), y);
    __m256d r = _mm256_add_pd(xm, y);
    return _mm256_fmadd_pd(e, _mm256_set1_pd(0.693359375), r);
}

}  // namespace

void ramsey_weights_avx2(double A, const double* phi, double* w,
                         std::size_t n) {
    const __m256d neg_a = _mm256_set1_pd(-A);
    const __m256d one = _mm256_set1_pd(1.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d c = vcos(_mm256_loadu_pd(phi + i));
        __m256d arg = _mm256_mul_pd(neg_a, _mm256_sub_pd(one, c));
        _mm256_storeu_pd(w + i, vexp(arg));
    }
    if (i < n) {
        // Short tail through the same vector math (padded), so every element
        // of one call sees identical arithmetic.
        double in[4] = {0.0, 0.0, 0.0, 0.0};
        double out[4];
        for (std::size_t k = i; k < n; ++k) in[k - i] = phi[k];
        __m256d c = vcos(_mm256_loadu_pd(in));
        _mm256_storeu_pd(out, vexp(_mm256_mul_pd(neg_a, _mm256_sub_pd(one, c))));
        for (std::size_t k = i; k < n; ++k) w[k] = out[k - i];
    }
}

void boxmuller_phases_avx2(double sigma, const double* u1, const double* u2,
                           double* z, std::size_t n) {
    const __m256d vsigma = _mm256_set1_pd(sigma);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d neg_two = _mm256_set1_pd(-2.0);
    const __m256d two_pi =
        _mm256_set1_pd(6.28318530717958647692528676655900577);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d r = _mm256_sqrt_pd(_mm256_mul_pd(
            neg_two, vlog(_mm256_sub_pd(one, _mm256_loadu_pd(u1 + i)))));
        __m256d c = vcos(_mm256_mul_pd(two_pi, _mm256_loadu_pd(u2 + i)));
        _mm256_storeu_pd(z + i,
                         _mm256_mul_pd(vsigma, _mm256_mul_pd(r, c)));
    }
    if (i < n) {
        double a[4] = {0.0, 0.0, 0.0, 0.0};
        double b[4] = {0.0, 0.0, 0.0, 0.0};
        double out[4];
        for (std::size_t k = i; k < n; ++k) {
            a[k - i] = u1[k];
            b[k - i] = u2[k];
        }
        __m256d r = _mm256_sqrt_pd(_mm256_mul_pd(
            neg_two, vlog(_mm256_sub_pd(one, _mm256_loadu_pd(a)))));
        __m256d c = vcos(_mm256_mul_pd(two_pi, _mm256_loadu_pd(b)));
        _mm256_storeu_pd(out, _mm256_mul_pd(vsigma, _mm256_mul_pd(r, c)));
        for (std::size_t k = i; k < n; ++k) z[k] = out[k - i];
    }
}

}  // namespace thermoq::kernels

#endif  // THERMOQ_HAVE_AVX2
