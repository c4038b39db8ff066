#include <immintrin.h>

#include <cmath>

#include "negspec/simd/dispatch.hpp"

namespace negspec::simd::detail {

namespace {

inline __m256d polevl(__m256d x, const double* c, int degree) {
    __m256d acc = _mm256_set1_pd(c[0]);
    for (int i = 1; i <= degree; ++i)
        acc = _mm256_fmadd_pd(acc, x, _mm256_set1_pd(c[i]));
    return acc;
}

// Cephes-style cosine with three-part Cody-Waite reduction.
inline __m256d vcos(__m256d x) {
    static constexpr double sincof[] = {
        1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
        -1.98412698295895385996e-4, 8.33333333332211858878e-3, -1.66666666666666307295e-1};
    static constexpr double coscof[] = {
        -1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
        2.48015872888517045348e-5, -1.38888888888730564116e-3, 4.16666666666665929218e-2};
    const __m256d dp1 = _mm256_set1_pd(7.85398125648498535156e-1);
    const __m256d dp2 = _mm256_set1_pd(3.77489470793079817668e-8);
    const __m256d dp3 = _mm256_set1_pd(2.69515142907905952645e-15);
    const __m256d four_over_pi = _mm256_set1_pd(1.27323954473516268615);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d four = _mm256_set1_pd(4.0);
    const __m256d eight = _mm256_set1_pd(8.0);
    const __m256d half = _mm256_set1_pd(0.5);

    x = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
    __m256d y = _mm256_floor_pd(_mm256_mul_pd(x, four_over_pi));
    __m256d j = _mm256_sub_pd(y, _mm256_mul_pd(eight, _mm256_floor_pd(_mm256_mul_pd(y, _mm256_set1_pd(0.125)))));
    const __m256d odd = _mm256_sub_pd(j, _mm256_mul_pd(two, _mm256_floor_pd(_mm256_mul_pd(j, half))));
    y = _mm256_add_pd(y, odd);
    j = _mm256_add_pd(j, odd);
    j = _mm256_blendv_pd(j, _mm256_setzero_pd(), _mm256_cmp_pd(j, eight, _CMP_EQ_OQ));

    const __m256d gt3 = _mm256_cmp_pd(j, _mm256_set1_pd(3.0), _CMP_GT_OQ);
    j = _mm256_blendv_pd(j, _mm256_sub_pd(j, four), gt3);
    __m256d sign = _mm256_blendv_pd(one, _mm256_set1_pd(-1.0), gt3);
    const __m256d gt1 = _mm256_cmp_pd(j, one, _CMP_GT_OQ);
    sign = _mm256_blendv_pd(sign, _mm256_sub_pd(_mm256_setzero_pd(), sign), gt1);

    __m256d z = _mm256_fnmadd_pd(y, dp1, x);
    z = _mm256_fnmadd_pd(y, dp2, z);
    z = _mm256_fnmadd_pd(y, dp3, z);
    const __m256d zz = _mm256_mul_pd(z, z);

    const __m256d ps = _mm256_fmadd_pd(_mm256_mul_pd(z, zz), polevl(zz, sincof, 5), z);
    const __m256d pc = _mm256_fmadd_pd(_mm256_mul_pd(zz, zz), polevl(zz, coscof, 5),
                                       _mm256_fnmadd_pd(half, zz, one));
    const __m256d use_sin = _mm256_cmp_pd(j, two, _CMP_EQ_OQ);
    return _mm256_mul_pd(sign, _mm256_blendv_pd(pc, ps, use_sin));
}

// Cephes-style exponential, flushed to zero below -708.
inline __m256d vexp(__m256d x) {
    static constexpr double P[] = {1.26177193074810590878e-4, 3.02994407707441961300e-2,
                                   9.99999999999999999910e-1};
    static constexpr double Q[] = {3.00198505138664455042e-6, 2.52448340349684104192e-3,
                                   2.27265548208155028766e-1, 2.00000000000000000009e0};
    const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
    const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
    const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
    const __m256d lo = _mm256_set1_pd(-708.0);

    const __m256d underflow = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
    x = _mm256_max_pd(x, lo);
    const __m256d n = _mm256_floor_pd(_mm256_fmadd_pd(log2e, x, _mm256_set1_pd(0.5)));
    x = _mm256_fnmadd_pd(n, c1, x);
    x = _mm256_fnmadd_pd(n, c2, x);
    const __m256d xx = _mm256_mul_pd(x, x);
    const __m256d px = _mm256_mul_pd(x, polevl(xx, P, 2));
    __m256d e = _mm256_div_pd(px, _mm256_sub_pd(polevl(xx, Q, 3), px));
    e = _mm256_fmadd_pd(_mm256_set1_pd(2.0), e, _mm256_set1_pd(1.0));

    const __m256d magic = _mm256_set1_pd(0x1.8p52);
    const __m256i ni = _mm256_sub_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)),
                                        _mm256_castpd_si256(magic));
    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(ni, _mm256_set1_epi64x(1023)), 52);
    e = _mm256_mul_pd(e, _mm256_castsi256_pd(bits));
    return _mm256_blendv_pd(e, _mm256_setzero_pd(), underflow);
}

} // namespace

void mode_terms_avx2(const double* nx, const double* ny, const double* nz, std::size_t count,
                     const ModeTermParams& p, double* out) {
    const __m256d kx = _mm256_set1_pd(p.kx), ky = _mm256_set1_pd(p.ky), kz = _mm256_set1_pd(p.kz);
    const __m256d h = _mm256_set1_pd(p.spacing);
    const __m256d tau = _mm256_set1_pd(p.tau);
    const __m256d sgn = _mm256_set1_pd(p.phase_sign);
    const __m256d minus_alpha = _mm256_set1_pd(-p.alpha);
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);

    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d ax = _mm256_loadu_pd(nx + i);
        const __m256d ay = _mm256_loadu_pd(ny + i);
        const __m256d az = _mm256_loadu_pd(nz + i);
        const __m256d bx = _mm256_add_pd(ax, kx);
        const __m256d by = _mm256_add_pd(ay, ky);
        const __m256d bz = _mm256_add_pd(az, kz);
        const __m256d n2 = _mm256_fmadd_pd(az, az, _mm256_fmadd_pd(ay, ay, _mm256_mul_pd(ax, ax)));
        const __m256d m2 = _mm256_fmadd_pd(bz, bz, _mm256_fmadd_pd(by, by, _mm256_mul_pd(bx, bx)));
        const __m256d degenerate = _mm256_or_pd(_mm256_cmp_pd(n2, zero, _CMP_EQ_OQ),
                                                _mm256_cmp_pd(m2, zero, _CMP_EQ_OQ));
        const __m256d w = _mm256_mul_pd(h, _mm256_sqrt_pd(_mm256_blendv_pd(n2, one, degenerate)));
        const __m256d w1 = _mm256_mul_pd(h, _mm256_sqrt_pd(_mm256_blendv_pd(m2, one, degenerate)));
        const __m256d phase = _mm256_mul_pd(_mm256_fmadd_pd(sgn, w, w1), tau);
        const __m256d num = _mm256_mul_pd(vcos(phase), vexp(_mm256_mul_pd(minus_alpha, w)));
        const __m256d v = _mm256_div_pd(num, _mm256_mul_pd(w, w1));
        _mm256_storeu_pd(out + i, _mm256_blendv_pd(v, zero, degenerate));
    }
    if (i < count)
        mode_terms_scalar(nx + i, ny + i, nz + i, count - i, p, out + i);
}

void image_terms_avx2(double r, double beta, std::int64_t n_first, std::size_t count,
                      double* out) {
    const double r2s = r * r;
    const __m256d r2 = _mm256_set1_pd(r2s);
    const __m256d three = _mm256_set1_pd(3.0);
    const __m256d b = _mm256_set1_pd(beta);
    const __m256d lane = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        const __m256d n = _mm256_add_pd(
            _mm256_set1_pd(static_cast<double>(n_first + static_cast<std::int64_t>(i))), lane);
        const __m256d m = _mm256_mul_pd(n, b);
        const __m256d m2 = _mm256_mul_pd(m, m);
        const __m256d d = _mm256_add_pd(r2, m2);
        const __m256d d3 = _mm256_mul_pd(_mm256_mul_pd(d, d), d);
        const __m256d num = _mm256_mul_pd(_mm256_fmsub_pd(three, r2, m2), _mm256_fnmadd_pd(three, m2, r2));
        _mm256_storeu_pd(out + i, _mm256_div_pd(num, _mm256_mul_pd(d3, d3)));
    }
    if (i < count)
        image_terms_scalar(r, beta, n_first + static_cast<std::int64_t>(i), count - i, out + i);
}

} // namespace negspec::simd::detail
