// AVX2 variants of the elementwise solver kernels. Compiled with -mavx2 for
// this translation unit only; the dispatcher guards execution behind a CPUID
// check. Every operation here uses the same IEEE ops as the scalar reference
// (mul, div, sub, max with identical operand order, sign-bit abs), so the
// results are bit-identical lane by lane.

#include "rosd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace rosd::kernels {

namespace {

inline __m256d abs_pd(__m256d x) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

void honesty_update_avx2(std::size_t n, const double* s_norm, const std::int32_t* product_of,
                         const double* reliability, double* honesty_out) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i idx = _mm_loadu_si128(reinterpret_cast<const __m128i*>(product_of + i));
        __m256d r = _mm256_i32gather_pd(reliability, idx, 8);
        __m256d s = _mm256_loadu_pd(s_norm + i);
        // w = (r > 1-r) ? r : 1-r, same operand order as the scalar ternary
        __m256d w = _mm256_max_pd(r, _mm256_sub_pd(one, r));
        __m256d h = _mm256_sub_pd(one, _mm256_div_pd(abs_pd(_mm256_sub_pd(s, r)), w));
        _mm256_storeu_pd(honesty_out + i, _mm256_max_pd(h, zero));
    }
    for (; i < n; ++i) honesty_out[i] = honesty_point(s_norm[i], reliability[product_of[i]]);
}

void gather_mul_avx2(std::size_t n, const std::int32_t* idx, const double* table, const double* b,
                     double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i vi = _mm_loadu_si128(reinterpret_cast<const __m128i*>(idx + i));
        __m256d t = _mm256_i32gather_pd(table, vi, 8);
        _mm256_storeu_pd(out + i, _mm256_mul_pd(t, _mm256_loadu_pd(b + i)));
    }
    for (; i < n; ++i) out[i] = table[idx[i]] * b[i];
}

void mul_avx2(std::size_t n, const double* a, const double* b, double* out) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

}  // namespace

const Ops* avx2_ops_or_null() {
    static const Ops ops{"avx2", honesty_update_avx2, gather_mul_avx2, mul_avx2};
    return &ops;
}

}  // namespace rosd::kernels

#else  // non-x86 build: no AVX2 backend

namespace rosd::kernels {
const Ops* avx2_ops_or_null() {
    return nullptr;
}
}  // namespace rosd::kernels

#endif
