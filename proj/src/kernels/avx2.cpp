#include <immintrin.h>

#include "hiact/kernels/kernels.hpp"

namespace hiact::kernels {

namespace {

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double squared_distance_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

double chi2_avx2(const double* a, const double* b, std::size_t n) {
    const __m256d zero = _mm256_setzero_pd();
    const __m256d one = _mm256_set1_pd(1.0);
    __m256d acc = zero;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        const __m256d den = _mm256_add_pd(va, vb);
        const __m256d d = _mm256_sub_pd(va, vb);
        const __m256d empty = _mm256_cmp_pd(den, zero, _CMP_EQ_OQ);
        // empty bins divide 0 by 1 instead of 0 by 0
        const __m256d q = _mm256_div_pd(_mm256_mul_pd(d, d), _mm256_blendv_pd(den, one, empty));
        acc = _mm256_add_pd(acc, q);
    }
    double s = hsum(acc);
    for (; i < n; ++i) {
        const double den = a[i] + b[i];
        if (den == 0.0) continue;
        const double d = a[i] - b[i];
        s += d * d / den;
    }
    return s;
}

ArgMax max_plus_avx2(const double* a, const double* b, std::size_t n) {
    ArgMax best;
    std::size_t i = 0;
    if (n >= 4) {
        __m256d vmax = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
        __m256d vidx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
        __m256d cur = vidx;
        const __m256d step = _mm256_set1_pd(4.0);
        for (; i + 4 <= n; i += 4) {
            const __m256d s = _mm256_add_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
            const __m256d gt = _mm256_cmp_pd(s, vmax, _CMP_GT_OQ);
            vmax = _mm256_blendv_pd(vmax, s, gt);
            vidx = _mm256_blendv_pd(vidx, cur, gt);
            cur = _mm256_add_pd(cur, step);
        }
        alignas(32) double mv[4];
        alignas(32) double mi[4];
        _mm256_store_pd(mv, vmax);
        _mm256_store_pd(mi, vidx);
        best.value = mv[0];
        best.index = static_cast<std::size_t>(mi[0]);
        for (int l = 1; l < 4; ++l) {
            const auto idx = static_cast<std::size_t>(mi[l]);
            if (mv[l] > best.value || (mv[l] == best.value && idx < best.index)) {
                best.value = mv[l];
                best.index = idx;
            }
        }
    }
    for (; i < n; ++i) {
        const double v = a[i] + b[i];
        if (v > best.value) {
            best.value = v;
            best.index = i;
        }
    }
    return best;
}

void max_plus_product_avx2(const double* a, const double* b, std::size_t m, std::size_t p, std::size_t n,
                           double* out, int* arg) {
    const double ninf = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double* ai = a + i * p;
        double* o = out + i * n;
        int* g = arg + i * n;
        std::size_t j = 0;
        for (; j + 4 <= n; j += 4) {
            __m256d vmax = _mm256_set1_pd(ninf);
            __m256d varg = _mm256_setzero_pd();
            for (std::size_t l = 0; l < p; ++l) {
                const __m256d s = _mm256_add_pd(_mm256_set1_pd(ai[l]), _mm256_loadu_pd(b + l * n + j));
                const __m256d gt = _mm256_cmp_pd(s, vmax, _CMP_GT_OQ);
                vmax = _mm256_blendv_pd(vmax, s, gt);
                varg = _mm256_blendv_pd(varg, _mm256_set1_pd(static_cast<double>(l)), gt);
            }
            _mm256_storeu_pd(o + j, vmax);
            _mm_storeu_si128(reinterpret_cast<__m128i*>(g + j), _mm256_cvtpd_epi32(varg));
        }
        for (; j < n; ++j) {
            double best = ninf;
            int at = 0;
            for (std::size_t l = 0; l < p; ++l) {
                const double v = ai[l] + b[l * n + j];
                if (v > best) {
                    best = v;
                    at = static_cast<int>(l);
                }
            }
            o[j] = best;
            g[j] = at;
        }
    }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void gemv_avx2(const double* m, std::size_t rows, std::size_t cols, const double* x, double* out) {
    for (std::size_t r = 0; r < rows; ++r) out[r] = dot_avx2(m + r * cols, x, cols);
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{Backend::Avx2, dot_avx2, squared_distance_avx2, chi2_avx2,
                                   max_plus_avx2, max_plus_product_avx2, axpy_avx2, gemv_avx2};
    return &table;
}

}  // namespace hiact::kernels
