#include "greedyq/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>

namespace greedyq::kernels::detail {

__attribute__((target("avx2,fma")))
double weighted_sum_avx2(const double* w, const double* y, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(y + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i + 4), _mm256_loadu_pd(y + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(y + i), acc0);
    acc0 = _mm256_add_pd(acc0, acc1);
    double buf[4];
    _mm256_storeu_pd(buf, acc0);
    double s = (buf[0] + buf[1]) + (buf[2] + buf[3]);
    for (; i < n; ++i) s += w[i] * y[i];
    return s;
}

// mul+sub only (no fma) so results match the scalar reference bitwise.
__attribute__((target("avx2")))
double anchored_box_max_avx2(const double* xi, std::size_t m, double step,
                             double lo, double hi) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    const __m256d vstep = _mm256_set1_pd(step);
    const __m256d vfour = _mm256_set1_pd(4.0);
    // Integer-valued k kept in doubles (exact), multiplied by step per
    // block: one rounding, same as the scalar k*step.
    __m256d kidx = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    __m256d best = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 4 <= m + 1; k += 4) {
        __m256d ks = _mm256_mul_pd(kidx, vstep);
        __m256d xk = _mm256_loadu_pd(xi + k);
        __m256d xk1 = _mm256_loadu_pd(xi + k + 1);
        __m256d t1 = _mm256_sub_pd(ks, _mm256_mul_pd(vlo, xk));
        __m256d t2 = _mm256_sub_pd(_mm256_mul_pd(vhi, xk1), ks);
        best = _mm256_max_pd(best, _mm256_max_pd(t1, t2));
        kidx = _mm256_add_pd(kidx, vfour);
    }
    double buf[4];
    _mm256_storeu_pd(buf, best);
    double b = std::max(std::max(buf[0], buf[1]), std::max(buf[2], buf[3]));
    for (; k <= m; ++k) {
        double kss = static_cast<double>(k) * step;
        b = std::max(b, kss - lo * xi[k]);
        b = std::max(b, hi * xi[k + 1] - kss);
    }
    return b;
}

}  // namespace greedyq::kernels::detail

#endif  // x86_64
