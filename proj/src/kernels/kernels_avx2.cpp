// Compiled with -mavx2. Only raw loops over pointers live here so that no
// inline library code is emitted with AVX2 encodings.

#include <immintrin.h>

#include "skomap/kernels.hpp"

namespace skomap::kernels::avx2 {

namespace {
inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

// Matches scalar pick_min(a, b) = (b < a ? b : a).
inline __m256d vpick_min(__m256d a, __m256d b) { return _mm256_min_pd(b, a); }
// Matches scalar pick_max(a, b) = (a < b ? b : a).
inline __m256d vpick_max(__m256d a, __m256d b) { return _mm256_max_pd(b, a); }
}  // namespace

double abs_increment_sum(const double* v, std::size_t n) {
    if (n < 2) return 0.0;
    const std::size_t m = n - 1;
    const std::size_t blocks = m / 4;
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t i = 4 * b;
        const __m256d lo = _mm256_loadu_pd(v + i);
        const __m256d hi = _mm256_loadu_pd(v + i + 1);
        acc = _mm256_add_pd(acc, vabs(_mm256_sub_pd(hi, lo)));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, acc);
    double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
    for (std::size_t i = 4 * blocks; i < m; ++i) {
        total += __builtin_fabs(v[i + 1] - v[i]);
    }
    return total;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i)));
        best = vpick_max(d, best);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double out = 0.0;
    for (double lane : lanes) out = lane < out ? out : lane;
    for (; i < n; ++i) {
        const double d = __builtin_fabs(a[i] - b[i]);
        out = d < out ? out : d;
    }
    return out;
}

void clamp_residual(const double* psi, const double* xi, const double* lower, const double* upper,
                    double* phi, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_sub_pd(_mm256_loadu_pd(psi + i), _mm256_loadu_pd(xi + i));
        const __m256d capped = vpick_min(x, _mm256_loadu_pd(upper + i));
        _mm256_storeu_pd(phi + i, vpick_max(capped, _mm256_loadu_pd(lower + i)));
    }
    for (; i < n; ++i) {
        double x = psi[i] - xi[i];
        x = upper[i] < x ? upper[i] : x;
        phi[i] = x < lower[i] ? lower[i] : x;
    }
}

void xi_scan_batch(const double* psi, const double* lower, const double* upper, double* xi,
                   std::size_t steps) {
    __m256d prev = _mm256_setzero_pd();
    for (std::size_t k = 0; k < steps; ++k) {
        const std::size_t i = k * kBatchLanes;
        const __m256d p = _mm256_loadu_pd(psi + i);
        const __m256d up = vpick_max(prev, _mm256_sub_pd(p, _mm256_loadu_pd(upper + i)));
        prev = vpick_min(up, _mm256_sub_pd(p, _mm256_loadu_pd(lower + i)));
        _mm256_storeu_pd(xi + i, prev);
    }
}

}  // namespace skomap::kernels::avx2
