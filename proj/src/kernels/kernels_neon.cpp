// AArch64 Advanced SIMD variants (two doubles per register). Selections use
// compare + bit-select rather than vmaxq/vminq so that signed zeros follow the
// scalar ternary semantics.

#if defined(__aarch64__)

#include <arm_neon.h>

#include "skomap/kernels.hpp"

namespace skomap::kernels::neon {

namespace {
// (b < a ? b : a)
inline float64x2_t vpick_min(float64x2_t a, float64x2_t b) { return vbslq_f64(vcltq_f64(b, a), b, a); }
// (a < b ? b : a)
inline float64x2_t vpick_max(float64x2_t a, float64x2_t b) { return vbslq_f64(vcltq_f64(a, b), b, a); }
}  // namespace

double abs_increment_sum(const double* v, std::size_t n) {
    if (n < 2) return 0.0;
    const std::size_t m = n - 1;
    const std::size_t blocks = m / 4;
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t i = 4 * b;
        acc01 = vaddq_f64(acc01, vabsq_f64(vsubq_f64(vld1q_f64(v + i + 1), vld1q_f64(v + i))));
        acc23 = vaddq_f64(acc23, vabsq_f64(vsubq_f64(vld1q_f64(v + i + 3), vld1q_f64(v + i + 2))));
    }
    double total = (vgetq_lane_f64(acc01, 0) + vgetq_lane_f64(acc01, 1)) +
                   (vgetq_lane_f64(acc23, 0) + vgetq_lane_f64(acc23, 1));
    for (std::size_t i = 4 * blocks; i < m; ++i) {
        total += __builtin_fabs(v[i + 1] - v[i]);
    }
    return total;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    float64x2_t best = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        best = vpick_max(best, vabsq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i))));
    }
    double out = 0.0;
    for (double lane : {vgetq_lane_f64(best, 0), vgetq_lane_f64(best, 1)}) {
        out = lane < out ? out : lane;
    }
    for (; i < n; ++i) {
        const double d = __builtin_fabs(a[i] - b[i]);
        out = d < out ? out : d;
    }
    return out;
}

void clamp_residual(const double* psi, const double* xi, const double* lower, const double* upper,
                    double* phi, std::size_t n) {
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t x = vsubq_f64(vld1q_f64(psi + i), vld1q_f64(xi + i));
        const float64x2_t capped = vpick_min(x, vld1q_f64(upper + i));
        vst1q_f64(phi + i, vpick_max(capped, vld1q_f64(lower + i)));
    }
    for (; i < n; ++i) {
        double x = psi[i] - xi[i];
        x = upper[i] < x ? upper[i] : x;
        phi[i] = x < lower[i] ? lower[i] : x;
    }
}

void xi_scan_batch(const double* psi, const double* lower, const double* upper, double* xi,
                   std::size_t steps) {
    float64x2_t prev01 = vdupq_n_f64(0.0);
    float64x2_t prev23 = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const std::size_t i = k * kBatchLanes;
        const float64x2_t p01 = vld1q_f64(psi + i);
        const float64x2_t p23 = vld1q_f64(psi + i + 2);
        prev01 = vpick_min(vpick_max(prev01, vsubq_f64(p01, vld1q_f64(upper + i))),
                           vsubq_f64(p01, vld1q_f64(lower + i)));
        prev23 = vpick_min(vpick_max(prev23, vsubq_f64(p23, vld1q_f64(upper + i + 2))),
                           vsubq_f64(p23, vld1q_f64(lower + i + 2)));
        vst1q_f64(xi + i, prev01);
        vst1q_f64(xi + i + 2, prev23);
    }
}

}  // namespace skomap::kernels::neon

#endif
