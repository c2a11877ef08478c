#include <cmath>

#include "skomap/kernels.hpp"

namespace skomap::kernels::scalar {

namespace {
inline double pick_min(double a, double b) { return b < a ? b : a; }
inline double pick_max(double a, double b) { return a < b ? b : a; }
}  // namespace

double abs_increment_sum(const double* v, std::size_t n) {
    if (n < 2) return 0.0;
    const std::size_t m = n - 1;
    const std::size_t blocks = m / 4;
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t i = 4 * b;
        for (std::size_t j = 0; j < 4; ++j) {
            acc[j] += std::fabs(v[i + j + 1] - v[i + j]);
        }
    }
    double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (std::size_t i = 4 * blocks; i < m; ++i) {
        total += std::fabs(v[i + 1] - v[i]);
    }
    return total;
}

double max_abs_diff(const double* a, const double* b, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        best = pick_max(std::fabs(a[i] - b[i]), best);
    }
    return best;
}

void clamp_residual(const double* psi, const double* xi, const double* lower, const double* upper,
                    double* phi, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double x = pick_min(psi[i] - xi[i], upper[i]);
        phi[i] = pick_max(x, lower[i]);
    }
}

void xi_scan_batch(const double* psi, const double* lower, const double* upper, double* xi,
                   std::size_t steps) {
    double prev[kBatchLanes] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < steps; ++k) {
        for (std::size_t j = 0; j < kBatchLanes; ++j) {
            const std::size_t i = k * kBatchLanes + j;
            const double up = pick_max(prev[j], psi[i] - upper[i]);
            prev[j] = pick_min(up, psi[i] - lower[i]);
            xi[i] = prev[j];
        }
    }
}

}  // namespace skomap::kernels::scalar
