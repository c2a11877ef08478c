#pragma once

// Data-parallel inner loops with a scalar reference and SIMD variants chosen
// at runtime. Every variant follows the same operation order as the scalar
// reference, so results are bit-identical across instruction sets:
//
//  * min/max are pinned to the ternary forms (b < a ? b : a) and
//    (a < b ? b : a), which is what the x86 min/max instructions compute when
//    given operands in that order.
//  * abs_increment_sum accumulates increment i into lane (i mod 4) over whole
//    blocks of four, folds (l0 + l1) + (l2 + l3), then adds the tail in order.

#include <cstddef>
#include <span>

namespace skomap::kernels {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);
bool isa_supported(Isa isa);

// Best supported ISA unless overridden by force_isa or SKOMAP_SIMD
// (scalar | avx2 | neon) in the environment.
Isa active_isa();

// Pins the dispatch target; UsageError if the CPU lacks it.
void force_isa(Isa isa);
void reset_isa();

// Number of interleaved problems handled by xi_scan_batch.
inline constexpr std::size_t kBatchLanes = 4;

// Sum of |v[i+1] - v[i]| for i in [0, n-1).
double abs_increment_sum(std::span<const double> v);

// max_i |a[i] - b[i]|; 0 for empty input.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

// phi[i] = clamp(psi[i] - xi[i], lower[i], upper[i]).
void clamp_residual(std::span<const double> psi, std::span<const double> xi,
                    std::span<const double> lower, std::span<const double> upper,
                    std::span<double> phi);

// Forward recursion xi[k] = min(max(xi[k-1], psi[k] - upper[k]), psi[k] - lower[k])
// with xi[-1] = 0, for kBatchLanes problems stored interleaved: element k of
// lane j lives at index k * kBatchLanes + j.
void xi_scan_batch(std::span<const double> psi, std::span<const double> lower,
                   std::span<const double> upper, std::span<double> xi);

// Direct entry points into each backend, for equivalence testing.
namespace scalar {
double abs_increment_sum(const double* v, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
void clamp_residual(const double* psi, const double* xi, const double* lower, const double* upper,
                    double* phi, std::size_t n);
void xi_scan_batch(const double* psi, const double* lower, const double* upper, double* xi,
                   std::size_t steps);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double abs_increment_sum(const double* v, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
void clamp_residual(const double* psi, const double* xi, const double* lower, const double* upper,
                    double* phi, std::size_t n);
void xi_scan_batch(const double* psi, const double* lower, const double* upper, double* xi,
                   std::size_t steps);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double abs_increment_sum(const double* v, std::size_t n);
double max_abs_diff(const double* a, const double* b, std::size_t n);
void clamp_residual(const double* psi, const double* xi, const double* lower, const double* upper,
                    double* phi, std::size_t n);
void xi_scan_batch(const double* psi, const double* lower, const double* upper, double* xi,
                   std::size_t steps);
}  // namespace neon
#endif

}  // namespace skomap::kernels
