#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "skomap/errors.hpp"
#include "skomap/kernels.hpp"

namespace skomap::kernels {

namespace {

Isa detect() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#elif defined(__aarch64__)
    return Isa::neon;
#endif
    return Isa::scalar;
}

Isa from_env(Isa fallback) {
    const char* env = std::getenv("SKOMAP_SIMD");
    if (env == nullptr) return fallback;
    const std::string_view name(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
        if (name == isa_name(isa) && isa_supported(isa)) return isa;
    }
    return fallback;
}

// -1 = not yet resolved.
std::atomic<int> g_active{-1};

Isa current() {
    int v = g_active.load(std::memory_order_acquire);
    if (v < 0) {
        v = static_cast<int>(from_env(detect()));
        g_active.store(v, std::memory_order_release);
    }
    return static_cast<Isa>(v);
}

void check_sizes(std::size_t expected, std::size_t got, const char* what) {
    if (expected != got) throw UsageError(std::string("kernel argument size mismatch: ") + what);
}

}  // namespace

const char* isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar: return "scalar";
        case Isa::avx2: return "avx2";
        case Isa::neon: return "neon";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar: return true;
        case Isa::avx2:
#if defined(__x86_64__) || defined(_M_X64)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Isa::neon:
#if defined(__aarch64__)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Isa active_isa() { return current(); }

void force_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw UsageError(std::string("instruction set not supported on this CPU: ") + isa_name(isa));
    }
    g_active.store(static_cast<int>(isa), std::memory_order_release);
}

void reset_isa() { g_active.store(-1, std::memory_order_release); }

double abs_increment_sum(std::span<const double> v) {
    switch (current()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2: return avx2::abs_increment_sum(v.data(), v.size());
#endif
#if defined(__aarch64__)
        case Isa::neon: return neon::abs_increment_sum(v.data(), v.size());
#endif
        default: return scalar::abs_increment_sum(v.data(), v.size());
    }
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
    check_sizes(a.size(), b.size(), "max_abs_diff");
    switch (current()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2: return avx2::max_abs_diff(a.data(), b.data(), a.size());
#endif
#if defined(__aarch64__)
        case Isa::neon: return neon::max_abs_diff(a.data(), b.data(), a.size());
#endif
        default: return scalar::max_abs_diff(a.data(), b.data(), a.size());
    }
}

void clamp_residual(std::span<const double> psi, std::span<const double> xi,
                    std::span<const double> lower, std::span<const double> upper,
                    std::span<double> phi) {
    const std::size_t n = psi.size();
    check_sizes(n, xi.size(), "clamp_residual xi");
    check_sizes(n, lower.size(), "clamp_residual lower");
    check_sizes(n, upper.size(), "clamp_residual upper");
    check_sizes(n, phi.size(), "clamp_residual phi");
    switch (current()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2:
            avx2::clamp_residual(psi.data(), xi.data(), lower.data(), upper.data(), phi.data(), n);
            return;
#endif
#if defined(__aarch64__)
        case Isa::neon:
            neon::clamp_residual(psi.data(), xi.data(), lower.data(), upper.data(), phi.data(), n);
            return;
#endif
        default:
            scalar::clamp_residual(psi.data(), xi.data(), lower.data(), upper.data(), phi.data(), n);
    }
}

void xi_scan_batch(std::span<const double> psi, std::span<const double> lower,
                   std::span<const double> upper, std::span<double> xi) {
    const std::size_t n = psi.size();
    if (n % kBatchLanes != 0) throw UsageError("xi_scan_batch: length is not a multiple of the lane count");
    check_sizes(n, lower.size(), "xi_scan_batch lower");
    check_sizes(n, upper.size(), "xi_scan_batch upper");
    check_sizes(n, xi.size(), "xi_scan_batch xi");
    const std::size_t steps = n / kBatchLanes;
    switch (current()) {
#if defined(__x86_64__) || defined(_M_X64)
        case Isa::avx2: avx2::xi_scan_batch(psi.data(), lower.data(), upper.data(), xi.data(), steps); return;
#endif
#if defined(__aarch64__)
        case Isa::neon: neon::xi_scan_batch(psi.data(), lower.data(), upper.data(), xi.data(), steps); return;
#endif
        default: scalar::xi_scan_batch(psi.data(), lower.data(), upper.data(), xi.data(), steps);
    }
}

}  // namespace skomap::kernels
