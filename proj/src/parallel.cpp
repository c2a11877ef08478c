#include "skomap/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

#include "skomap/errors.hpp"

namespace skomap {

std::size_t resolve_threads(std::optional<std::size_t> requested) {
    if (requested) {
        if (*requested == 0) throw UsageError("thread count must be positive");
        return *requested;
    }
    if (const char* env = std::getenv("SKOMAP_THREADS"); env && *env) {
        std::size_t n = 0;
        const char* end = env + std::strlen(env);
        const auto res = std::from_chars(env, end, n);
        if (res.ec != std::errc() || res.ptr != end || n == 0) {
            throw UsageError(std::string("SKOMAP_THREADS must be a positive integer, got '") + env + "'");
        }
        return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace skomap
