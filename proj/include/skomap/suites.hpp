#pragma once

// Seeded verification suites run by `skomap verify`.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "skomap/esm.hpp"

namespace skomap {

enum class Suite { esp, sp, oracle, mono_domain, mono_input, mono_constraint, symmetry, one_sided };

Suite parse_suite(std::string_view name);  // UsageError if unknown
std::string suite_name(Suite s);
// 1e-12 for the oracle suite, 0 for the exact ones, 1e-9 otherwise.
double default_tolerance(Suite s);

// Inclusive seed range. Accepts "a..b" or a single integer.
struct SeedRange {
    std::uint64_t first = 0;
    std::uint64_t last = 0;
    std::size_t count() const { return static_cast<std::size_t>(last - first + 1); }
};
SeedRange parse_seed_range(std::string_view text);

struct SuiteResult {
    std::string suite;
    SeedRange seeds;
    double tolerance = 0.0;
    std::size_t instances = 0;
    std::size_t failures = 0;
    bool passed = true;
    double worst_violation = 0.0;
    std::uint64_t worst_seed = 0;
    std::string worst_check;
    double worst_location = 0.0;
};

// One instance of a suite, for a single seed.
ConditionReport run_suite_instance(Suite s, std::uint64_t seed, double tol);

SuiteResult run_suite(Suite s, SeedRange seeds, std::optional<double> tol = std::nullopt, std::size_t threads = 1);

}  // namespace skomap
