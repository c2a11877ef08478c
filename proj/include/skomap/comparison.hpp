#pragma once

// Comparison checks for the constrained map: monotonicity in the domain and
// in the input path. Each check validates its hypotheses first and throws
// UsageError when they fail, so a check can never pass vacuously.

#include <cstdint>
#include <optional>

#include "skomap/esm.hpp"

namespace skomap {

struct ComparisonInstance {
    GridPath psi;
    GridPath psi_prime;
    double c0 = 0.0;
    double c0_prime = 0.0;
    // If absent, nu is taken to be psi - psi_prime.
    std::optional<GridPath> nu;
    BoundaryPair bounds;
    // Wider domain for the domain check.
    std::optional<BoundaryPair> bounds_tilde;
};

// Needs l~ <= l, r <= r~ and inf(r - l) > 0. Solves psi on both domains and
// checks eta_r >= eta~_r and eta_l >= eta~_l.
ConditionReport check_domain_monotonicity(const ComparisonInstance& inst, double tol = 1e-9);

// Needs psi = psi' + nu with nu non-decreasing and nu(0) = 0. Solves c0 + psi
// and c0' + psi' and checks
//   [-(c0-c0')^+ - nu] v [-(r-l)] <= phi' - phi <= (c0'-c0)^+ ^ (r-l)
//   eta - (c0'-c0)^+ <= eta' <= eta + nu + (c0-c0')^+
ConditionReport check_input_monotonicity(const ComparisonInstance& inst, double tol = 1e-9);

// Input-monotonicity hypotheses plus inf(r - l) > 0. Checks
//   eta_l - (c0'-c0)^+ <= eta'_l <= eta_l + nu + (c0-c0')^+
//   eta'_r - (c0'-c0)^+ <= eta_r <= eta'_r + nu + (c0-c0')^+
ConditionReport check_constraining_monotonicity(const ComparisonInstance& inst, double tol = 1e-9);

// Random instances satisfying each check's hypotheses.
ComparisonInstance domain_instance(std::uint64_t seed);
ComparisonInstance input_instance(std::uint64_t seed);
ComparisonInstance constraining_instance(std::uint64_t seed);

// psi -> -psi with the boundaries swapped and negated. For the input checks
// the roles of psi and psi' (and of c0 and c0') are exchanged so that the
// negated pair still satisfies psi = psi' + nu.
ComparisonInstance negate(const ComparisonInstance& inst);

}  // namespace skomap
