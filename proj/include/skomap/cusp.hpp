#pragma once

// Reflected Brownian motion in a time-dependent interval and the comb / box
// conditions that bound the variation of its local time on [0, tau].

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skomap/boundary.hpp"
#include "skomap/esm.hpp"

namespace skomap {

struct RbmPath {
    GridPath B;
    EsmSolution sol;  // sol.phi is W, sol.eta is Y
    bool projected = false;  // x0 was outside [l(0), r(0)] and got clamped
    const GridPath& W() const { return sol.phi; }
    const GridPath& Y() const { return sol.eta; }
};

// W = ESM(x0 + B) on the discretized spec; Y = W - x0 - B.
RbmPath rbm_from(const GridPath& B, double x0, const BoundarySpec& spec);
RbmPath rbm(double x0, const BoundarySpec& spec, std::uint64_t seed, double horizon, std::size_t resolution);

enum class Construction {
    automatic,  // recursion for closing/symmetric/constant, dyadic for opening
    recursion,  // s_{k+1} = s_k + f(s_k)^2
    dyadic,     // 2^-j + m f(2^-j)^2, m = 0..floor(2^-j / f(2^-j)^2)
    boxes,      // dyadic family at 0 plus its mirror image at tau
};

struct SequenceOptions {
    Construction construction = Construction::automatic;
    // Recursion start; default 3 tau / 4 for symmetric cusps, else 0.
    std::optional<double> start;
    double step_floor = 0x1.0p-40;
    std::size_t max_count = 1000000;
};

struct CombSequence {
    std::vector<double> s;
    Construction construction = Construction::recursion;
    double tau = 1.0;
    bool truncated = false;
    std::string truncation;  // "step_floor", "max_count", "reached_tau" or empty
    // The recursion can stop mid block, so its finest block is partial.
    bool partial_last_block = false;
};

CombSequence comb_sequence(const BoundarySpec& spec, const SequenceOptions& options = {});

// The two-family sequence of the parabolic-box example (floor defaults to
// 2^-48 there; see box_options()).
SequenceOptions box_options();
CombSequence box_sequence(const BoundarySpec& spec, const SequenceOptions& options = box_options());

struct Box {
    double a;
    double b;
};

// Largest boxes inside the domain: a_k = sup l, b_k = inf r over [s_k, s_{k+1}].
std::vector<Box> boxes_for(const BoundarySpec& spec, const CombSequence& seq);

enum class SeriesVerdict { converging, diverging, inconclusive, finite };
std::string series_verdict_name(SeriesVerdict v);

struct SeriesSummary {
    double total = 0.0;
    // Sums over dyadic blocks of the distance to the nearest endpoint, coarse
    // to fine, for the part of the sequence near 0 (head) and near tau (tail).
    std::vector<double> head_blocks;
    std::vector<double> tail_blocks;
    SeriesVerdict head = SeriesVerdict::finite;
    SeriesVerdict tail = SeriesVerdict::finite;
    // Finest complete block, i.e. the Cauchy residual at truncation.
    double head_residual = 0.0;
    double tail_residual = 0.0;
    SeriesVerdict overall() const;
};

// Terms indexed by interval k = [s_k, s_{k+1}].
SeriesSummary summarize_series(const CombSequence& seq, const std::vector<double>& terms, double cauchy_tol);

struct CombCheckOptions {
    // Unset: report the smallest c1 for which the min-condition holds.
    std::optional<double> c1;
    double cauchy_tol = 1e-6;
};

// Checks, for every k,
//   min(r(s_{k+1}) - l(s_k), r(s_k) - l(s_{k+1})) / (s_{k+1} - s_k)^(1/2) <= c1
// and looks for divergence of sum (s_{k+1} - s_k)^(1/2).
ConditionReport check_comb_conditions(const BoundarySpec& spec, const CombSequence& seq,
                                      const CombCheckOptions& options = {});

struct BoxCheckOptions {
    std::optional<double> c1;
    double cauchy_tol = 1e-6;
};

// Checks (1/c1) sqrt(ds) < b_k - a_k < c1 sqrt(ds) and convergence of
// sum sqrt(ds), sum d_k, sum d'_k with m_k = (a_k + b_k)/2,
//   d_k  = |r(s_k) - m_k| + |l(s_k) - m_k|
//   d'_k = |r(s_{k+1}) - m_k| v |r(s_{k+1}-) - m_k| + (same for l).
// UsageError if a box leaves the domain.
ConditionReport check_box_conditions(const BoundarySpec& spec, const CombSequence& seq, const std::vector<Box>& boxes,
                                     const BoxCheckOptions& options = {});

}  // namespace skomap
