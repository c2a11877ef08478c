#include "skomap/cusp.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <map>

#include "skomap/brownian.hpp"
#include "skomap/errors.hpp"

namespace skomap {

namespace {

double checked_width(const BoundarySpec& spec, double t) {
    const double f = spec.width(t);
    if (!std::isfinite(f) || f < 0.0) throw UsageError("boundary width is not computable at t = " + std::to_string(t));
    return f;
}

int first_block(double tau) {
    // Smallest j with 2^-j < tau / 4.
    int j = static_cast<int>(std::floor(-std::log2(tau / 4.0))) - 1;
    while (std::ldexp(1.0, -j) >= tau / 4.0) ++j;
    return j;
}

struct FamilyResult {
    std::vector<double> points;
    bool truncated = false;
    std::string reason;
};

// 2^-j + m f(2^-j)^2 for j > j1, or its mirror tau - 2^-j - m f(tau - 2^-j)^2.
FamilyResult dyadic_family(const BoundarySpec& spec, bool mirrored, double floor, std::size_t budget) {
    FamilyResult out;
    const double tau = spec.tau;
    for (int j = first_block(tau) + 1;; ++j) {
        const double base = std::ldexp(1.0, -j);
        const double anchor = mirrored ? tau - base : base;
        const double f = checked_width(spec, anchor);
        const double step = f * f;
        if (!(step > 0.0)) throw UsageError("boundary width vanishes inside the sequence range");
        const double m_max = std::floor(base / step);
        const double smallest = m_max >= 1.0 ? step : base;
        if (smallest < floor) {
            out.truncated = true;
            out.reason = "step_floor";
            return out;
        }
        if (static_cast<double>(out.points.size()) + m_max + 1.0 > static_cast<double>(budget)) {
            out.truncated = true;
            out.reason = "max_count";
            return out;
        }
        const auto count = static_cast<std::size_t>(m_max);
        for (std::size_t m = 0; m <= count; ++m) {
            const double offset = base + static_cast<double>(m) * step;
            out.points.push_back(mirrored ? tau - offset : offset);
        }
    }
}

void finish_points(CombSequence& seq) {
    auto& s = seq.s;
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    s.erase(std::remove_if(s.begin(), s.end(), [&](double x) { return !(x > 0.0 && x < seq.tau); }), s.end());
}

SeriesVerdict classify(const std::vector<double>& blocks, double tol, double& residual) {
    const std::size_t n = blocks.size();
    residual = n == 0 ? 0.0 : blocks.back();
    if (n < 3) return SeriesVerdict::finite;
    auto ratio = [](double num, double den) {
        if (den > 0.0) return num / den;
        return num > 0.0 ? INFINITY : 0.0;
    };
    const double q1 = ratio(blocks[n - 1], blocks[n - 2]);
    const double q2 = ratio(blocks[n - 2], blocks[n - 3]);
    if (q1 < 1.0 && q2 < 1.0 && residual <= tol) return SeriesVerdict::converging;
    if (q1 >= 0.95 && q2 >= 0.95) return SeriesVerdict::diverging;
    return SeriesVerdict::inconclusive;
}

std::vector<double> dense_blocks(const std::map<int, double>& by_block) {
    std::vector<double> out;
    if (by_block.empty()) return out;
    const int lo = by_block.begin()->first;
    const int hi = by_block.rbegin()->first;
    for (int j = lo; j <= hi; ++j) {
        const auto it = by_block.find(j);
        out.push_back(it == by_block.end() ? 0.0 : it->second);
    }
    return out;
}

void require_sequence(ConditionReport& rep, const CombSequence& seq) {
    bool ok = seq.s.size() >= 2;
    double where = 0.0;
    for (std::size_t k = 0; ok && k < seq.s.size(); ++k) {
        if (!(seq.s[k] >= 0.0 && seq.s[k] <= seq.tau) || (k > 0 && !(seq.s[k] > seq.s[k - 1]))) {
            ok = false;
            where = seq.s[k];
        }
    }
    rep.require("sequence_increasing_in_range", ok, where);
}

void add_series(ConditionReport& rep, const std::string& name, const SeriesSummary& sum) {
    rep.metrics[name + "_sum"] = sum.total;
    rep.metrics[name + "_head_residual"] = sum.head_residual;
    rep.metrics[name + "_tail_residual"] = sum.tail_residual;
    rep.metrics[name + "_head_blocks"] = static_cast<double>(sum.head_blocks.size());
    rep.metrics[name + "_tail_blocks"] = static_cast<double>(sum.tail_blocks.size());
    rep.notes.push_back(name + ": head " + series_verdict_name(sum.head) + ", tail " + series_verdict_name(sum.tail));
}

void note_truncation(ConditionReport& rep, const CombSequence& seq) {
    rep.metrics["count"] = static_cast<double>(seq.s.size());
    rep.metrics["truncated"] = seq.truncated ? 1.0 : 0.0;
    if (!seq.truncation.empty()) rep.notes.push_back("sequence stopped: " + seq.truncation);
}

}  // namespace

RbmPath rbm_from(const GridPath& B, double x0, const BoundarySpec& spec) {
    spec.validate();
    const BoundaryPair bounds = spec.on_grid(B.grid());
    RbmPath out{B, esm_solve(B + x0, bounds), false};
    out.projected = x0 < bounds.lower()[0] || x0 > bounds.upper()[0];
    return out;
}

RbmPath rbm(double x0, const BoundarySpec& spec, std::uint64_t seed, double horizon, std::size_t resolution) {
    const unsigned level = dyadic_level(resolution);
    const BrownianHierarchy h(seed, horizon, level);
    return rbm_from(h.level(level), x0, spec);
}

SequenceOptions box_options() {
    SequenceOptions o;
    o.construction = Construction::boxes;
    o.step_floor = 0x1.0p-48;
    return o;
}

CombSequence comb_sequence(const BoundarySpec& spec, const SequenceOptions& options) {
    spec.validate();
    if (!(options.step_floor > 0.0)) throw UsageError("step_floor must be positive");
    if (options.max_count < 2) throw UsageError("max_count must be at least 2");
    Construction c = options.construction;
    if (c == Construction::automatic) {
        c = spec.kind == BoundaryKind::opening_cusp ? Construction::dyadic : Construction::recursion;
    }
    if (c == Construction::boxes) return box_sequence(spec, options);

    CombSequence seq;
    seq.construction = c;
    seq.tau = spec.tau;
    if (c == Construction::dyadic) {
        auto fam = dyadic_family(spec, false, options.step_floor, options.max_count);
        seq.s = std::move(fam.points);
        seq.truncated = fam.truncated;
        seq.truncation = fam.reason;
        finish_points(seq);
        return seq;
    }

    double s = options.start ? *options.start : (spec.kind == BoundaryKind::symmetric_cusp ? 0.75 * spec.tau : 0.0);
    if (!(s >= 0.0 && s < spec.tau)) throw UsageError("recursion start must lie in [0, tau)");
    seq.s.push_back(s);
    seq.partial_last_block = true;
    for (;;) {
        const double f = checked_width(spec, s);
        const double step = f * f;
        if (!(step >= options.step_floor)) {
            seq.truncated = true;
            seq.truncation = "step_floor";
            break;
        }
        if (s + step >= spec.tau) {
            seq.truncation = "reached_tau";
            break;
        }
        if (seq.s.size() >= options.max_count) {
            seq.truncated = true;
            seq.truncation = "max_count";
            break;
        }
        // Round up so the stored step is never shorter than f(s)^2.
        double next = s + step;
        while (next - s < step) next = std::nextafter(next, INFINITY);
        s = next;
        seq.s.push_back(s);
    }
    return seq;
}

CombSequence box_sequence(const BoundarySpec& spec, const SequenceOptions& options) {
    spec.validate();
    CombSequence seq;
    seq.construction = Construction::boxes;
    seq.tau = spec.tau;
    const std::size_t budget = options.max_count / 2;
    auto head = dyadic_family(spec, false, options.step_floor, budget);
    auto tail = dyadic_family(spec, true, options.step_floor, budget);
    seq.s = std::move(head.points);
    seq.s.insert(seq.s.end(), tail.points.begin(), tail.points.end());
    seq.truncated = head.truncated || tail.truncated;
    seq.truncation = head.reason == tail.reason ? head.reason : head.reason + "/" + tail.reason;
    finish_points(seq);
    return seq;
}

std::vector<Box> boxes_for(const BoundarySpec& spec, const CombSequence& seq) {
    std::vector<Box> out;
    for (std::size_t k = 0; k + 1 < seq.s.size(); ++k) {
        out.push_back(Box{spec.sup_lower(seq.s[k], seq.s[k + 1]), spec.inf_upper(seq.s[k], seq.s[k + 1])});
    }
    return out;
}

std::string series_verdict_name(SeriesVerdict v) {
    switch (v) {
        case SeriesVerdict::converging: return "converging";
        case SeriesVerdict::diverging: return "diverging";
        case SeriesVerdict::inconclusive: return "inconclusive";
        case SeriesVerdict::finite: return "finite";
    }
    return "?";
}

SeriesVerdict SeriesSummary::overall() const {
    if (head == SeriesVerdict::diverging || tail == SeriesVerdict::diverging) return SeriesVerdict::diverging;
    if (head == SeriesVerdict::inconclusive || tail == SeriesVerdict::inconclusive) return SeriesVerdict::inconclusive;
    if (head == SeriesVerdict::converging || tail == SeriesVerdict::converging) return SeriesVerdict::converging;
    return SeriesVerdict::finite;
}

SeriesSummary summarize_series(const CombSequence& seq, const std::vector<double>& terms, double cauchy_tol) {
    SeriesSummary out;
    std::map<int, double> head, tail;
    for (std::size_t k = 0; k < terms.size(); ++k) {
        out.total += terms[k];
        const double left = seq.s[k];
        if (left < 0.5 * seq.tau) {
            if (left > 0.0) head[-std::ilogb(left / seq.tau)] += terms[k];
        } else {
            const double gap = seq.tau - seq.s[k + 1];
            if (gap > 0.0) tail[-std::ilogb(gap / seq.tau)] += terms[k];
        }
    }
    out.head_blocks = dense_blocks(head);
    out.tail_blocks = dense_blocks(tail);
    if (seq.partial_last_block && !out.tail_blocks.empty()) out.tail_blocks.pop_back();
    out.head = classify(out.head_blocks, cauchy_tol, out.head_residual);
    out.tail = classify(out.tail_blocks, cauchy_tol, out.tail_residual);
    return out;
}

ConditionReport check_comb_conditions(const BoundarySpec& spec, const CombSequence& seq,
                                      const CombCheckOptions& options) {
    spec.validate();
    ConditionReport rep(0.0);
    require_sequence(rep, seq);
    if (!rep.passed) return rep;
    note_truncation(rep, seq);

    double worst = -INFINITY;
    double where = 0.0;
    std::vector<double> roots;
    for (std::size_t k = 0; k + 1 < seq.s.size(); ++k) {
        const double a = seq.s[k];
        const double b = seq.s[k + 1];
        const double root = std::sqrt(b - a);
        const double tight = std::min(spec.upper(b) - spec.lower(a), spec.upper(a) - spec.lower(b));
        const double ratio = tight / root;
        if (ratio > worst) {
            worst = ratio;
            where = a;
        }
        roots.push_back(root);
    }
    rep.metrics["min_c1"] = worst;
    if (options.c1) {
        rep.metrics["c1"] = *options.c1;
        rep.require("min_condition", worst <= *options.c1, where);
    } else {
        rep.notes.push_back("c1 left free; min_c1 is the smallest admissible value");
    }
    const auto sum = summarize_series(seq, roots, options.cauchy_tol);
    add_series(rep, "root", sum);
    rep.require("root_sum_diverges", sum.overall() == SeriesVerdict::diverging);
    return rep;
}

ConditionReport check_box_conditions(const BoundarySpec& spec, const CombSequence& seq, const std::vector<Box>& boxes,
                                     const BoxCheckOptions& options) {
    spec.validate();
    ConditionReport rep(0.0);
    require_sequence(rep, seq);
    if (!rep.passed) return rep;
    if (boxes.size() + 1 != seq.s.size()) throw UsageError("need one box per sequence interval");
    note_truncation(rep, seq);

    std::vector<double> roots, d, dp;
    double lo_ratio = INFINITY, hi_ratio = 0.0;
    for (std::size_t k = 0; k < boxes.size(); ++k) {
        const double s0 = seq.s[k];
        const double s1 = seq.s[k + 1];
        const Box& box = boxes[k];
        const double eps = 1e-12 * (1.0 + std::fabs(box.a) + std::fabs(box.b));
        if (!(box.a < box.b) || box.a < spec.sup_lower(s0, s1) - eps || box.b > spec.inf_upper(s0, s1) + eps) {
            throw UsageError("box " + std::to_string(k) + " on [" + std::to_string(s0) + ", " + std::to_string(s1) +
                             "] is not inside the domain");
        }
        const double root = std::sqrt(s1 - s0);
        const double ratio = (box.b - box.a) / root;
        lo_ratio = std::min(lo_ratio, ratio);
        hi_ratio = std::max(hi_ratio, ratio);
        const double m = 0.5 * (box.a + box.b);
        roots.push_back(root);
        d.push_back(std::fabs(spec.upper(s0) - m) + std::fabs(spec.lower(s0) - m));
        // The analytic boundaries are continuous, so left limits equal values.
        dp.push_back(std::fabs(spec.upper(s1) - m) + std::fabs(spec.lower(s1) - m));
    }
    const double needed = std::max(hi_ratio, 1.0 / lo_ratio);
    rep.metrics["min_c1"] = needed;
    if (options.c1) {
        rep.metrics["c1"] = *options.c1;
        rep.require("box_ratio", needed < *options.c1);
    } else {
        rep.notes.push_back("c1 left free; any c1 > min_c1 is admissible");
    }
    rep.metrics["head_gap"] = seq.s.front();
    rep.metrics["tail_gap"] = seq.tau - seq.s.back();

    const auto converges = [](SeriesVerdict v) { return v == SeriesVerdict::converging || v == SeriesVerdict::finite; };
    const auto r_sum = summarize_series(seq, roots, options.cauchy_tol);
    const auto d_sum = summarize_series(seq, d, options.cauchy_tol);
    const auto dp_sum = summarize_series(seq, dp, options.cauchy_tol);
    add_series(rep, "root", r_sum);
    add_series(rep, "d", d_sum);
    add_series(rep, "d_prime", dp_sum);
    rep.require("root_sum_converges", converges(r_sum.overall()));
    rep.require("d_sum_converges", converges(d_sum.overall()));
    rep.require("d_prime_sum_converges", converges(dp_sum.overall()));
    return rep;
}

}  // namespace skomap
