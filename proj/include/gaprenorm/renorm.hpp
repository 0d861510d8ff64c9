#pragma once

#include <cstddef>
#include <vector>

#include "gaprenorm/gapmap.hpp"
#include "gaprenorm/types.hpp"

namespace gaprenorm {

struct CombinatoricsEntry {
    Sign sigma = Sign::minus;
    long k = 1;
};

// One entry per renormalization level, outermost first.
using Combinatorics = std::vector<CombinatoricsEntry>;

inline constexpr long kGapIterationCap = 1'000'000;

// Minimal k >= 1 such that the gap and its first k-1 images lie strictly on
// one side of 0 while the k-th image lies strictly on the other, with 0 off
// every closure by a margin of 1e-12 gap widths.  Throws
// NotRenormalizableError (boundary = true when 0 sits within margin of a
// closure endpoint) or CapError past the iteration cap.
long find_k(const GapMap& f, long cap = kGapIterationCap);

// First-return map to I' as composition closures over the two branches.
// Branch maps are applied pointwise, never composed symbolically.
class ReturnMap {
public:
    struct Probe {
        double value = 0.0;
        double derivative = 0.0;
        double nonlinearity = 0.0;
    };

    long k() const { return k_; }
    Sign sigma() const { return sigma_; }
    Interval i_prime() const { return i_prime_; }

    // Left acts on [I'.lo, 0], right on [0, I'.hi] (closed here; the
    // discontinuity itself is excluded upstream).
    double left(double x) const { return run(left_seq_, x).value; }
    double right(double x) const { return run(right_seq_, x).value; }
    Probe probe_left(double x) const { return run(left_seq_, x); }
    Probe probe_right(double x) const { return run(right_seq_, x); }

    // Branch application order (first applied first).
    const std::vector<Side>& left_sequence() const { return left_seq_; }
    const std::vector<Side>& right_sequence() const { return right_seq_; }

    // Source interval of each application step along a return branch,
    // starting from [I'.lo, 0] (left) or [0, I'.hi] (right).
    std::vector<Interval> source_intervals(Side return_branch) const;

    const GapMap& base() const { return f_; }

private:
    friend ReturnMap return_map(const GapMap& f);
    ReturnMap(GapMap f, long k, Sign sigma, Interval i_prime,
              std::vector<Side> ls, std::vector<Side> rs);

    Probe run(const std::vector<Side>& seq, double x) const;

    GapMap f_;
    long k_;
    Sign sigma_;
    Interval i_prime_;
    std::vector<Side> left_seq_, right_seq_;
};

ReturnMap return_map(const GapMap& f);

struct RenormStep {
    long k = 1;
    Sign sigma = Sign::minus;
    Interval i_prime;
    GapMap renormalized;
};

// One application of the renormalization operator: rescale the first-return
// map affinely to a length-1 domain fixing 0 and re-extract coordinates.
// fit_tol bounds the nonlinearity re-projection residual (AccuracyError).
RenormStep renormalize(const GapMap& f, double fit_tol = 1e-8);

enum class StopReason { completed, not_renormalizable, boundary, cap };

struct Trajectory {
    std::vector<RenormStep> steps;
    Combinatorics gamma;
    StopReason stop = StopReason::completed;

    std::size_t achieved_depth() const { return steps.size(); }
};

// Iterates renormalize up to n times, stopping early (without throwing)
// when a level is not renormalizable or hits the iteration cap.
Trajectory renormalize_n(const GapMap& f, std::size_t n, double fit_tol = 1e-8);

// Deviation of f from the affine map with the same (alpha, beta, b):
// max over branches of sup|eta| + sup|Deta| + sup|S| in unit coordinates.
double affine_distance(const GapMap& f);

}  // namespace gaprenorm
