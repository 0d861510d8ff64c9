#pragma once

namespace gaprenorm {

// Closed interval [lo, hi].  No invariant is enforced here; code that
// requires lo < hi checks at the point of use.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const noexcept { return hi - lo; }
    double midpoint() const noexcept { return 0.5 * (lo + hi); }
    bool contains(double x) const noexcept { return lo <= x && x <= hi; }
};

// Branch selector (also names interval endpoints: left = lo, right = hi).
enum class Side { left, right };

// Sign class of a gap map: minus when the right half [0, b] is the shorter
// one (b <= 1/2), plus otherwise.  Also labels the lateral orbits of the
// discontinuity: plus = orbit of 0+, minus = orbit of 0-.
enum class Sign { minus, plus };

inline Sign opposite(Sign s) noexcept {
    return s == Sign::minus ? Sign::plus : Sign::minus;
}

}  // namespace gaprenorm
