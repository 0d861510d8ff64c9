#pragma once

#include <cstddef>

#include "gaprenorm/diffeo.hpp"
#include "gaprenorm/types.hpp"

namespace gaprenorm {

// Dissipative gap map of [b-1, b] \ {0}: two increasing contracting
// branches with a jump at 0, assembled from the coordinates
// (alpha, beta, b, phi_L, phi_R).  The branch slopes never exceed
// nu = max(alpha sup Dphi_L, beta sup Dphi_R) < 1.
class GapMap {
public:
    GapMap(double alpha, double beta, double b, Diffeo phi_l, Diffeo phi_r);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double b() const { return b_; }
    double nu() const { return nu_; }
    const Diffeo& phi_left() const { return phi_l_; }
    const Diffeo& phi_right() const { return phi_r_; }

    Interval domain() const { return {b_ - 1.0, b_}; }

    // Piecewise evaluation; x = 0 is the discontinuity and is rejected.
    double eval(double x) const;
    double operator()(double x) const { return eval(x); }

    // Branch maps on their closed domains [b-1, 0] and [0, b].
    double branch_value(Side s, double x) const;
    double branch_derivative(Side s, double x) const;
    double branch_nonlinearity(Side s, double x) const;

    // The gap (f(b), f(b-1)) = (beta b + b - 1, alpha (b-1) + b).
    Interval gap() const;
    Sign sign() const { return b_ <= 0.5 ? Sign::minus : Sign::plus; }

    // Lateral orbits of the discontinuity: plus follows f^{j-1}(b-1),
    // minus follows f^{j-1}(b), j >= 1.
    double lateral_orbit(Sign side_of_zero, std::size_t j) const;

    // Conjugation by x -> -x, which swaps the branches.
    GapMap mirrored() const;

private:
    double alpha_, beta_, b_, nu_;
    Diffeo phi_l_, phi_r_;
};

}  // namespace gaprenorm
