#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gaprenorm/types.hpp"

namespace gaprenorm {

struct NormReport {
    double c0_nonlinearity = 0.0;   // sup |eta|
    double c1_nonlinearity = 0.0;   // max(sup |eta|, sup |Deta|)
    double c0_dist_identity = 0.0;  // sup |phi(x) - x|
};

// Increasing diffeomorphism of [0,1] fixing both endpoints, represented by
// the Chebyshev series of its nonlinearity eta = D2phi / Dphi.  The map is
// recovered as phi(x) = W(x) / W(1) with W the antiderivative of exp of the
// antiderivative of eta, so Dphi > 0 holds for every coefficient vector.
class Diffeo {
public:
    static Diffeo identity(std::size_t m = 16);
    static Diffeo from_coeffs(std::vector<double> eta_coeffs);
    // Projects a pointwise nonlinearity onto m coefficients by least squares
    // over 4m sample points.  Throws AccuracyError if the residual exceeds
    // fit_tol.
    static Diffeo from_nonlinearity(const std::function<double(double)>& eta,
                                    std::size_t m, double fit_tol = 1e-8);

    // All evaluators require x in [0,1] up to 1e-12 slack (DomainError
    // otherwise).
    double operator()(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;
    double nonlinearity(double x) const;
    double nonlinearity_derivative(double x) const;
    // Schwarzian derivative, expressed through eta: Deta - eta^2 / 2.
    double schwarzian(double x) const;

    // Normalization integral of exp(int eta); phi values are scaled by it.
    double norm_integral() const { return z_; }

    const std::vector<double>& coeffs() const { return eta_; }
    std::size_t basis_size() const { return eta_.size(); }

    // Sup norms over 2048 equispaced subintervals (2049 points with both
    // endpoints included).
    NormReport norms() const;

private:
    Diffeo() = default;
    void rebuild();

    std::vector<double> eta_;      // nonlinearity series
    std::vector<double> deta_;     // its derivative series
    std::vector<double> g_;        // antiderivative of eta, g(0) = 0
    std::vector<double> h_;        // interpolant of exp(g)
    std::vector<double> dh_;       // derivative series of h_
    std::vector<double> w_;        // antiderivative of h_, w(0) = 0
    double z_ = 1.0;               // w_(1)
};

// Reflection conjugation x -> 1 - x on both sides; exact on coefficients.
Diffeo mirror(const Diffeo& d);

// outer o inner, re-projected onto m_out coefficients (0 picks a size from
// the operands).  Throws AccuracyError if the fit residual exceeds fit_tol.
Diffeo compose(const Diffeo& outer, const Diffeo& inner, std::size_t m_out = 0,
               double fit_tol = 1e-9);

// Restriction of d to the subinterval i of [0,1], rescaled to a map of
// [0,1] again; the nonlinearity transforms exactly in coefficients.  Throws
// DomainError if the interval is narrower than min_width or outside [0,1].
Diffeo zoom(const Diffeo& d, Interval i, double min_width = 1e-13);

// Recovers the nonlinearity series of an increasing map of [0,1] from its
// derivative values, by fitting log dphi and differentiating the fit.
// The inverse of the coefficients -> map construction.
std::vector<double> nonlinearity_from_derivative(
    const std::function<double(double)>& dphi, std::size_t m,
    double fit_tol = 1e-8);

// Directional (Gateaux) derivative of phi(x) with respect to the
// nonlinearity coefficients, in direction delta_eta.
double evaluation_derivative(const Diffeo& d, double x,
                             std::span<const double> delta_eta);

// Derivative of the zoomed nonlinearity value at x with respect to one
// interval endpoint (left = i.lo, right = i.hi).
double zoom_endpoint_derivative(const Diffeo& d, Interval i,
                                Side which_endpoint, double x);

}  // namespace gaprenorm
