#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace gaprenorm::cheb {

// Chebyshev series on [0,1]: p(x) = sum_j c[j] * T_j(2x - 1).  The leading
// coefficient is stored plain (no halving convention).

double eval(std::span<const double> c, double x);

// Coefficients of dp/dx.  Output length is max(c.size() - 1, 1).
std::vector<double> derivative(std::span<const double> c);

// Coefficients of the antiderivative P with P(0) = 0.  Length c.size() + 1.
std::vector<double> antiderivative(std::span<const double> c);

// Chebyshev-Lobatto points mapped to [0,1], increasing.  n >= 2.
std::vector<double> lobatto_nodes(std::size_t n);

// Series of the degree n-1 interpolant through values at lobatto_nodes(n),
// n = values.size() >= 2.
std::vector<double> interpolate(std::span<const double> values);

struct FitResult {
    std::vector<double> coeffs;
    double max_residual = 0.0;
};

// Least-squares fit of a series with m coefficients through the given
// samples; residual is the sup norm over the sample points.
FitResult fit(std::span<const double> nodes, std::span<const double> values,
              std::size_t m);

}  // namespace gaprenorm::cheb
