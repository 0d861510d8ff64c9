#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>

#include "gaprenorm/diffeo.hpp"
#include "gaprenorm/gapmap.hpp"

namespace testsupport {

inline gaprenorm::GapMap affine(double alpha, double beta, double b,
                                std::size_t m = 4) {
    auto id = gaprenorm::Diffeo::identity(m);
    return gaprenorm::GapMap(alpha, beta, b, id, id);
}

// sup |f - g| over n+1 equispaced points of [lo, hi]
inline double grid_sup(const std::function<double(double)>& f,
                       const std::function<double(double)>& g, double lo,
                       double hi, int n = 100) {
    double worst = 0.0;
    for (int i = 0; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        worst = std::max(worst, std::fabs(f(x) - g(x)));
    }
    return worst;
}

}  // namespace testsupport
