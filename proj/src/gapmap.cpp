#include "gaprenorm/gapmap.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gaprenorm/errors.hpp"

namespace gaprenorm {

namespace {

constexpr double kEdgeSlack = 1e-12;
constexpr double kOrbitMargin = 1e-14;
constexpr double kDegenerateGap = 1e-14;

void require_unit_open(double v, const char* name) {
    if (!(v > 0.0) || !(v < 1.0) || !std::isfinite(v))
        throw DomainError(std::string("GapMap: ") + name +
                          " must lie strictly inside (0,1)");
}

double sup_derivative(const Diffeo& d) {
    constexpr std::size_t kCells = 2048;
    double s = 0.0;
    for (std::size_t i = 0; i <= kCells; ++i)
        s = std::max(s, d.derivative(static_cast<double>(i) / kCells));
    return s;
}

}  // namespace

GapMap::GapMap(double alpha, double beta, double b, Diffeo phi_l, Diffeo phi_r)
    : alpha_(alpha),
      beta_(beta),
      b_(b),
      phi_l_(std::move(phi_l)),
      phi_r_(std::move(phi_r)) {
    require_unit_open(alpha_, "alpha");
    require_unit_open(beta_, "beta");
    require_unit_open(b_, "b");
    nu_ = std::max(alpha_ * sup_derivative(phi_l_), beta_ * sup_derivative(phi_r_));
    if (!(nu_ < 1.0))
        throw DomainError("GapMap: not dissipative, branch slope bound nu = " +
                          std::to_string(nu_) + " >= 1");
}

double GapMap::eval(double x) const {
    if (x == 0.0)
        throw DomainError("GapMap: evaluation at the discontinuity point 0");
    if (x < b_ - 1.0 - kEdgeSlack || x > b_ + kEdgeSlack)
        throw DomainError("GapMap: argument outside [b-1, b]");
    return x < 0.0 ? branch_value(Side::left, x) : branch_value(Side::right, x);
}

double GapMap::branch_value(Side s, double x) const {
    if (s == Side::left) {
        if (x < b_ - 1.0 - kEdgeSlack || x > kEdgeSlack)
            throw DomainError("GapMap: argument outside the left branch domain");
        const double u = std::clamp((x - b_ + 1.0) / (1.0 - b_), 0.0, 1.0);
        return alpha_ * (1.0 - b_) * phi_l_(u) + alpha_ * (b_ - 1.0) + b_;
    }
    if (x < -kEdgeSlack || x > b_ + kEdgeSlack)
        throw DomainError("GapMap: argument outside the right branch domain");
    const double u = std::clamp(x / b_, 0.0, 1.0);
    return beta_ * b_ * phi_r_(u) + b_ - 1.0;
}

double GapMap::branch_derivative(Side s, double x) const {
    if (s == Side::left) {
        const double u = std::clamp((x - b_ + 1.0) / (1.0 - b_), 0.0, 1.0);
        return alpha_ * phi_l_.derivative(u);
    }
    const double u = std::clamp(x / b_, 0.0, 1.0);
    return beta_ * phi_r_.derivative(u);
}

double GapMap::branch_nonlinearity(Side s, double x) const {
    if (s == Side::left) {
        const double u = std::clamp((x - b_ + 1.0) / (1.0 - b_), 0.0, 1.0);
        return phi_l_.nonlinearity(u) / (1.0 - b_);
    }
    const double u = std::clamp(x / b_, 0.0, 1.0);
    return phi_r_.nonlinearity(u) / b_;
}

Interval GapMap::gap() const {
    const Interval g{beta_ * b_ + b_ - 1.0, alpha_ * (b_ - 1.0) + b_};
    if (!(g.length() >= kDegenerateGap))
        throw DomainError("GapMap: degenerate gap");
    return g;
}

double GapMap::lateral_orbit(Sign side_of_zero, std::size_t j) const {
    if (j < 1) throw DomainError("GapMap: lateral orbit index must be >= 1");
    double x = side_of_zero == Sign::plus ? b_ - 1.0 : b_;
    for (std::size_t i = 1; i < j; ++i) {
        if (std::abs(x) < kOrbitMargin)
            throw DomainError(
                "GapMap: lateral orbit hits the discontinuity (boundary case)");
        x = eval(x);
    }
    return x;
}

GapMap GapMap::mirrored() const {
    return GapMap(beta_, alpha_, 1.0 - b_, mirror(phi_r_), mirror(phi_l_));
}

}  // namespace gaprenorm
