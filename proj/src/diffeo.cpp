#include "gaprenorm/diffeo.hpp"

#include <algorithm>
#include <cmath>

#include "gaprenorm/cheb.hpp"
#include "gaprenorm/errors.hpp"

namespace gaprenorm {

namespace {

constexpr std::size_t kMinQuadNodes = 129;
constexpr std::size_t kTailWindow = 4;
constexpr double kTailTol = 1e-12;
constexpr double kEdgeSlack = 1e-12;

double checked_unit(double x) {
    if (x < -kEdgeSlack || x > 1.0 + kEdgeSlack)
        throw DomainError("Diffeo: argument outside [0,1]");
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace

void Diffeo::rebuild() {
    for (double c : eta_)
        if (!std::isfinite(c))
            throw DomainError("Diffeo: non-finite nonlinearity coefficient");
    deta_ = cheb::derivative(eta_);
    g_ = cheb::antiderivative(eta_);
    const std::size_t n = std::max(kMinQuadNodes, 4 * eta_.size() + 1);
    const auto nodes = cheb::lobatto_nodes(n);
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) {
        vals[i] = std::exp(cheb::eval(g_, nodes[i]));
        if (!std::isfinite(vals[i]))
            throw NumericError("Diffeo: exp(int eta) overflows");
    }
    h_ = cheb::interpolate(vals);
    double head = 0.0, tail = 0.0;
    for (std::size_t j = 0; j < h_.size(); ++j) {
        const double a = std::abs(h_[j]);
        head = std::max(head, a);
        if (j + kTailWindow >= h_.size()) tail = std::max(tail, a);
    }
    if (tail > kTailTol * head)
        throw NumericError(
            "Diffeo: quadrature of exp(int eta) does not resolve; "
            "nonlinearity too large for the working precision");
    dh_ = cheb::derivative(h_);
    w_ = cheb::antiderivative(h_);
    z_ = cheb::eval(w_, 1.0);
}

Diffeo Diffeo::identity(std::size_t m) {
    return from_coeffs(std::vector<double>(std::max<std::size_t>(m, 1), 0.0));
}

Diffeo Diffeo::from_coeffs(std::vector<double> eta_coeffs) {
    if (eta_coeffs.empty())
        throw DomainError("Diffeo: empty coefficient vector");
    Diffeo d;
    d.eta_ = std::move(eta_coeffs);
    d.rebuild();
    return d;
}

Diffeo Diffeo::from_nonlinearity(const std::function<double(double)>& eta,
                                 std::size_t m, double fit_tol) {
    if (m == 0) throw DomainError("Diffeo: basis size must be positive");
    const auto nodes = cheb::lobatto_nodes(std::max<std::size_t>(4 * m, 8));
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = eta(nodes[i]);
    auto fit = cheb::fit(nodes, vals, m);
    if (fit.max_residual > fit_tol)
        throw AccuracyError("Diffeo: nonlinearity fit residual " +
                            std::to_string(fit.max_residual) +
                            " exceeds tolerance");
    return from_coeffs(std::move(fit.coeffs));
}

double Diffeo::operator()(double x) const {
    return cheb::eval(w_, checked_unit(x)) / z_;
}

double Diffeo::derivative(double x) const {
    return cheb::eval(h_, checked_unit(x)) / z_;
}

double Diffeo::second_derivative(double x) const {
    return cheb::eval(dh_, checked_unit(x)) / z_;
}

double Diffeo::nonlinearity(double x) const {
    return cheb::eval(eta_, checked_unit(x));
}

double Diffeo::nonlinearity_derivative(double x) const {
    return cheb::eval(deta_, checked_unit(x));
}

double Diffeo::schwarzian(double x) const {
    x = checked_unit(x);
    const double e = cheb::eval(eta_, x);
    return cheb::eval(deta_, x) - 0.5 * e * e;
}

NormReport Diffeo::norms() const {
    constexpr std::size_t kCells = 2048;
    NormReport r;
    for (std::size_t i = 0; i <= kCells; ++i) {
        const double x = static_cast<double>(i) / kCells;
        r.c0_nonlinearity = std::max(r.c0_nonlinearity, std::abs(nonlinearity(x)));
        r.c1_nonlinearity =
            std::max(r.c1_nonlinearity, std::abs(nonlinearity_derivative(x)));
        r.c0_dist_identity = std::max(r.c0_dist_identity, std::abs((*this)(x) - x));
    }
    r.c1_nonlinearity = std::max(r.c1_nonlinearity, r.c0_nonlinearity);
    return r;
}

Diffeo mirror(const Diffeo& d) {
    std::vector<double> c = d.coeffs();
    for (std::size_t j = 0; j < c.size(); j += 2) c[j] = -c[j];
    return Diffeo::from_coeffs(std::move(c));
}

Diffeo compose(const Diffeo& outer, const Diffeo& inner, std::size_t m_out,
               double fit_tol) {
    const std::size_t m1 = outer.basis_size(), m2 = inner.basis_size();
    std::size_t m = m_out != 0
                        ? m_out
                        : std::min<std::size_t>(std::max<std::size_t>(2 * (m1 + m2), 12), 64);
    m = std::max(m, std::max(m1, m2));
    const auto nodes = cheb::lobatto_nodes(std::max<std::size_t>(4 * m, 8));
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double x = nodes[i];
        vals[i] = outer.nonlinearity(inner(x)) * inner.derivative(x) +
                  inner.nonlinearity(x);
    }
    auto fit = cheb::fit(nodes, vals, m);
    if (fit.max_residual > fit_tol)
        throw AccuracyError("compose: nonlinearity fit residual " +
                            std::to_string(fit.max_residual) +
                            " exceeds tolerance");
    return Diffeo::from_coeffs(std::move(fit.coeffs));
}

Diffeo zoom(const Diffeo& d, Interval i, double min_width) {
    if (!(i.hi - i.lo >= min_width))
        throw DomainError("zoom: interval degenerate or reversed");
    if (i.lo < -kEdgeSlack || i.hi > 1.0 + kEdgeSlack)
        throw DomainError("zoom: interval sticks out of [0,1]");
    const double lo = std::clamp(i.lo, 0.0, 1.0);
    const double hi = std::clamp(i.hi, 0.0, 1.0);
    const double width = hi - lo;
    // The zoomed nonlinearity width * eta(lo + width x) is a polynomial of
    // the same degree, so interpolation at m points reproduces it exactly.
    const std::size_t m = d.basis_size();
    const auto nodes = cheb::lobatto_nodes(std::max<std::size_t>(m, 2));
    std::vector<double> vals(nodes.size());
    for (std::size_t j = 0; j < nodes.size(); ++j)
        vals[j] = width * d.nonlinearity(lo + width * nodes[j]);
    auto c = cheb::interpolate(vals);
    c.resize(m);
    return Diffeo::from_coeffs(std::move(c));
}

std::vector<double> nonlinearity_from_derivative(
    const std::function<double(double)>& dphi, std::size_t m, double fit_tol) {
    if (m == 0) throw DomainError("nonlinearity_from_derivative: m must be positive");
    // log dphi = g + const with g the antiderivative of eta, a polynomial
    // with m + 1 coefficients; fitting log values keeps the conditioning of
    // the recovery independent of the size of dphi.
    const auto nodes = cheb::lobatto_nodes(std::max<std::size_t>(4 * (m + 1), 8));
    std::vector<double> vals(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double dv = dphi(nodes[i]);
        if (!(dv > 0.0) || !std::isfinite(dv))
            throw DomainError("nonlinearity_from_derivative: derivative not positive");
        vals[i] = std::log(dv);
    }
    auto fit = cheb::fit(nodes, vals, m + 1);
    if (fit.max_residual > fit_tol)
        throw AccuracyError("nonlinearity_from_derivative: fit residual " +
                            std::to_string(fit.max_residual) +
                            " exceeds tolerance");
    auto eta = cheb::derivative(fit.coeffs);
    eta.resize(m, 0.0);
    return eta;
}

double evaluation_derivative(const Diffeo& d, double x,
                             std::span<const double> delta_eta) {
    x = checked_unit(x);
    // With W(x) = int_0^x exp(g) and Z = W(1), the variation of
    // phi = W / Z in direction delta_eta is P(x)/Z - W(x) P(1)/Z^2,
    // where P is the antiderivative of q exp(g) and q the antiderivative
    // of delta_eta.
    const auto q = cheb::antiderivative(delta_eta);
    const std::size_t n =
        std::max(kMinQuadNodes, 4 * std::max(q.size(), d.basis_size()) + 1);
    const auto nodes = cheb::lobatto_nodes(n);
    const auto g = cheb::antiderivative(d.coeffs());
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i)
        vals[i] = cheb::eval(q, nodes[i]) * std::exp(cheb::eval(g, nodes[i]));
    const auto p = cheb::antiderivative(cheb::interpolate(vals));
    const double z = d.norm_integral();
    const double p1 = cheb::eval(p, 1.0);
    return cheb::eval(p, x) / z - d(x) * p1 / z;
}

double zoom_endpoint_derivative(const Diffeo& d, Interval i,
                                Side which_endpoint, double x) {
    if (!(i.hi - i.lo >= 1e-13))
        throw DomainError("zoom_endpoint_derivative: degenerate interval");
    x = checked_unit(x);
    const double width = i.hi - i.lo;
    const double u = std::clamp(i.lo + width * x, 0.0, 1.0);
    const double e = d.nonlinearity(u);
    const double de = d.nonlinearity_derivative(u);
    if (which_endpoint == Side::left) return width * (1.0 - x) * de - e;
    return width * x * de + e;
}

}  // namespace gaprenorm
