#include "gaprenorm/cheb.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gaprenorm::cheb {

double eval(std::span<const double> c, double x) {
    if (c.empty()) return 0.0;
    const double t = 2.0 * x - 1.0;
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = c.size(); j-- > 1;) {
        const double b0 = c[j] + 2.0 * t * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c[0] + t * b1 - b2;
}

std::vector<double> derivative(std::span<const double> c) {
    const std::size_t n = c.size();
    if (n <= 1) return {0.0};
    std::vector<double> d(n - 1, 0.0);
    // Recurrence in the variable t = 2x - 1, descending order.
    double next = 0.0, after = 0.0;  // d[j+1], d[j+2] while filling d[j]
    for (std::size_t j = n - 1; j-- > 0;) {
        d[j] = after + 2.0 * static_cast<double>(j + 1) * c[j + 1];
        after = next;
        next = d[j];
    }
    d[0] *= 0.5;
    for (double& v : d) v *= 2.0;  // chain rule dt/dx = 2
    return d;
}

std::vector<double> antiderivative(std::span<const double> c) {
    const std::size_t n = c.size();
    std::vector<double> f(n + 1, 0.0);
    if (n == 0) return f;
    auto at = [&](std::size_t j) { return j < n ? c[j] : 0.0; };
    f[1] = at(0) - 0.5 * at(2);
    for (std::size_t j = 2; j <= n; ++j)
        f[j] = (at(j - 1) - at(j + 1)) / (2.0 * static_cast<double>(j));
    for (std::size_t j = 1; j <= n; ++j) f[j] *= 0.5;  // dx = dt / 2
    double f0 = 0.0;  // pin P(0) = 0, i.e. the series at t = -1
    for (std::size_t j = 1; j <= n; ++j)
        f0 += (j % 2 == 0) ? -f[j] : f[j];
    f[0] = f0;
    return f;
}

std::vector<double> lobatto_nodes(std::size_t n) {
    if (n < 2) throw std::invalid_argument("lobatto_nodes: need n >= 2");
    std::vector<double> x(n);
    const double den = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i)
        x[i] = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(i) / den));
    x.front() = 0.0;
    x.back() = 1.0;
    return x;
}

std::vector<double> interpolate(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw std::invalid_argument("interpolate: need >= 2 values");
    const double den = static_cast<double>(n - 1);
    std::vector<double> c(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            acc += w * values[i] *
                   std::cos(std::numbers::pi * static_cast<double>(i * j) / den);
        }
        // Nodes run with increasing x, so t_i = -cos(pi i / (n-1)); the
        // reflection contributes the (-1)^j.
        const double sign = (j % 2 == 0) ? 1.0 : -1.0;
        c[j] = sign * 2.0 / den * acc;
    }
    c.front() *= 0.5;
    c.back() *= 0.5;
    return c;
}

FitResult fit(std::span<const double> nodes, std::span<const double> values,
              std::size_t m) {
    if (nodes.size() != values.size())
        throw std::invalid_argument("fit: nodes/values size mismatch");
    if (m == 0 || nodes.size() < m)
        throw std::invalid_argument("fit: need at least m sample points");
    const auto rows = static_cast<Eigen::Index>(nodes.size());
    const auto cols = static_cast<Eigen::Index>(m);
    Eigen::MatrixXd a(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const double t = 2.0 * nodes[static_cast<std::size_t>(i)] - 1.0;
        double t0 = 1.0, t1 = t;
        for (Eigen::Index j = 0; j < cols; ++j) {
            if (j == 0) {
                a(i, j) = 1.0;
            } else if (j == 1) {
                a(i, j) = t;
            } else {
                const double t2 = 2.0 * t * t1 - t0;
                t0 = t1;
                t1 = t2;
                a(i, j) = t2;
            }
        }
    }
    Eigen::Map<const Eigen::VectorXd> rhs(values.data(), rows);
    Eigen::VectorXd sol = a.colPivHouseholderQr().solve(rhs);
    const double resid = (a * sol - rhs).cwiseAbs().maxCoeff();
    return {std::vector<double>(sol.data(), sol.data() + m), resid};
}

}  // namespace gaprenorm::cheb
