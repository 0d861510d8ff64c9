#include "gaprenorm/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "gaprenorm/cheb.hpp"
#include "gaprenorm/errors.hpp"

namespace gaprenorm {

namespace {

constexpr double kMarginFactor = 1e-12;
constexpr double kCrossCheckTol = 1e-9;

}  // namespace

long find_k(const GapMap& f, long cap) {
    const Interval g = f.gap();
    const double margin = kMarginFactor * g.length();
    double lo = g.lo, hi = g.hi;
    int side0 = 0;
    for (long i = 0; i <= cap; ++i) {
        if (lo <= margin && hi >= -margin) {
            // 0 meets the closure of this iterate of the gap.
            const bool interior = lo <= -margin && hi >= margin;
            throw NotRenormalizableError(
                interior ? "find_k: a gap iterate strictly contains the "
                           "discontinuity (iterate " + std::to_string(i) + ")"
                         : "find_k: a gap iterate touches the discontinuity "
                           "within margin (iterate " + std::to_string(i) + ")",
                /*boundary=*/!interior);
        }
        const int side = lo > 0.0 ? +1 : -1;
        if (i == 0) {
            side0 = side;
        } else if (side != side0) {
            return i;
        }
        lo = f.eval(lo);
        hi = f.eval(hi);
    }
    throw CapError("find_k: no side change within " + std::to_string(cap) +
                   " gap iterations");
}

ReturnMap::ReturnMap(GapMap f, long k, Sign sigma, Interval i_prime,
                     std::vector<Side> ls, std::vector<Side> rs)
    : f_(std::move(f)),
      k_(k),
      sigma_(sigma),
      i_prime_(i_prime),
      left_seq_(std::move(ls)),
      right_seq_(std::move(rs)) {}

ReturnMap::Probe ReturnMap::run(const std::vector<Side>& seq, double x) const {
    // Accumulates value, derivative, and nonlinearity of the composition:
    // N(m o g) = (Nm o g) Dg + Ng applied step by step.
    Probe p{x, 1.0, 0.0};
    for (Side s : seq) {
        p.nonlinearity += f_.branch_nonlinearity(s, p.value) * p.derivative;
        p.derivative *= f_.branch_derivative(s, p.value);
        p.value = f_.branch_value(s, p.value);
    }
    return p;
}

std::vector<Interval> ReturnMap::source_intervals(Side return_branch) const {
    const auto& seq =
        return_branch == Side::left ? left_seq_ : right_seq_;
    Interval u = return_branch == Side::left ? Interval{i_prime_.lo, 0.0}
                                             : Interval{0.0, i_prime_.hi};
    std::vector<Interval> out;
    out.reserve(seq.size());
    for (Side s : seq) {
        out.push_back(u);
        u = {f_.branch_value(s, u.lo), f_.branch_value(s, u.hi)};
    }
    return out;
}

ReturnMap return_map(const GapMap& f) {
    const long k = find_k(f);
    const Sign sigma = f.sign();
    Interval ip;
    std::vector<Side> ls, rs;
    const auto sz = static_cast<std::size_t>(k);
    if (sigma == Sign::minus) {
        ip = {f.lateral_orbit(Sign::plus, sz + 1),
              f.lateral_orbit(Sign::minus, sz + 2)};
        ls.push_back(Side::left);
        ls.push_back(Side::right);
        ls.insert(ls.end(), sz, Side::left);
        rs.push_back(Side::right);
        rs.insert(rs.end(), sz, Side::left);
    } else {
        ip = {f.lateral_orbit(Sign::plus, sz + 2),
              f.lateral_orbit(Sign::minus, sz + 1)};
        ls.push_back(Side::left);
        ls.insert(ls.end(), sz, Side::right);
        rs.push_back(Side::right);
        rs.push_back(Side::left);
        rs.insert(rs.end(), sz, Side::right);
    }
    if (!(ip.lo < 0.0 && ip.hi > 0.0))
        throw NotRenormalizableError(
            "return_map: return interval does not surround the discontinuity",
            /*boundary=*/true);
    return ReturnMap(f, k, sigma, ip, std::move(ls), std::move(rs));
}

RenormStep renormalize(const GapMap& f, double fit_tol) {
    const ReturnMap rm = return_map(f);
    const double lo = rm.i_prime().lo, hi = rm.i_prime().hi;
    const double len = hi - lo;
    const double b_t = hi / len;

    // Slopes of the rescaled return branches between their endpoints.
    const double g_left_end = rm.left(lo) / len;
    const double g_right_end = rm.right(hi) / len;
    const double alpha_t = (b_t - g_left_end) / (1.0 - b_t);
    const double beta_t = (g_right_end - (b_t - 1.0)) / b_t;

    if (rm.sigma() == Sign::minus) {
        // Same quantities along an independent arithmetic path through the
        // lateral orbit values, guarding the slope extraction.
        const auto sz = static_cast<std::size_t>(rm.k());
        const double p = f.lateral_orbit(Sign::plus, sz + 1);
        const double q = f.lateral_orbit(Sign::minus, sz + 2);
        const double alpha_lit = (rm.left(p) - q) / p;
        const double beta_lit = (rm.right(q) - p) / q;
        const double scale = std::max({1.0, std::abs(alpha_t), std::abs(beta_t)});
        if (std::abs(alpha_lit - alpha_t) > kCrossCheckTol * scale ||
            std::abs(beta_lit - beta_t) > kCrossCheckTol * scale)
            throw NumericError(
                "renormalize: slope extraction paths disagree beyond 1e-9");
    }

    // Unit-coordinate nonlinearities of the rescaled branches.
    const std::size_t m = std::max(f.phi_left().basis_size(),
                                   f.phi_right().basis_size());
    const auto nodes = cheb::lobatto_nodes(std::max<std::size_t>(4 * m, 8));
    std::vector<double> vals_l(nodes.size()), vals_r(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const double u = nodes[i];
        vals_l[i] = -lo * rm.probe_left(lo * (1.0 - u)).nonlinearity;
        vals_r[i] = hi * rm.probe_right(hi * u).nonlinearity;
    }
    auto fit_l = cheb::fit(nodes, vals_l, m);
    auto fit_r = cheb::fit(nodes, vals_r, m);
    if (fit_l.max_residual > fit_tol || fit_r.max_residual > fit_tol)
        throw AccuracyError(
            "renormalize: nonlinearity fit residual " +
            std::to_string(std::max(fit_l.max_residual, fit_r.max_residual)) +
            " exceeds tolerance; raise the basis dimension");

    GapMap renormalized(alpha_t, beta_t, b_t,
                        Diffeo::from_coeffs(std::move(fit_l.coeffs)),
                        Diffeo::from_coeffs(std::move(fit_r.coeffs)));
    return {rm.k(), rm.sigma(), rm.i_prime(), std::move(renormalized)};
}

Trajectory renormalize_n(const GapMap& f, std::size_t n, double fit_tol) {
    Trajectory t;
    const GapMap* cur = &f;
    for (std::size_t i = 0; i < n; ++i) {
        try {
            RenormStep step = renormalize(*cur, fit_tol);
            t.steps.push_back(std::move(step));
        } catch (const NotRenormalizableError& e) {
            t.stop = e.boundary() ? StopReason::boundary
                                  : StopReason::not_renormalizable;
            return t;
        } catch (const CapError&) {
            t.stop = StopReason::cap;
            return t;
        }
        t.gamma.push_back({t.steps.back().sigma, t.steps.back().k});
        cur = &t.steps.back().renormalized;
    }
    return t;
}

double affine_distance(const GapMap& f) {
    constexpr std::size_t kCells = 2048;
    double worst = 0.0;
    for (const Diffeo* d : {&f.phi_left(), &f.phi_right()}) {
        double c0 = 0.0, c1 = 0.0, sch = 0.0;
        for (std::size_t i = 0; i <= kCells; ++i) {
            const double x = static_cast<double>(i) / kCells;
            c0 = std::max(c0, std::abs(d->nonlinearity(x)));
            c1 = std::max(c1, std::abs(d->nonlinearity_derivative(x)));
            sch = std::max(sch, std::abs(d->schwarzian(x)));
        }
        worst = std::max(worst, c0 + c1 + sch);
    }
    return worst;
}

}  // namespace gaprenorm
