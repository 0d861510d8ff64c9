#include "gaprenorm/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Eigenvalues>

#include "gaprenorm/errors.hpp"

namespace gaprenorm {

namespace {

void copy_block(Eigen::VectorXd& x, std::size_t offset,
                const std::vector<double>& coeffs, std::size_t m) {
    if (coeffs.size() > m)
        throw DomainError("nonlinearity basis larger than the chart dimension");
    for (std::size_t i = 0; i < m; ++i)
        x[static_cast<long>(offset + i)] = i < coeffs.size() ? coeffs[i] : 0.0;
}

}  // namespace

Eigen::VectorXd coords_of(const GapMap& f, std::size_t m) {
    Eigen::VectorXd x(static_cast<long>(3 + 2 * m));
    x[0] = f.alpha();
    x[1] = f.beta();
    x[2] = f.b();
    copy_block(x, 3, f.phi_left().coeffs(), m);
    copy_block(x, 3 + m, f.phi_right().coeffs(), m);
    return x;
}

GapMap map_of_coords(const Eigen::VectorXd& x, std::size_t m) {
    if (x.size() != static_cast<long>(3 + 2 * m))
        throw DomainError("coordinate vector size does not match the chart");
    std::vector<double> cl(m), cr(m);
    for (std::size_t i = 0; i < m; ++i) {
        cl[i] = x[static_cast<long>(3 + i)];
        cr[i] = x[static_cast<long>(3 + m + i)];
    }
    return GapMap(x[0], x[1], x[2], Diffeo::from_coeffs(std::move(cl)),
                  Diffeo::from_coeffs(std::move(cr)));
}

double tangent_norm(const Eigen::VectorXd& v, std::size_t m) {
    const long lm = static_cast<long>(m);
    return std::fabs(v[0]) + std::fabs(v[1]) + std::fabs(v[2]) +
           v.segment(3, lm).norm() + v.segment(3 + lm, lm).norm();
}

Jacobian jacobian(const GapMap& f, std::size_t m, double h) {
    if (h <= 0.0) throw DomainError("finite-difference step must be positive");
    const RenormStep base = renormalize(f);
    const Eigen::VectorXd x0 = coords_of(f, m);
    const long n = static_cast<long>(3 + 2 * m);
    Eigen::MatrixXd jac(n, n);

    for (long j = 0; j < n; ++j) {
        const double scale = j < 3 ? std::fabs(x0[j]) : 1.0;
        double hj = h * scale;
        bool done = false;
        for (int attempt = 0; attempt <= 4 && !done; ++attempt, hj *= 0.5) {
            Eigen::VectorXd xp = x0, xm = x0;
            xp[j] += hj;
            xm[j] -= hj;
            try {
                const RenormStep rp = renormalize(map_of_coords(xp, m));
                const RenormStep rm = renormalize(map_of_coords(xm, m));
                if (rp.k != base.k || rp.sigma != base.sigma ||
                    rm.k != base.k || rm.sigma != base.sigma)
                    continue;  // combinatorics moved; retry with half the step
                jac.col(j) = (coords_of(rp.renormalized, m) -
                              coords_of(rm.renormalized, m)) /
                             (2.0 * hj);
                done = true;
            } catch (const NotRenormalizableError&) {
            } catch (const DomainError&) {
            }
        }
        if (!done)
            throw StepTooLargeError(
                "jacobian: combinatorics break under perturbation of "
                "coordinate " +
                std::to_string(j) + " even after step halving");
    }

    return Jacobian{std::move(jac),
                    m,
                    f,
                    base.i_prime.length(),
                    h,
                    base.k,
                    base.sigma};
}

BlockReport block_report(const Jacobian& j) {
    const long m = static_cast<long>(j.m);
    BlockReport r;
    r.K1 = j.matrix(2, 0);
    r.K2 = j.matrix(2, 1);
    r.K3 = j.matrix(2, 2);
    r.K4 = j.matrix.row(2).segment(3, m).norm();
    r.M1 = j.matrix.col(2).segment(3, m).norm();
    r.M2 = j.matrix.col(2).segment(3 + m, m).norm();
    const double top = j.matrix.topRows(2).cwiseAbs().maxCoeff();
    const double d_block =
        j.matrix.bottomRightCorner(2 * m, 2 * m).cwiseAbs().maxCoeff();
    r.eps_max = std::max(top, d_block);
    return r;
}

std::vector<double> spectrum(const Jacobian& j) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(j.matrix);
    if (solver.info() != Eigen::Success)
        throw NumericError("spectrum: eigensolver failed to converge");
    std::vector<double> mags(static_cast<std::size_t>(j.matrix.rows()));
    for (std::size_t i = 0; i < mags.size(); ++i)
        mags[i] = std::abs(solver.eigenvalues()[static_cast<long>(i)]);
    std::sort(mags.begin(), mags.end(), std::greater<>());
    return mags;
}

SplittingVerdict splitting_verdict(const Jacobian& j, double delta) {
    if (delta <= 0.0 || delta >= 1.0)
        throw DomainError("splitting threshold must lie in (0,1)");
    const auto mags = spectrum(j);
    SplittingVerdict v;
    v.lambda_max = mags.empty() ? 0.0 : mags.front();
    v.lambda_second = mags.size() > 1 ? mags[1] : 0.0;
    bool rest_small = true;
    for (std::size_t i = 0; i < mags.size(); ++i) {
        if (mags[i] >= 1.0 / delta)
            ++v.unstable_count;
        else if (i > 0 && mags[i] > delta)
            rest_small = false;
    }
    v.pass = v.unstable_count == 1 && rest_small && v.lambda_max >= 1.0 / delta;
    return v;
}

ReducedRoots reduced_model_roots(double k3, double k4, double m1) {
    const double disc = k3 * k3 + 4.0 * k4 * m1;
    ReducedRoots r;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        r.plus = 0.5 * (k3 + s);
        r.minus = 0.5 * (k3 - s);
    } else {
        r.is_complex = true;
        r.plus = r.minus = 0.5 * k3;
        r.imag = 0.5 * std::sqrt(-disc);
    }
    return r;
}

bool cone_contains(const Eigen::VectorXd& v, const ConeParams& p,
                   std::size_t m) {
    if (v.size() != static_cast<long>(3 + 2 * m))
        throw DomainError("tangent vector size does not match the chart");
    const long lm = static_cast<long>(m);
    const double db = std::fabs(v[2]);
    const double slopes = std::fabs(v[0]) + std::fabs(v[1]);
    const double etas = v.segment(3, lm).norm() + v.segment(3 + lm, lm).norm();
    return slopes <= p.r * db && etas <= p.delta * db;
}

namespace {

Eigen::VectorXd gaussian_vector(std::mt19937_64& rng, long n) {
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(n);
    for (long i = 0; i < n; ++i) v[i] = gauss(rng);
    return v;
}

// Random vector on the cone boundary scale |db| = 1 with uniformly drawn
// budget fractions.
Eigen::VectorXd random_cone_vector(std::mt19937_64& rng, const ConeParams& p,
                                   std::size_t m) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const long lm = static_cast<long>(m);
    Eigen::VectorXd v = Eigen::VectorXd::Zero(3 + 2 * lm);
    v[2] = unit(rng) < 0.5 ? -1.0 : 1.0;
    const double slope_budget = p.r * unit(rng);
    const double split = unit(rng);
    v[0] = (unit(rng) < 0.5 ? -1.0 : 1.0) * slope_budget * split;
    v[1] = (unit(rng) < 0.5 ? -1.0 : 1.0) * slope_budget * (1.0 - split);
    const double eta_budget = p.delta * unit(rng);
    const double eta_split = unit(rng);
    Eigen::VectorXd gl = gaussian_vector(rng, lm);
    Eigen::VectorXd gr = gaussian_vector(rng, lm);
    if (gl.norm() > 0.0) v.segment(3, lm) = gl * (eta_budget * eta_split / gl.norm());
    if (gr.norm() > 0.0)
        v.segment(3 + lm, lm) = gr * (eta_budget * (1.0 - eta_split) / gr.norm());
    return v;
}

}  // namespace

ConeReport cone_invariance_test(const Jacobian& j, const ConeParams& p,
                                std::size_t samples, std::uint64_t seed) {
    if (samples == 0) throw DomainError("sample count must be positive");
    std::mt19937_64 rng(seed);
    const ConeParams half{p.r * 0.5, p.delta * 0.5};
    ConeReport rep;
    rep.samples = samples;
    rep.min_expansion = std::numeric_limits<double>::infinity();
    std::size_t inside = 0;
    for (std::size_t s = 0; s < samples; ++s) {
        const Eigen::VectorXd v = random_cone_vector(rng, p, j.m);
        const Eigen::VectorXd w = j.matrix * v;
        if (cone_contains(w, half, j.m)) ++inside;
        const double ratio = tangent_norm(w, j.m) / tangent_norm(v, j.m);
        rep.min_expansion = std::min(rep.min_expansion, ratio);
        rep.max_expansion = std::max(rep.max_expansion, ratio);
    }
    rep.contained_fraction = static_cast<double>(inside) / samples;
    return rep;
}

TechnicalLemmaReport technical_lemma_check(const Jacobian& j,
                                           const ConeParams& p,
                                           std::size_t samples,
                                           std::uint64_t seed) {
    if (samples == 0) throw DomainError("sample count must be positive");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const long n = j.matrix.rows();
    const double k3 = j.matrix(2, 2);
    TechnicalLemmaReport rep;
    rep.samples = samples;
    for (std::size_t s = 0; s < samples; ++s) {
        Eigen::VectorXd v = gaussian_vector(rng, n);
        if (s % 2 == 1 && k3 != 0.0) {
            // target the kernel of the b~ row so the image has a small b
            // component and can leave the cone
            const double rest = j.matrix.row(2).dot(v) - k3 * v[2];
            v[2] = -rest / k3 + j.i_prime_len * gauss(rng);
        }
        const double nv = tangent_norm(v, j.m);
        if (nv == 0.0) continue;
        const Eigen::VectorXd w = j.matrix * v;
        if (cone_contains(w, p, j.m)) continue;
        ++rep.outside_count;
        rep.clause_i_max =
            std::max(rep.clause_i_max, std::fabs(v[2]) / (j.i_prime_len * nv));
        rep.clause_ii_max = std::max(rep.clause_ii_max, tangent_norm(w, j.m) / nv);
    }
    rep.inconclusive = rep.outside_count == 0;
    return rep;
}

}  // namespace gaprenorm
