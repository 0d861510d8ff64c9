// Acceptance gate: twelve end-to-end checks, one line each.  Every tolerance
// and time budget is pinned below; the exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gaprenorm/cheb.hpp"
#include "gaprenorm/decomp.hpp"
#include "gaprenorm/diffeo.hpp"
#include "gaprenorm/errors.hpp"
#include "gaprenorm/gapmap.hpp"
#include "gaprenorm/renorm.hpp"
#include "gaprenorm/search.hpp"
#include "gaprenorm/tangent.hpp"

using namespace gaprenorm;
using clk = std::chrono::steady_clock;

namespace {

constexpr double kTolRoundTrip = 1e-10;      // 1: derivative -> nonlinearity
constexpr double kTolIdentities = 1e-8;      // 2: chain rule, nested zoom
constexpr double kTolAffineOracle = 1e-10;   // 3: symbolic affine returns
constexpr double kTolSmoothOracle = 1e-8;    // 3: smooth returns and rescale
constexpr double kTolExampleParams = 1e-12;  // 4: worked example coordinates
constexpr double kTolExampleNonlin = 1e-9;   // 4: output nonlinearity
constexpr double kTolSquare = 1e-8;          // 5: commuting square
constexpr double kContractionFactor = 0.1;   // 6: distance ratio depth 8 vs 0
constexpr double kTolEtaRRow = 1e-6;         // 7: b~ row over eta_R
constexpr double kBandLo = 0.1, kBandHi = 10.0;  // 7: K3 |I'| band
constexpr double kSplitDelta = 0.5;          // 8: one eigenvalue >= 2, rest <= 1/2
constexpr double kTolReducedRel = 0.25;      // 8: dominant vs reduced root
constexpr double kMinExpansion = 2.0;        // 9: cone image growth
constexpr double kMaxKempRatio = 2.0;        // 10: clause-(i) spread, depths 5..7
constexpr double kBisectTol = 1e-12;         // 11: bracket width
constexpr double kDerivSlack = 1e-12;        // 12: endpoint slack

int failures = 0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

template <typename Fn>
void criterion(int idx, const char* name, double budget_s, Fn body) {
    auto t0 = clk::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, fmt("exception: %s", e.what())};
    }
    double dt = std::chrono::duration<double>(clk::now() - t0).count();
    bool ok = o.pass && dt <= budget_s;
    if (!ok) ++failures;
    std::printf("[%2d] %-34s %s  %s  %.2fs/%gs\n", idx, name,
                ok ? "PASS" : "FAIL", o.detail.c_str(), dt, budget_s);
    std::fflush(stdout);
}

// ---- shared slow-slope fixture: criterion 7 fills, 9 and 10 reuse ----

struct SlowMapData {
    std::vector<Jacobian> jac;  // depths 5, 6, 7, chart m = 8
};
std::optional<SlowMapData> slow_data;

Outcome c1_round_trip() {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> c(16);
        for (auto& v : c) v = u(rng);
        double n0 = Diffeo::from_coeffs(c).norms().c0_nonlinearity;
        double target = 1.25 + 0.75 * u(rng);  // in [0.5, 2]
        for (auto& v : c) v *= target / n0;
        Diffeo d = Diffeo::from_coeffs(c);
        auto rec = nonlinearity_from_derivative(
            [&](double x) { return d.derivative(x); }, 16);
        for (int i = 0; i <= 512; ++i) {
            double x = i / 512.0;
            worst = std::max(worst, std::fabs(cheb::eval(rec, x) - d.nonlinearity(x)));
        }
    }
    return {worst <= kTolRoundTrip,
            fmt("200 maps, max_err=%.2e (tol %.0e)", worst, kTolRoundTrip)};
}

Outcome c2_identities() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> ux(0.05, 0.95);
    double worst_chain = 0.0, worst_zoom = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<double> ca(8), cb(8);
        for (auto& v : ca) v = 0.06 * u(rng);
        for (auto& v : cb) v = 0.06 * u(rng);
        Diffeo a = Diffeo::from_coeffs(ca), b = Diffeo::from_coeffs(cb);
        Diffeo ab = compose(a, b);
        for (int i = 0; i < 5; ++i) {
            double x = ux(rng);
            double want = b.nonlinearity(x) + b.derivative(x) * a.nonlinearity(b(x));
            worst_chain = std::max(worst_chain, std::fabs(ab.nonlinearity(x) - want));
        }
        double l1 = 0.1 + 0.3 * ux(rng), w1 = 0.3 + 0.4 * ux(rng);
        Interval iv{l1, std::min(l1 + w1, 0.98)};
        double l2 = 0.1 + 0.3 * ux(rng), w2 = 0.2 + 0.3 * ux(rng);
        Interval jv{l2, std::min(l2 + w2, 0.95)};
        Diffeo z1 = zoom(zoom(a, iv), jv);
        Interval composite{iv.lo + (iv.hi - iv.lo) * jv.lo,
                           iv.lo + (iv.hi - iv.lo) * jv.hi};
        Diffeo z2 = zoom(a, composite);
        for (int i = 0; i <= 20; ++i) {
            double x = i / 20.0;
            worst_zoom = std::max(worst_zoom, std::fabs(z1(x) - z2(x)));
        }
    }
    double worst = std::max(worst_chain, worst_zoom);
    return {worst <= kTolIdentities,
            fmt("200+200 cases, chain=%.2e zoom=%.2e (tol %.0e)", worst_chain,
                worst_zoom, kTolIdentities)};
}

Outcome c3_return_oracle() {
    Diffeo id4 = Diffeo::identity(4);
    double worst_affine = 0.0;
    for (long k = 1; k <= 4; ++k) {
        for (Sign s : {Sign::minus, Sign::plus}) {
            SearchResult r =
                bisect_b(0.5, 0.5, id4, id4, Combinatorics{{s, k}}, 1, 1e-6);
            GapMap g(0.5, 0.5, r.b_star, id4, id4);
            ReturnMap rm = return_map(g);
            auto symbolic = [&](const std::vector<Side>& seq, double x) {
                double slope = 1.0, icept = 0.0;
                for (Side st : seq) {
                    if (st == Side::left) {
                        slope *= g.alpha();
                        icept = g.alpha() * icept + g.b();
                    } else {
                        slope *= g.beta();
                        icept = g.beta() * icept + g.b() - 1.0;
                    }
                }
                return slope * x + icept;
            };
            for (int i = 1; i < 100; ++i) {
                double xl = rm.i_prime().lo * i / 100.0;
                double xr = rm.i_prime().hi * i / 100.0;
                worst_affine =
                    std::max(worst_affine,
                             std::fabs(rm.left(xl) - symbolic(rm.left_sequence(), xl)));
                worst_affine = std::max(
                    worst_affine,
                    std::fabs(rm.right(xr) - symbolic(rm.right_sequence(), xr)));
            }
        }
    }

    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> us(0.5, 0.8);
    double worst_smooth = 0.0;
    for (int rep = 0; rep < 12; ++rep) {
        std::vector<double> cl(16, 0.0), cr(16, 0.0);
        for (int i = 0; i < 6; ++i) cl[i] = 0.03 * u(rng);
        for (int i = 0; i < 6; ++i) cr[i] = 0.03 * u(rng);
        double a = us(rng), be = us(rng);
        Diffeo pl = Diffeo::from_coeffs(cl), pr = Diffeo::from_coeffs(cr);
        Sign s = rep % 2 ? Sign::plus : Sign::minus;
        long k = 1 + rep % 3;
        SearchResult r = bisect_b(a, be, pl, pr, Combinatorics{{s, k}}, 1, 1e-6);
        GapMap g(a, be, r.b_star, pl, pr);
        ReturnMap rm = return_map(g);
        if (rm.k() != k || rm.sigma() != s)
            return {false, fmt("smooth case %d realized the wrong class", rep)};
        auto nl = rm.left_sequence().size();
        auto nr = rm.right_sequence().size();
        for (int i = 1; i < 100; ++i) {
            double xl = rm.i_prime().lo * i / 100.0;
            double xr = rm.i_prime().hi * i / 100.0;
            double yl = xl, yr = xr;
            for (std::size_t j = 0; j < nl; ++j) yl = g.eval(yl);
            for (std::size_t j = 0; j < nr; ++j) yr = g.eval(yr);
            worst_smooth = std::max(worst_smooth, std::fabs(rm.left(xl) - yl));
            worst_smooth = std::max(worst_smooth, std::fabs(rm.right(xr) - yr));
        }
        // the rescaled return branch is the renormalized map (minus picture)
        GapMap w = s == Sign::minus ? g : g.mirrored();
        ReturnMap rw = return_map(w);
        RenormStep st = renormalize(w);
        double len = st.i_prime.length();
        for (int i = 1; i < 100; ++i) {
            double x = (st.renormalized.b() - 1.0) * i / 100.0;
            double y = st.renormalized.b() * i / 100.0;
            worst_smooth = std::max(worst_smooth, std::fabs(rw.left(len * x) / len -
                                                            st.renormalized.eval(x)));
            worst_smooth = std::max(worst_smooth, std::fabs(rw.right(len * y) / len -
                                                            st.renormalized.eval(y)));
        }
    }
    bool pass = worst_affine <= kTolAffineOracle && worst_smooth <= kTolSmoothOracle;
    return {pass, fmt("8 affine max=%.2e (tol %.0e), 12 smooth max=%.2e (tol %.0e)",
                      worst_affine, kTolAffineOracle, worst_smooth, kTolSmoothOracle)};
}

Outcome c4_worked_example() {
    GapMap f(0.5, 0.5, 0.3, Diffeo::identity(4), Diffeo::identity(4));
    RenormStep s = renormalize(f);
    double nonlin = affine_distance(s.renormalized);
    bool pass = s.k == 1 && s.sigma == Sign::minus &&
                std::fabs(s.i_prime.lo + 0.05) <= kTolExampleParams &&
                std::fabs(s.i_prime.hi - 0.025) <= kTolExampleParams &&
                std::fabs(s.renormalized.b() - 1.0 / 3.0) <= kTolExampleParams &&
                std::fabs(s.renormalized.alpha() - 0.125) <= kTolExampleParams &&
                std::fabs(s.renormalized.beta() - 0.25) <= kTolExampleParams &&
                nonlin <= kTolExampleNonlin;
    return {pass, fmt("k=%ld sigma=%c b~=%.12f a~=%.12f c~=%.12f nonlin=%.1e", s.k,
                      s.sigma == Sign::minus ? '-' : '+', s.renormalized.b(),
                      s.renormalized.alpha(), s.renormalized.beta(), nonlin)};
}

Outcome c5_commuting_square() {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> us(0.55, 0.7);
    double worst = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
        auto rand_dec = [&](int n) {
            std::vector<DecompositionItem> items;
            for (int i = 0; i < n; ++i) {
                std::vector<double> c(10, 0.0);
                for (int j = 0; j < 5; ++j) c[j] = 0.08 * u(rng);
                items.push_back({{i, 0}, Diffeo::from_coeffs(c)});
            }
            return Decomposition(items);
        };
        Decomposition dl = rand_dec(1 + rep % 3), dr = rand_dec(1 + (rep + 1) % 3);
        Diffeo lhat = compose_decomposition(dl), rhat = compose_decomposition(dr);
        double a = us(rng), be = us(rng);
        SearchResult r =
            bisect_b(a, be, lhat, rhat, Combinatorics{{Sign::minus, 1}}, 1, 1e-6);
        DecomposedGapMap dm{a, be, r.b_star, dl, dr};
        GapMap direct = renormalize(project(dm)).renormalized;
        GapMap via = project(renormalize_decomposed(dm));
        for (int i = 0; i <= 200; ++i) {
            double t = i / 200.0;
            double xl = (direct.b() - 1.0) * (1.0 - t);
            double xr = direct.b() * t;
            worst = std::max(worst, std::fabs(direct.branch_value(Side::left, xl) -
                                              via.branch_value(Side::left, xl)));
            worst = std::max(worst, std::fabs(direct.branch_value(Side::right, xr) -
                                              via.branch_value(Side::right, xr)));
        }
    }
    return {worst <= kTolSquare,
            fmt("10 maps, max_err=%.2e (tol %.0e)", worst, kTolSquare)};
}

Outcome c6_contraction() {
    std::vector<double> ceta(16, 0.0);
    ceta[6] = 1.0 / 240.0;  // C1 nonlinearity norm 0.3
    Diffeo phi = Diffeo::from_coeffs(ceta);
    double c1norm = phi.norms().c1_nonlinearity;
    Combinatorics target(9, {Sign::minus, 1});
    SearchResult r = bisect_b(0.9975, 0.9975, phi, phi, target, 8, 1e-13);
    GapMap f(0.9975, 0.9975, r.b_star, phi, phi);
    Trajectory t = renormalize_n(f, 8);
    if (t.achieved_depth() < 8)
        return {false, fmt("only depth %zu of 8 reached", t.achieved_depth())};
    std::vector<double> dist{affine_distance(f)};
    for (const auto& s : t.steps) dist.push_back(affine_distance(s.renormalized));
    bool monotone = true;
    for (std::size_t i = 4; i < dist.size(); ++i)
        monotone = monotone && dist[i] <= dist[i - 1] + 1e-15;
    double ratio = dist[8] / dist[0];
    bool pass = std::fabs(c1norm - 0.3) <= 1e-12 && monotone &&
                ratio <= kContractionFactor;
    return {pass, fmt("|eta|=%.3f d0=%.3f d8=%.1e ratio=%.1e (<=%.1f) monotone=%d",
                      c1norm, dist[0], dist[8], ratio, kContractionFactor,
                      monotone)};
}

Outcome c7_block_structure() {
    Diffeo id8 = Diffeo::identity(8);
    Combinatorics target(10, {Sign::minus, 1});
    SearchResult r = bisect_b(0.99999, 0.99999, id8, id8, target, 9, 1e-12);
    GapMap f(0.99999, 0.99999, r.b_star, id8, id8);
    Trajectory t = renormalize_n(f, 9);
    if (t.achieved_depth() < 7)
        return {false, fmt("only depth %zu of 9 reached", t.achieved_depth())};

    SlowMapData data;
    for (std::size_t d : {5, 6, 7})
        data.jac.push_back(jacobian(t.steps[d - 1].renormalized, 8, 1e-6));

    double eps5 = block_report(data.jac[0]).eps_max;
    double eps7 = block_report(data.jac[2]).eps_max;
    bool pass = eps7 < eps5;
    double worst_row = 0.0, k3ip_lo = 1e300, k3ip_hi = 0.0, k3_min = 1e300;
    for (std::size_t i = 1; i <= 2; ++i) {  // depths 6 and 7
        const Jacobian& j = data.jac[i];
        BlockReport br = block_report(j);
        worst_row = std::max(
            worst_row, j.matrix.row(2).segment(11, 8).cwiseAbs().maxCoeff());
        k3_min = std::min(k3_min, br.K3);
        k3ip_lo = std::min(k3ip_lo, br.K3 * j.i_prime_len);
        k3ip_hi = std::max(k3ip_hi, br.K3 * j.i_prime_len);
    }
    pass = pass && worst_row <= kTolEtaRRow && k3_min > 0.0 &&
           k3ip_lo >= kBandLo && k3ip_hi <= kBandHi;
    slow_data = std::move(data);
    return {pass,
            fmt("etaR_row=%.1e (<=%.0e) K3>0 K3|I'| in [%.2f,%.2f] eps 7<5: %.3f<%.3f",
                worst_row, kTolEtaRRow, k3ip_lo, k3ip_hi, eps7, eps5)};
}

Outcome c8_splitting() {
    std::vector<double> c(8, 0.0);
    c[2] = 0.01;
    Diffeo phi = Diffeo::from_coeffs(c);
    Combinatorics target(9, {Sign::minus, 1});
    SearchResult r = bisect_b(0.9975, 0.9975, phi, phi, target, 8, 1e-13);
    GapMap f(0.9975, 0.9975, r.b_star, phi, phi);
    Trajectory t = renormalize_n(f, 8);
    if (t.achieved_depth() < 7)
        return {false, fmt("only depth %zu of 8 reached", t.achieved_depth())};
    Jacobian j = jacobian(t.steps[6].renormalized, 8, 1e-6);
    SplittingVerdict v = splitting_verdict(j, kSplitDelta);
    BlockReport br = block_report(j);
    ReducedRoots roots = reduced_model_roots(br.K3, br.K4, br.M1);
    double rel = std::fabs(v.lambda_max - roots.plus) / roots.plus;
    bool pass = v.pass && v.unstable_count == 1 && rel <= kTolReducedRel;
    return {pass, fmt("l1=%.4g l2=%.4g (delta %.1f) reduced=%.4g rel=%.3f (<=%.2f)",
                      v.lambda_max, v.lambda_second, kSplitDelta, roots.plus, rel,
                      kTolReducedRel)};
}

Outcome c9_cone_invariance() {
    if (!slow_data) return {false, "prerequisite jacobians missing (criterion 7)"};
    const Jacobian& j6 = slow_data->jac[1];
    ConeReport rep = cone_invariance_test(j6, {0.4, 0.25}, 1000, 20240817);
    bool pass = rep.contained_fraction == 1.0 && rep.min_expansion >= kMinExpansion;
    return {pass, fmt("contained=%.4f min_exp=%.3f (>=%.0f) max_exp=%.3f",
                      rep.contained_fraction, rep.min_expansion, kMinExpansion,
                      rep.max_expansion)};
}

Outcome c10_escape_stability() {
    if (!slow_data) return {false, "prerequisite jacobians missing (criterion 7)"};
    double lo = 1e300, hi = 0.0;
    for (const Jacobian& j : slow_data->jac) {
        TechnicalLemmaReport tl = technical_lemma_check(j, {0.4, 0.25}, 1000, 7);
        if (tl.inconclusive) return {false, "no escapes sampled"};
        lo = std::min(lo, tl.clause_i_max);
        hi = std::max(hi, tl.clause_i_max);
    }
    double ratio = hi / lo;
    return {ratio < kMaxKempRatio,
            fmt("clause-(i) range [%.4f, %.4f], spread %.3fx (< %.0fx)", lo, hi,
                ratio, kMaxKempRatio)};
}

Outcome c11_deep_bracket() {
    Diffeo id4 = Diffeo::identity(4);
    Combinatorics target(8, {Sign::minus, 1});
    SearchResult r = bisect_b(0.999, 0.999, id4, id4, target, 8, kBisectTol);
    if (r.achieved_depth != 8)
        return {false, fmt("achieved depth %zu of 8", r.achieved_depth)};
    int lo_side = classify_direction(GapMap(0.999, 0.999, r.bracket_lo, id4, id4),
                                     target, 8);
    int hi_side = classify_direction(GapMap(0.999, 0.999, r.bracket_hi, id4, id4),
                                     target, 8);
    Trajectory t = renormalize_n(GapMap(0.999, 0.999, r.b_star, id4, id4), 8);
    bool realizes = t.achieved_depth() == 8;
    for (const auto& e : t.gamma)
        realizes = realizes && e.k == 1 && e.sigma == Sign::minus;
    bool pass = r.bracket_width <= kBisectTol && lo_side != hi_side &&
                (lo_side < 0 || hi_side < 0) && realizes;
    return {pass, fmt("b*=%.15f width=%.1e (<=%.0e) sides(%d,%d) realizes=%d",
                      r.b_star, r.bracket_width, kBisectTol, lo_side, hi_side,
                      realizes)};
}

Outcome c12_derivative_bounds() {
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int violations = 0;
    double sup2_max = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> c(8);
        for (auto& v : c) v = 0.008 * u(rng);
        Diffeo d = Diffeo::from_coeffs(c);
        double sup2 = 0.0;
        for (int i = 0; i <= 200; ++i)
            sup2 = std::max(sup2, std::fabs(d.second_derivative(i / 200.0)));
        sup2_max = std::max(sup2_max, sup2);
        if (sup2 >= 0.05) return {false, fmt("case %d not near-identity", rep)};
        std::vector<double> dir(8, 0.0);
        dir[0] = 1.0;
        for (int i = 0; i <= 100; ++i) {
            double x = i / 100.0;
            double ed = std::fabs(evaluation_derivative(d, x, dir));
            double mn = std::min(d(x), 1.0 - d(x));
            if (!(mn / 8.0 <= ed + kDerivSlack && ed <= 2.0 * mn + kDerivSlack))
                ++violations;
        }
    }
    return {violations == 0,
            fmt("50 maps x 101 points, %d violations, sup|D2phi|<=%.3f", violations,
                sup2_max)};
}

}  // namespace

int main() {
    std::printf("acceptance: tolerances and budgets pinned in source\n");
    criterion(1, "nonlinearity round trip", 2, c1_round_trip);
    criterion(2, "chain rule and zoom identities", 2, c2_identities);
    criterion(3, "return-map oracle equivalence", 5, c3_return_oracle);
    criterion(4, "solvable affine example", 0.1, c4_worked_example);
    criterion(5, "decomposition commuting square", 5, c5_commuting_square);
    criterion(6, "contraction toward affine maps", 60, c6_contraction);
    criterion(7, "derivative block structure", 120, c7_block_structure);
    criterion(8, "spectral splitting", 30, c8_splitting);
    criterion(9, "cone field invariance", 5, c9_cone_invariance);
    criterion(10, "escape statistics stability", 10, c10_escape_stability);
    criterion(11, "deep bisection bracket", 30, c11_deep_bracket);
    criterion(12, "perturbation derivative bounds", 2, c12_derivative_bounds);
    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures;
}
