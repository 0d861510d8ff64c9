#include <cmath>
#include <vector>

#include "doctest.h"
#include "gaprenorm/decomp.hpp"
#include "gaprenorm/diffeo.hpp"
#include "gaprenorm/errors.hpp"
#include "gaprenorm/gapmap.hpp"
#include "gaprenorm/renorm.hpp"

using namespace gaprenorm;

TEST_CASE("empty decompositions project to the affine map") {
    DecomposedGapMap aff{0.5, 0.5, 0.3, {}, {}};
    GapMap p = project(aff);
    CHECK(std::fabs(p.eval(-0.7) - (-0.05)) < 1e-15);

    DecomposedGapMap r = renormalize_decomposed(aff);
    CHECK(r.b == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.alpha == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(r.beta == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(r.dec_l.empty());
    CHECK(r.dec_r.empty());
}

TEST_CASE("one step turns singletons into k+2 and k+1 pieces") {
    DecomposedGapMap f{0.5, 0.5, 0.3, Decomposition::singleton(Diffeo::identity(8)),
                       Decomposition::singleton(Diffeo::identity(8))};
    DecomposedGapMap r = renormalize_decomposed(f);
    CHECK(r.dec_l.size() == 3);
    CHECK(r.dec_r.size() == 2);
    for (const auto& it : r.dec_l.items())
        for (int i = 0; i <= 20; ++i) {
            double x = i / 20.0;
            CHECK(std::fabs(it.diffeo(x) - x) < 1e-12);
        }
}

TEST_CASE("composition applies items earliest label innermost") {
    Diffeo c1 = Diffeo::from_coeffs({0.4});
    Diffeo c2 = Diffeo::from_coeffs({-0.25});
    Decomposition two(std::vector<DecompositionItem>{{{0, 0}, c1}, {{1, 0}, c2}});
    Diffeo composed = compose_decomposition(two);
    Diffeo oracle = compose(c2, c1);
    for (int i = 0; i <= 50; ++i) {
        double x = i / 50.0;
        CHECK(std::fabs(composed(x) - oracle(x)) < 1e-12);
    }

    // swapping the items changes the map
    Decomposition rev(std::vector<DecompositionItem>{{{0, 0}, c2}, {{1, 0}, c1}});
    Diffeo swapped = compose_decomposition(rev);
    double sep = 0.0;
    for (int i = 0; i <= 50; ++i) {
        double x = i / 50.0;
        sep = std::max(sep, std::fabs(composed(x) - swapped(x)));
    }
    CHECK(sep > 1e-4);
}

TEST_CASE("labels must strictly increase") {
    Decomposition d = Decomposition::singleton(Diffeo::identity(4));
    CHECK_THROWS_AS(d.append({0, 0}, Diffeo::identity(4)), DomainError);
    d.append({0, 1}, Diffeo::identity(4));
    CHECK(d.size() == 2);
}

TEST_CASE("the norm adds per-item nonlinearity norms") {
    Decomposition two(std::vector<DecompositionItem>{
        {{0, 0}, Diffeo::from_coeffs({0.4})}, {{1, 0}, Diffeo::from_coeffs({-0.25})}});
    CHECK(decomposition_norm(two) == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(decomposition_norm(Decomposition::singleton(Diffeo::identity(8))) < 1e-12);
}

TEST_CASE("renormalization commutes with projection") {
    std::vector<double> cl(10, 0.0), cr(10, 0.0);
    cl[1] = 0.30;
    cl[3] = -0.10;
    cr[2] = 0.22;
    cr[4] = 0.08;
    DecomposedGapMap sm{0.62, 0.58, 0.34,
                        Decomposition::singleton(Diffeo::from_coeffs(cl)),
                        Decomposition::singleton(Diffeo::from_coeffs(cr))};
    GapMap direct = renormalize(project(sm)).renormalized;
    DecomposedGapMap rsm = renormalize_decomposed(sm);
    GapMap via_dec = project(rsm);
    for (int i = 0; i <= 200; ++i) {
        double t = i / 200.0;
        double xl = (direct.b() - 1.0) * (1.0 - t);
        double xr = direct.b() * t;
        CHECK(std::fabs(direct.branch_value(Side::left, xl) -
                        via_dec.branch_value(Side::left, xl)) < 1e-8);
        CHECK(std::fabs(direct.branch_value(Side::right, xr) -
                        via_dec.branch_value(Side::right, xr)) < 1e-8);
    }

    // the composed output pieces are the renormalized branch diffeo
    Diffeo lhat = compose_decomposition(rsm.dec_l);
    for (int i = 0; i <= 200; ++i) {
        double u = i / 200.0;
        CHECK(std::fabs(lhat(u) - direct.phi_left()(u)) < 1e-8);
    }
}

TEST_CASE("a second step multiplies counts by the return sequence") {
    DecomposedGapMap d2{0.5, 0.5, 0.29025,
                        Decomposition::singleton(Diffeo::identity(8)),
                        Decomposition::singleton(Diffeo::identity(8))};
    DecomposedGapMap r1 = renormalize_decomposed(d2);
    DecomposedGapMap r2 = renormalize_decomposed(r1);
    GapMap p1 = project(r1);
    ReturnMap rm2 = return_map(p1);
    std::size_t want_l = 0, want_r = 0;
    for (Side s : rm2.left_sequence())
        want_l += s == Side::left ? r1.dec_l.size() : r1.dec_r.size();
    for (Side s : rm2.right_sequence())
        want_r += s == Side::left ? r1.dec_l.size() : r1.dec_r.size();
    CHECK(r2.dec_l.size() == want_l);
    CHECK(r2.dec_r.size() == want_r);
}
