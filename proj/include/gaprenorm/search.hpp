#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "gaprenorm/diffeo.hpp"
#include "gaprenorm/gapmap.hpp"
#include "gaprenorm/renorm.hpp"
#include "gaprenorm/types.hpp"

namespace gaprenorm {

// Frequency of right-branch visits along the orbit of b, averaged over the
// last half of the orbit.  Throws DomainError if the orbit comes within
// 1e-14 of the discontinuity.
double rotation_number(const GapMap& f, std::size_t iterations = 100'000);

// Position of b relative to the parameter window realizing the target
// prefix: -1 below, 0 inside, +1 above.  Levels are compared in order; a
// gap iterate blocking level i is classified by the step at which it
// covers 0.
int classify_direction(const GapMap& f, const Combinatorics& target,
                       std::size_t depth);

struct SearchResult {
    double b_star = 0;
    std::size_t achieved_depth = 0;
    Combinatorics gamma;
    double bracket_lo = 0;
    double bracket_hi = 0;
    double bracket_width = 0;
};

// Monotone bisection in b for the target combinatorics prefix.  On success
// the returned bracket has width <= tol, its endpoints disagree on the
// depth predicate, and b_star (the midpoint) realizes the prefix.  If the
// requested depth has no parameter window in (0,1) the deepest achievable
// prefix is bisected instead and reported through achieved_depth; with no
// window at depth 1 the search throws UnrealizableCombinatoricsError.
SearchResult bisect_b(double alpha, double beta, const Diffeo& phi_l,
                      const Diffeo& phi_r, const Combinatorics& target,
                      std::size_t depth, double tol);

struct LevelSlope {
    double d_lo = 0;
    double d_hi = 0;
};

struct TransversalityReport {
    std::vector<LevelSlope> levels;  // one per renormalization level
    double h_used = 0;
    bool all_positive = false;
};

// Central differences in b of the return-interval endpoints at levels
// 1..depth, expressed in the original coordinates.  The step is halved up
// to four times if the perturbed maps change combinatorics.
TransversalityReport transversality_check(const GapMap& f, std::size_t depth,
                                          double h = 1e-6);

// Round trip for the textual combinatorics format "(-,1)(+,2)".
std::string combinatorics_to_string(const Combinatorics& c);
Combinatorics combinatorics_from_string(const std::string& s);

}  // namespace gaprenorm
