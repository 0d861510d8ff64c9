#pragma once

#include <compare>
#include <cstddef>
#include <vector>

#include "gaprenorm/diffeo.hpp"
#include "gaprenorm/gapmap.hpp"
#include "gaprenorm/renorm.hpp"
#include "gaprenorm/types.hpp"

namespace gaprenorm {

// Ordered token labelling one piece of a decomposition.  Tokens compare
// lexicographically; pieces appended by a later renormalization step always
// sort after everything already present.
struct TimesetLabel {
    long generation = 0;
    long index = 0;

    friend auto operator<=>(const TimesetLabel&, const TimesetLabel&) = default;
};

struct DecompositionItem {
    TimesetLabel label;
    Diffeo diffeo;
};

// Finite sequence of labelled diffeomorphisms with strictly increasing
// labels.  The represented map is the composition of the items, earliest
// label innermost.
class Decomposition {
public:
    Decomposition() = default;
    explicit Decomposition(std::vector<DecompositionItem> items);

    // Single unlabelled piece at (0, 0).
    static Decomposition singleton(Diffeo d);

    const std::vector<DecompositionItem>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }

    // Concatenation; every appended label must exceed the current maximum.
    void append(TimesetLabel label, Diffeo d);

private:
    std::vector<DecompositionItem> items_;
};

// Composition of the items, earliest label innermost; empty gives the
// identity.  Propagates composition accuracy errors.
Diffeo compose_decomposition(const Decomposition& d);

// Sum of per-item C1 nonlinearity norms; zero iff every item is affine.
double decomposition_norm(const Decomposition& d);

// Gap-map coordinates with the branch diffeomorphisms kept in decomposed
// form.  Projecting through compose_decomposition recovers a plain GapMap.
struct DecomposedGapMap {
    double alpha = 0.5;
    double beta = 0.5;
    double b = 0.5;
    Decomposition dec_l;
    Decomposition dec_r;
};

GapMap project(const DecomposedGapMap& df);

// Renormalization acting on decomposed maps: each return-branch application
// step contributes the zoom of that branch's decomposition along its source
// interval, relabelled by (step, position).  The slopes and b of the output
// are taken from renormalize of the projection, so projecting the result
// commutes with renormalizing the projection.
DecomposedGapMap renormalize_decomposed(const DecomposedGapMap& df,
                                        double fit_tol = 1e-8);

}  // namespace gaprenorm
