#include "gaprenorm/decomp.hpp"

#include <string>
#include <utility>

#include "gaprenorm/errors.hpp"

namespace gaprenorm {

namespace {

// Source interval of an application step in the unit coordinates of the
// branch being applied.
Interval to_branch_unit(const GapMap& f, Side s, Interval u) {
    if (s == Side::left) {
        const double w = 1.0 - f.b();
        return {(u.lo - (f.b() - 1.0)) / w, (u.hi - (f.b() - 1.0)) / w};
    }
    return {u.lo / f.b(), u.hi / f.b()};
}

}  // namespace

Decomposition::Decomposition(std::vector<DecompositionItem> items)
    : items_(std::move(items)) {
    for (std::size_t i = 1; i < items_.size(); ++i)
        if (!(items_[i - 1].label < items_[i].label))
            throw DomainError("decomposition labels must strictly increase");
}

Decomposition Decomposition::singleton(Diffeo d) {
    Decomposition out;
    out.items_.push_back({TimesetLabel{0, 0}, std::move(d)});
    return out;
}

void Decomposition::append(TimesetLabel label, Diffeo d) {
    if (!items_.empty() && !(items_.back().label < label))
        throw DomainError("appended label must exceed the current maximum");
    items_.push_back({label, std::move(d)});
}

Diffeo compose_decomposition(const Decomposition& d) {
    if (d.empty()) return Diffeo::identity();
    Diffeo out = d.items().front().diffeo;
    for (std::size_t i = 1; i < d.size(); ++i)
        out = compose(d.items()[i].diffeo, out);
    return out;
}

double decomposition_norm(const Decomposition& d) {
    double sum = 0.0;
    for (const auto& item : d.items()) sum += item.diffeo.norms().c1_nonlinearity;
    return sum;
}

GapMap project(const DecomposedGapMap& df) {
    return GapMap(df.alpha, df.beta, df.b, compose_decomposition(df.dec_l),
                  compose_decomposition(df.dec_r));
}

DecomposedGapMap renormalize_decomposed(const DecomposedGapMap& df,
                                        double fit_tol) {
    const GapMap f = project(df);
    const RenormStep step = renormalize(f, fit_tol);
    const ReturnMap rm = return_map(f);

    const auto zoom_chain = [&](Side return_branch) {
        const auto& seq = return_branch == Side::left ? rm.left_sequence()
                                                      : rm.right_sequence();
        const auto sources = rm.source_intervals(return_branch);
        Decomposition out;
        for (std::size_t i = 0; i < seq.size(); ++i) {
            const auto& dec =
                seq[i] == Side::left ? df.dec_l.items() : df.dec_r.items();
            Interval j = to_branch_unit(f, seq[i], sources[i]);
            for (std::size_t p = 0; p < dec.size(); ++p) {
                out.append({static_cast<long>(i), static_cast<long>(p)},
                           zoom(dec[p].diffeo, j));
                j = {dec[p].diffeo(j.lo), dec[p].diffeo(j.hi)};
            }
        }
        return out;
    };

    DecomposedGapMap out;
    out.alpha = step.renormalized.alpha();
    out.beta = step.renormalized.beta();
    out.b = step.renormalized.b();
    out.dec_l = zoom_chain(Side::left);
    out.dec_r = zoom_chain(Side::right);
    return out;
}

}  // namespace gaprenorm
