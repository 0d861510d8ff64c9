#include "gaprenorm/search.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include "gaprenorm/errors.hpp"

namespace gaprenorm {

namespace {

// Direction of b relative to the window where the gap stays on the minus
// side for exactly k steps.  Mirrors the margin conventions of find_k.
int classify_entry(const GapMap& f, const CombinatoricsEntry& e) {
    if (e.k < 1) throw DomainError("combinatorics entries need k >= 1");
    if (e.sigma == Sign::plus)
        return -classify_entry(f.mirrored(), {Sign::minus, e.k});

    const Interval g = f.gap();
    const double margin = 1e-12 * g.length();
    double lo = g.lo, hi = g.hi;
    for (long i = 0; i <= e.k; ++i) {
        if (i >= kGapIterationCap)
            throw CapError(
                "classify_direction: gap iteration cap reached before the "
                "target step");
        if (lo <= margin && hi >= -margin)
            return i < e.k ? +1 : -1;  // covering 0 early means b too big
        if (lo > 0.0) return i < e.k ? +1 : 0;  // flip step vs target step
        if (i == e.k) return -1;                // still on the minus side
        lo = f.eval(lo);
        hi = f.eval(hi);
    }
    return -1;  // unreachable
}

}  // namespace

int classify_direction(const GapMap& f, const Combinatorics& target,
                       std::size_t depth) {
    if (depth == 0) throw DomainError("classification depth must be >= 1");
    if (target.size() < depth)
        throw DomainError("target combinatorics shorter than the depth");
    GapMap cur = f;
    for (std::size_t level = 0; level < depth; ++level) {
        const int d = classify_entry(cur, target[level]);
        if (d != 0) return d;
        if (level + 1 < depth) cur = renormalize(cur).renormalized;
    }
    return 0;
}

double rotation_number(const GapMap& f, std::size_t iterations) {
    if (iterations < 1000)
        throw DomainError("rotation estimate needs at least 1000 iterations");
    const std::size_t tail = iterations / 2;
    double x = f.b();
    std::size_t hits = 0;
    for (std::size_t i = 1; i <= iterations; ++i) {
        if (std::fabs(x) < 1e-14)
            throw DomainError("rotation orbit hits the discontinuity");
        x = f.eval(x);
        if (i > iterations - tail && x > 0.0) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(tail);
}

namespace {

struct ScanBracket {
    double lo = 0;
    double hi = 0;
};

// Coarse sweep of (0,1); requires a -1 point below the first >= 0 point.
std::optional<ScanBracket> coarse_bracket(
    const std::function<int(double)>& dir) {
    constexpr int kScan = 64;
    std::optional<double> last_low;
    for (int i = 0; i < kScan; ++i) {
        const double b = (i + 0.5) / kScan;
        const int d = dir(b);
        if (d < 0)
            last_low = b;
        else if (last_low)
            return ScanBracket{*last_low, b};
        else
            return std::nullopt;  // window starts below the scan range
    }
    return std::nullopt;
}

}  // namespace

SearchResult bisect_b(double alpha, double beta, const Diffeo& phi_l,
                      const Diffeo& phi_r, const Combinatorics& target,
                      std::size_t depth, double tol) {
    if (depth < 1) throw DomainError("search depth must be >= 1");
    if (target.size() < depth)
        throw DomainError("target combinatorics shorter than the depth");
    if (tol < 1e-14) throw DomainError("bracket tolerance below 1e-14");

    const auto make = [&](double b) {
        return GapMap(alpha, beta, b, phi_l, phi_r);
    };

    // deepest level whose window the coarse scan straddles
    std::size_t level = depth;
    std::optional<ScanBracket> scan;
    for (; level >= 1; --level) {
        scan = coarse_bracket(
            [&](double b) { return classify_direction(make(b), target, level); });
        if (scan) break;
    }
    if (!scan)
        throw UnrealizableCombinatoricsError(
            "bisect_b: no parameter window for the first combinatorics entry "
            "in (0,1)");

    const auto dir = [&](double b) {
        return classify_direction(make(b), target, level);
    };

    double lo = scan->lo, hi = scan->hi;
    while (hi - lo > tol / 8.0) {
        const double mid = 0.5 * (lo + hi);
        (dir(mid) >= 0 ? hi : lo) = mid;
    }

    // Shift a width-tol bracket so its midpoint sits inside the window,
    // clear of the boundary band around the bisection edge.
    for (int attempt = 0; attempt < 8; ++attempt) {
        const double left = lo - tol / 4.0 + attempt * (tol / 8.0);
        double right = left + tol;
        while (right - left > tol) right = std::nextafter(right, left);
        const double mid = 0.5 * (left + right);
        if (left <= 0.0 || right >= 1.0) continue;
        if (dir(left) >= 0 || dir(right) < 0 || dir(mid) != 0) continue;
        Trajectory t = renormalize_n(make(mid), level);
        if (t.achieved_depth() != level) continue;
        bool match = true;
        for (std::size_t i = 0; i < level; ++i)
            match = match && t.gamma[i].k == target[i].k &&
                    t.gamma[i].sigma == target[i].sigma;
        if (!match) continue;
        SearchResult out;
        out.b_star = mid;
        out.achieved_depth = level;
        out.gamma = std::move(t.gamma);
        out.bracket_lo = left;
        out.bracket_hi = right;
        out.bracket_width = right - left;
        return out;
    }
    throw NumericError(
        "bisect_b: could not certify a bracket around the window edge; the "
        "window may be narrower than the tolerance");
}

TransversalityReport transversality_check(const GapMap& f, std::size_t depth,
                                          double h) {
    if (depth < 1) throw DomainError("transversality depth must be >= 1");
    if (h <= 0.0) throw DomainError("finite-difference step must be positive");

    const Trajectory base = renormalize_n(f, depth);
    if (base.achieved_depth() != depth)
        throw DomainError(
            "transversality_check: the map is not renormalizable to the "
            "requested depth");

    const auto trajectory_at = [&](double b) {
        return renormalize_n(
            GapMap(f.alpha(), f.beta(), b, f.phi_left(), f.phi_right()), depth);
    };
    const auto matches = [&](const Trajectory& t) {
        if (t.achieved_depth() != depth) return false;
        for (std::size_t i = 0; i < depth; ++i)
            if (t.gamma[i].k != base.gamma[i].k ||
                t.gamma[i].sigma != base.gamma[i].sigma)
                return false;
        return true;
    };

    double hh = h;
    for (int attempt = 0; attempt <= 4; ++attempt, hh *= 0.5) {
        const Trajectory tp = trajectory_at(f.b() + hh);
        const Trajectory tm = trajectory_at(f.b() - hh);
        if (!matches(tp) || !matches(tm)) continue;

        TransversalityReport rep;
        rep.h_used = hh;
        rep.all_positive = true;
        double sp = 1.0, sm = 1.0;  // cumulated rescaling factors
        for (std::size_t i = 0; i < depth; ++i) {
            const Interval ip = tp.steps[i].i_prime;
            const Interval im = tm.steps[i].i_prime;
            LevelSlope slope;
            slope.d_lo = (sp * ip.lo - sm * im.lo) / (2.0 * hh);
            slope.d_hi = (sp * ip.hi - sm * im.hi) / (2.0 * hh);
            rep.all_positive =
                rep.all_positive && slope.d_lo > 0.0 && slope.d_hi > 0.0;
            rep.levels.push_back(slope);
            sp *= ip.length();
            sm *= im.length();
        }
        return rep;
    }
    throw StepTooLargeError(
        "transversality_check: combinatorics break under the b perturbation "
        "even after step halving");
}

std::string combinatorics_to_string(const Combinatorics& c) {
    std::string out;
    for (const auto& e : c) {
        out += '(';
        out += e.sigma == Sign::minus ? '-' : '+';
        out += ',';
        out += std::to_string(e.k);
        out += ')';
    }
    return out;
}

Combinatorics combinatorics_from_string(const std::string& s) {
    Combinatorics out;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '(')
            throw DomainError("combinatorics string: expected '(' at position " +
                              std::to_string(i));
        ++i;
        if (i >= s.size() || (s[i] != '-' && s[i] != '+'))
            throw DomainError(
                "combinatorics string: expected '-' or '+' at position " +
                std::to_string(i));
        const Sign sigma = s[i] == '-' ? Sign::minus : Sign::plus;
        ++i;
        if (i >= s.size() || s[i] != ',')
            throw DomainError("combinatorics string: expected ',' at position " +
                              std::to_string(i));
        ++i;
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            ++i;
        if (i == start)
            throw DomainError("combinatorics string: expected digits at position " +
                              std::to_string(start));
        const long k = std::stol(s.substr(start, i - start));
        if (k < 1)
            throw DomainError("combinatorics string: k must be >= 1 at position " +
                              std::to_string(start));
        if (i >= s.size() || s[i] != ')')
            throw DomainError("combinatorics string: expected ')' at position " +
                              std::to_string(i));
        ++i;
        out.push_back({sigma, k});
    }
    if (out.empty())
        throw DomainError("combinatorics string: no entries found");
    return out;
}

}  // namespace gaprenorm
