#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "gaprenorm/gapmap.hpp"
#include "gaprenorm/renorm.hpp"
#include "gaprenorm/types.hpp"

namespace gaprenorm {

// Coordinate chart (alpha, beta, b, eta_L coeffs, eta_R coeffs) in
// R^{3+2m}.  Nonlinearity blocks shorter than m are zero padded; blocks
// longer than m are rejected.
Eigen::VectorXd coords_of(const GapMap& f, std::size_t m);
GapMap map_of_coords(const Eigen::VectorXd& x, std::size_t m);

// Vector size on tangent vectors: |da| + |db_slope| + |db| plus the
// Euclidean norms of the two nonlinearity blocks.
double tangent_norm(const Eigen::VectorXd& v, std::size_t m);

struct Jacobian {
    Eigen::MatrixXd matrix;  // (3+2m) x (3+2m), column j = d(coords)/d(coord j)
    std::size_t m;
    GapMap base_point;
    double i_prime_len;  // return interval length at the base point
    double fd_step;      // requested relative step
    long k;
    Sign sigma;
};

// Central differences of one renormalization step in the chart.  Every
// perturbed map must renormalize with the base combinatorics (k, sigma);
// a column that breaks them has its step halved up to four times before
// StepTooLargeError.
Jacobian jacobian(const GapMap& f, std::size_t m, double h = 1e-6);

struct BlockReport {
    double K1 = 0;  // d b~ / d alpha
    double K2 = 0;  // d b~ / d beta
    double K3 = 0;  // d b~ / d b
    double K4 = 0;  // row b~ over the eta_L block, Euclidean
    double M1 = 0;  // eta_L rows of the b column, Euclidean
    double M2 = 0;  // eta_R rows of the b column, Euclidean
    double eps_max = 0;  // largest entry over the two slope rows and the
                         // nonlinearity-to-nonlinearity block
};

BlockReport block_report(const Jacobian& j);

// Eigenvalue magnitudes, descending.
std::vector<double> spectrum(const Jacobian& j);

struct SplittingVerdict {
    bool pass = false;
    std::size_t unstable_count = 0;
    double lambda_max = 0;
    double lambda_second = 0;
};

// Passes iff exactly one eigenvalue has magnitude >= 1/delta and every
// other magnitude is <= delta.
SplittingVerdict splitting_verdict(const Jacobian& j, double delta);

struct ReducedRoots {
    double plus = 0;
    double minus = 0;
    double imag = 0;  // nonzero only in the complex case
    bool is_complex = false;
};

// Roots of x^2 - K3 x - K4 M1; complex pairs are flagged and reported by
// real and imaginary parts.
ReducedRoots reduced_model_roots(double k3, double k4, double m1);

// Double cone |da|+|db_slope| <= r |db| and |eta blocks| <= delta |db|.
struct ConeParams {
    double r = 0.4;
    double delta = 0.1;
};

bool cone_contains(const Eigen::VectorXd& v, const ConeParams& p,
                   std::size_t m);

struct ConeReport {
    std::size_t samples = 0;
    double contained_fraction = 0;  // images inside the halved cone
    double min_expansion = 0;
    double max_expansion = 0;
};

// Pushes random cone vectors through the matrix and reports containment in
// the (r/2, delta/2) cone plus the extreme norm-expansion ratios.
ConeReport cone_invariance_test(const Jacobian& j, const ConeParams& p,
                                std::size_t samples, std::uint64_t seed);

struct TechnicalLemmaReport {
    std::size_t samples = 0;
    std::size_t outside_count = 0;
    double clause_i_max = 0;   // max |db of input| / (|I'| * |input|)
    double clause_ii_max = 0;  // max |image| / |input|
    bool inconclusive = false;  // no sampled image left the cone
};

// Statistics over sampled vectors whose images escape the cone.  Half the
// samples are drawn near the kernel of the b~ row so escapes actually
// occur on strongly hyperbolic matrices.
TechnicalLemmaReport technical_lemma_check(const Jacobian& j,
                                           const ConeParams& p,
                                           std::size_t samples,
                                           std::uint64_t seed);

}  // namespace gaprenorm
