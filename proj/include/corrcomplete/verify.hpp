#pragma once

#include <optional>

#include "corrcomplete/completion.hpp"
#include "corrcomplete/graph.hpp"
#include "corrcomplete/pattern.hpp"

namespace corrcomplete {

/// Outcome of checking a dense matrix against the optimality
/// characterizations. Fields are unset when they cannot be computed: all
/// of them when the matrix is not PD, the residuals when no pattern was
/// given (or, for the merge residual, when the pattern is not chordal),
/// oracle_gap unless the oracle was run.
struct VerificationResult {
    bool pd = false;
    std::optional<double> max_inverse_residual;
    std::optional<double> fischer_residual;
    std::optional<double> oracle_gap;
    std::optional<double> entropy;
};

/// Largest |(H^{-1})_{ij}| over pairs that are NOT edges of the pattern.
/// At the maximum-determinant completion these are all zero.
double check_inverse_zeros(const DenseCorrMatrix& h, const PatternGraph& pattern,
                           double pivot_tol = kDefaultPivotTol);

/// Determinant factorization residual for one merge partition
/// (X = new clique, C = separator, Y = separator plus absorbed):
/// |log det H - (log det C + log det H_X/C + log det H_Y/C)| on the
/// step's principal block. Zero exactly when the coupling block is the
/// max-determinant choice.
double check_fischer(const DenseCorrMatrix& h, const MergeStep& step,
                     double pivot_tol = kDefaultPivotTol);

/// Frobenius norm of the cross block of the Schur complement H/C on the
/// step's principal block, C being the separator. Zero iff the new and
/// absorbed variables are conditionally independent given the separator.
double check_conditional_independence(const DenseCorrMatrix& h, const MergeStep& step,
                                      double pivot_tol = kDefaultPivotTol);

/// Differential entropy of the centered normal with covariance h:
/// (1/2) log det h + (n/2)(1 + log 2pi).
double entropy(const DenseCorrMatrix& h, double pivot_tol = kDefaultPivotTol);

double entropy_from_log_det(double log_det, int n);

struct OracleOptions {
    double tol = 1e-12;  // entrywise change per sweep at convergence
    int max_sweeps = 20000;
    double pivot_tol = kDefaultPivotTol;
    int max_free = 64;
};

struct OracleResult {
    DenseCorrMatrix matrix;
    double log_det = 0.0;
    int sweeps = 0;
    bool converged = false;
};

/// Numeric maximizer of the determinant over the unspecified entries,
/// independent of the clique-tree construction. Coordinate ascent: the
/// determinant is a downward parabola in each single entry, so every
/// update jumps to that parabola's vertex (the point where the matching
/// inverse entry vanishes) and provably stays positive definite. Starts
/// from the zeros fill; if that is not PD, the specified entries are
/// scaled toward zero until feasible and the scale is then continued back
/// to 1, re-optimizing along the way.
///
/// Throws InvalidInput for more than max_free unspecified entries and
/// NoFeasiblePoint when the continuation stalls (no strictly PD
/// completion).
OracleResult oracle_max_det(const PartialMatrix& m, const OracleOptions& opts = {});

struct VerificationOptions {
    bool with_oracle = false;
    double pivot_tol = kDefaultPivotTol;
    OracleOptions oracle;
};

/// Full check of a dense matrix, optionally against the pattern it is
/// claimed to complete. The merge partitions are reconstructed from the
/// pattern's clique tree; residuals are evaluated on h itself.
VerificationResult verify_completion(const DenseCorrMatrix& h,
                                     const std::optional<PartialMatrix>& pattern,
                                     const VerificationOptions& opts = {});

}  // namespace corrcomplete
