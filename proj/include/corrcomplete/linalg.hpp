#pragma once

#include <cstddef>
#include <vector>

#include "corrcomplete/errors.hpp"

namespace corrcomplete {

/// Default Cholesky pivot tolerance. A pivot at or below this value fails
/// the factorization; on the unit-diagonal correlation scale this is the
/// working definition of "strictly positive definite".
inline constexpr double kDefaultPivotTol = 1e-12;

/// Dense rectangular matrix, row-major. Plain storage for coupling blocks
/// and right-hand sides; no algebraic invariants of its own.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), 0.0) {}

    double& at(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

/// Dense symmetric matrix. All writes go through set(), which stores both
/// triangles, so symmetry is bit-exact by construction.
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(int dim)
        : dim_(dim), a_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(dim), 0.0) {}

    static SymMatrix identity(int dim);

    int dim() const noexcept { return dim_; }

    double operator()(int i, int j) const {
        return a_[static_cast<std::size_t>(i) * dim_ + j];
    }

    void set(int i, int j, double v) {
        a_[static_cast<std::size_t>(i) * dim_ + j] = v;
        a_[static_cast<std::size_t>(j) * dim_ + i] = v;
    }

    /// Principal submatrix on the given strictly increasing index set.
    SymMatrix submatrix(const std::vector<int>& indices) const;

private:
    int dim_ = 0;
    std::vector<double> a_;
};

/// Lower-triangular Cholesky factor L with positive diagonal, L L^T = m.
class CholFactor {
public:
    int dim() const noexcept { return dim_; }

    double at(int i, int j) const {
        return j <= i ? l_[static_cast<std::size_t>(i) * dim_ + j] : 0.0;
    }

    /// Solve (L L^T) x = rhs for every column of rhs, in place.
    void solve_in_place(Mat& rhs) const;

    /// log det of the factored matrix: 2 * sum_i log L_ii.
    double log_det() const;

private:
    friend CholFactor cholesky(const SymMatrix&, double);
    int dim_ = 0;
    std::vector<double> l_;
};

/// Factor a symmetric matrix; throws NotPositiveDefinite with the failing
/// pivot index if any pivot is <= pivot_tol.
CholFactor cholesky(const SymMatrix& m, double pivot_tol = kDefaultPivotTol);

/// Solve c X = rhs for positive definite c.
Mat solve_spd(const SymMatrix& c, const Mat& rhs, double pivot_tol = kDefaultPivotTol);

/// Schur complement m/C = A - B C^{-1} B^T, where C is the principal block
/// on `block` and A the principal block on the remaining indices (ascending).
SymMatrix schur_complement(const SymMatrix& m, const std::vector<int>& block,
                           double pivot_tol = kDefaultPivotTol);

/// log det via Cholesky; throws NotPositiveDefinite for non-PD input.
double log_det(const SymMatrix& m, double pivot_tol = kDefaultPivotTol);

/// Inverse of a positive definite matrix, symmetrized exactly.
SymMatrix inverse_spd(const SymMatrix& m, double pivot_tol = kDefaultPivotTol);

Mat mat_mul(const Mat& x, const Mat& y);

}  // namespace corrcomplete
