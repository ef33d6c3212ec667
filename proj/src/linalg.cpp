#include "corrcomplete/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace corrcomplete {

SymMatrix SymMatrix::identity(int dim) {
    SymMatrix m(dim);
    for (int i = 0; i < dim; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::submatrix(const std::vector<int>& indices) const {
    const int k = static_cast<int>(indices.size());
    SymMatrix s(k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j <= i; ++j)
            s.set(i, j, (*this)(indices[i], indices[j]));
    return s;
}

void CholFactor::solve_in_place(Mat& rhs) const {
    const int n = dim_;
    // forward: L y = rhs
    for (int c = 0; c < rhs.cols; ++c) {
        for (int i = 0; i < n; ++i) {
            double s = rhs.at(i, c);
            for (int k = 0; k < i; ++k) s -= l_[static_cast<std::size_t>(i) * n + k] * rhs.at(k, c);
            rhs.at(i, c) = s / l_[static_cast<std::size_t>(i) * n + i];
        }
        // backward: L^T x = y
        for (int i = n - 1; i >= 0; --i) {
            double s = rhs.at(i, c);
            for (int k = i + 1; k < n; ++k) s -= l_[static_cast<std::size_t>(k) * n + i] * rhs.at(k, c);
            rhs.at(i, c) = s / l_[static_cast<std::size_t>(i) * n + i];
        }
    }
}

double CholFactor::log_det() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += std::log(l_[static_cast<std::size_t>(i) * dim_ + i]);
    return 2.0 * s;
}

CholFactor cholesky(const SymMatrix& m, double pivot_tol) {
    const int n = m.dim();
    CholFactor f;
    f.dim_ = n;
    f.l_.assign(static_cast<std::size_t>(n) * n, 0.0);
    auto l = [&f, n](int i, int j) -> double& { return f.l_[static_cast<std::size_t>(i) * n + j]; };

    for (int j = 0; j < n; ++j) {
        double d = m(j, j);
        for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > pivot_tol)) {
            throw NotPositiveDefinite(
                "matrix is not positive definite: pivot " + std::to_string(j) + " is " +
                    std::to_string(d) + " (tolerance " + std::to_string(pivot_tol) + ")",
                j);
        }
        l(j, j) = std::sqrt(d);
        for (int i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return f;
}

Mat solve_spd(const SymMatrix& c, const Mat& rhs, double pivot_tol) {
    if (c.dim() != rhs.rows) throw InvalidInput("solve_spd: dimension mismatch");
    CholFactor f = cholesky(c, pivot_tol);
    Mat x = rhs;
    f.solve_in_place(x);
    return x;
}

SymMatrix schur_complement(const SymMatrix& m, const std::vector<int>& block, double pivot_tol) {
    const int n = m.dim();
    std::vector<char> in_block(static_cast<std::size_t>(n), 0);
    for (int v : block) {
        if (v < 0 || v >= n) throw InvalidInput("schur_complement: index out of range");
        if (in_block[v]) throw InvalidInput("schur_complement: duplicate index in block");
        in_block[v] = 1;
    }
    std::vector<int> cidx, ridx;
    for (int v = 0; v < n; ++v) (in_block[v] ? cidx : ridx).push_back(v);

    const int r = static_cast<int>(ridx.size());
    const int k = static_cast<int>(cidx.size());
    SymMatrix a = m.submatrix(ridx);
    if (k == 0) return a;

    SymMatrix c = m.submatrix(cidx);
    Mat bt(k, r);  // B^T, with B = m[rest, block]
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < r; ++j) bt.at(i, j) = m(cidx[i], ridx[j]);

    Mat y = solve_spd(c, bt, pivot_tol);  // C^{-1} B^T

    // A - B C^{-1} B^T, built on the upper triangle and mirrored so the
    // result stays exactly symmetric.
    SymMatrix s(r);
    for (int i = 0; i < r; ++i) {
        for (int j = i; j < r; ++j) {
            double acc = 0.0;
            for (int t = 0; t < k; ++t) acc += bt.at(t, i) * y.at(t, j);
            s.set(i, j, a(i, j) - acc);
        }
    }
    return s;
}

double log_det(const SymMatrix& m, double pivot_tol) {
    return cholesky(m, pivot_tol).log_det();
}

SymMatrix inverse_spd(const SymMatrix& m, double pivot_tol) {
    const int n = m.dim();
    CholFactor f = cholesky(m, pivot_tol);
    Mat x(n, n);
    for (int i = 0; i < n; ++i) x.at(i, i) = 1.0;
    f.solve_in_place(x);
    SymMatrix inv(n);
    for (int i = 0; i < n; ++i) {
        inv.set(i, i, x.at(i, i));
        for (int j = i + 1; j < n; ++j) inv.set(i, j, 0.5 * (x.at(i, j) + x.at(j, i)));
    }
    return inv;
}

Mat mat_mul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw InvalidInput("mat_mul: dimension mismatch");
    Mat z(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const double v = x.at(i, k);
            if (v == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) z.at(i, j) += v * y.at(k, j);
        }
    return z;
}

}  // namespace corrcomplete
