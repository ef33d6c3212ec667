#include <cmath>
#include <vector>

#include "corrcomplete/errors.hpp"
#include "corrcomplete/linalg.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corrcomplete;
using test_support::Rng;

namespace {

SymMatrix sym2(double off) {
    SymMatrix m(2);
    m.set(0, 0, 1.0);
    m.set(1, 1, 1.0);
    m.set(0, 1, off);
    return m;
}

// Completed three-variable chain: (0,1) = 0.6, (1,2) = 0.5, (0,2) = 0.3
// where 0.3 is exactly the double product 0.6 * 0.5.
SymMatrix chain3() {
    SymMatrix m(3);
    for (int i = 0; i < 3; ++i) m.set(i, i, 1.0);
    m.set(0, 1, 0.6);
    m.set(1, 2, 0.5);
    m.set(0, 2, 0.3);
    return m;
}

double frobenius_diff(const SymMatrix& a, const SymMatrix& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) {
            const double d = a(i, j) - b(i, j);
            s += d * d;
        }
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("cholesky of the identity is the identity") {
    CholFactor f = cholesky(SymMatrix::identity(4));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(f.at(i, j) == (i == j ? 1.0 : 0.0));
    CHECK(f.log_det() == 0.0);
}

TEST_CASE("cholesky of a 2x2 correlation is exact for nice values") {
    // 1 - 0.6^2 rounds to the double 0.64, whose square root rounds to 0.8.
    CholFactor f = cholesky(sym2(0.6));
    CHECK(f.at(0, 0) == 1.0);
    CHECK(f.at(1, 0) == 0.6);
    CHECK(f.at(1, 1) == 0.8);
    CHECK(f.at(0, 1) == 0.0);
}

TEST_CASE("cholesky rejects an off-diagonal beyond one and names the pivot") {
    try {
        cholesky(sym2(1.0001));
        FAIL("expected NotPositiveDefinite");
    } catch (const NotPositiveDefinite& e) {
        CHECK(e.pivot_index() == 1);
    }
}

TEST_CASE("cholesky pivot tolerance is a strict lower bound") {
    // Second pivot is near 8e-13: below the default tolerance, above a
    // loosened one, with margin far beyond rounding on both sides.
    SymMatrix m = sym2(std::sqrt(1.0 - 8e-13));
    CHECK_THROWS_AS(cholesky(m), NotPositiveDefinite);
    CHECK_NOTHROW(cholesky(m, 1e-13));
}

TEST_CASE("cholesky of an empty matrix") {
    CholFactor f = cholesky(SymMatrix(0));
    CHECK(f.dim() == 0);
    CHECK(f.log_det() == 0.0);
}

TEST_CASE("solve_spd on a 2x2 system") {
    // [[1, 0.5], [0.5, 1]] x = [1, 0]  =>  x = [4/3, -2/3].
    Mat rhs(2, 1);
    rhs.at(0, 0) = 1.0;
    rhs.at(1, 0) = 0.0;
    Mat x = solve_spd(sym2(0.5), rhs);
    CHECK(std::abs(x.at(0, 0) - 4.0 / 3.0) <= 1e-15);
    CHECK(std::abs(x.at(1, 0) + 2.0 / 3.0) <= 1e-15);
}

TEST_CASE("solve_spd on a scalar system is exact") {
    SymMatrix c(1);
    c.set(0, 0, 0.25);
    Mat rhs(1, 2);
    rhs.at(0, 0) = 1.0;
    rhs.at(0, 1) = -0.5;
    Mat x = solve_spd(c, rhs);
    CHECK(x.at(0, 0) == 4.0);
    CHECK(x.at(0, 1) == -2.0);
}

TEST_CASE("solve_spd rejects mismatched dimensions") {
    Mat rhs(3, 1);
    CHECK_THROWS_AS(solve_spd(sym2(0.0), rhs), InvalidInput);
}

TEST_CASE("schur complement against an identity block leaves the rest intact") {
    SymMatrix m = SymMatrix::identity(4);
    m.set(0, 1, 0.3);
    SymMatrix s = schur_complement(m, {2, 3});
    CHECK(s.dim() == 2);
    CHECK(s(0, 0) == 1.0);
    CHECK(s(0, 1) == 0.3);
    CHECK(s(1, 1) == 1.0);
}

TEST_CASE("schur complement of a 2x2 collapses to the pivot complement") {
    SymMatrix s = schur_complement(sym2(0.6), {0});
    CHECK(s.dim() == 1);
    CHECK(s(0, 0) == 0.64);
}

TEST_CASE("schur complement on the chain midpoint decouples the ends exactly") {
    SymMatrix s = schur_complement(chain3(), {1});
    CHECK(s.dim() == 2);
    CHECK(s(0, 1) == 0.0);
}

TEST_CASE("schur complement with an empty block is a copy") {
    SymMatrix s = schur_complement(chain3(), {});
    CHECK(frobenius_diff(s, chain3()) == 0.0);
}

TEST_CASE("schur complement rejects bad blocks") {
    CHECK_THROWS_AS(schur_complement(chain3(), {3}), InvalidInput);
    CHECK_THROWS_AS(schur_complement(chain3(), {0, 0}), InvalidInput);
}

TEST_CASE("log_det of small fixtures") {
    CHECK(log_det(SymMatrix::identity(5)) == 0.0);
    CHECK(std::abs(log_det(sym2(0.6)) - std::log(0.64)) <= 1e-15);
    // Chain determinant by cofactor expansion: 0.48.
    CHECK(std::abs(log_det(chain3()) - std::log(test_support::det3(chain3()))) <= 1e-12);
    CHECK(std::abs(test_support::det3(chain3()) - 0.48) <= 1e-16);
}

TEST_CASE("factor and solve identities hold on random correlation matrices") {
    Rng rng(20260816);
    for (int n : {1, 2, 3, 5, 8, 12}) {
        for (int rep = 0; rep < 10; ++rep) {
            SymMatrix m = test_support::random_correlation(n, rng);

            CholFactor f = cholesky(m);
            SymMatrix r(n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j <= i; ++j) {
                    double s = 0.0;
                    for (int k = 0; k <= j; ++k) s += f.at(i, k) * f.at(j, k);
                    r.set(i, j, s);
                }
            CHECK(frobenius_diff(r, m) <= 1e-12 * n);

            // det m = det C * det (m/C) for any pivot block.
            std::vector<int> block;
            for (int v = 0; v < n; ++v)
                if (rng.uniform() < 0.5) block.push_back(v);
            if (static_cast<int>(block.size()) == n) block.pop_back();
            SymMatrix s = schur_complement(m, block);
            CHECK_NOTHROW(cholesky(s));
            const double lhs = f.log_det();
            const double rhs = log_det(m.submatrix(block)) + log_det(s);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
        }
    }
}

TEST_CASE("inverse_spd inverts and is exactly symmetric") {
    Rng rng(7);
    SymMatrix m = test_support::random_correlation(6, rng);
    SymMatrix inv = inverse_spd(m);
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            CHECK(inv(i, j) == inv(j, i));
            double s = 0.0;
            for (int k = 0; k < 6; ++k) s += m(i, k) * inv(k, j);
            CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-11);
        }
    }
}

TEST_CASE("mat_mul multiplies and rejects mismatched shapes") {
    Mat x(2, 3), y(3, 2);
    int v = 1;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) x.at(i, j) = v++;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) y.at(i, j) = v++;
    Mat z = mat_mul(x, y);
    // [[1,2,3],[4,5,6]] * [[7,8],[9,10],[11,12]] = [[58,64],[139,154]].
    CHECK(z.at(0, 0) == 58.0);
    CHECK(z.at(0, 1) == 64.0);
    CHECK(z.at(1, 0) == 139.0);
    CHECK(z.at(1, 1) == 154.0);
    CHECK_THROWS_AS(mat_mul(x, x), InvalidInput);
}

TEST_CASE("submatrix picks the principal block") {
    SymMatrix m = chain3();
    SymMatrix s = m.submatrix({0, 2});
    CHECK(s.dim() == 2);
    CHECK(s(0, 0) == 1.0);
    CHECK(s(0, 1) == 0.3);
    CHECK(s(1, 1) == 1.0);
}
