#pragma once

#include <cstdint>
#include <vector>

#include "corrcomplete/pattern.hpp"

namespace corrcomplete {

/// Coefficients of the two-economy model: domestic rate E with volatility
/// factor nu_E, foreign rate A with nu_A, exchange rate X with nu_X. The
/// six specified correlations are (E,nu_E), (A,nu_A), (E,A), (E,X), (A,X),
/// (X,nu_X); the other nine are left to the completion.
struct XccyParams {
    double e_nuE;
    double a_nuA;
    double e_a;
    double e_x;
    double a_x;
    double x_nuX;
};

/// Labels: E, nu_E, A, nu_A, X, nu_X. Throws InvalidInput when some
/// coefficient leaves (-1, 1) or the {E, A, X} block is not positive
/// definite.
PartialMatrix xccy_pattern(const XccyParams& p);

/// The completion of xccy_pattern written out directly, one product per
/// entry: correlations propagate along the clique-tree paths, e.g.
/// (nu_E, nu_A) = (E, nu_E)(A, nu_A)(E, A). Used to cross-check the
/// general engine against hand-derived values.
DenseCorrMatrix xccy_closed_form(const XccyParams& p);

/// Per-foreign-currency coefficients of the many-economy model. Mirrors
/// XccyParams against the shared domestic E: for currency K with exchange
/// rate X = X_E_K, the entries are (K,nu_K), (E,K), (E,X), (K,X), (X,nu_X).
struct NCurrencyLeg {
    double k_nuK;
    double e_k;
    double e_x;
    double k_x;
    double x_nuX;
};

struct NCurrencyParams {
    Label domestic = "E";
    double e_nuE = 0.0;
    std::vector<NCurrencyLeg> legs;
};

/// Foreign currency names A, B, C, D, F, ... (the domestic name E is
/// skipped); two-letter names after Z.
std::vector<Label> currency_names(int count);

/// Labels: E, nu_E, then per currency K: K, nu_K, X_E_K, nu_X_E_K. Each
/// currency contributes the same six-coefficient pattern as xccy_pattern,
/// sharing E and nu_E. Throws InvalidInput when a coefficient leaves
/// (-1, 1) or some {E, K, X_E_K} block is not positive definite.
PartialMatrix n_currency_pattern(const NCurrencyParams& p);

/// A random completion problem together with a matrix that solves it:
/// `source` is positive definite and agrees with `pattern` on every
/// specified entry, so a completion always exists.
struct RandomInstance {
    PartialMatrix pattern;
    DenseCorrMatrix source;
};

/// Reproducible random instance on labels v0..v{n-1}. The pattern graph is
/// chordalized by elimination fill: Bernoulli(edge_prob) edges plus the
/// fill of a random elimination order. The source matrix is the Gram
/// matrix of n random unit vectors in dimension 4n (kept well away from
/// singular so verification tolerances have headroom), masked to the
/// pattern. Identical (n, seed, edge_prob) give identical instances.
RandomInstance random_chordal_instance(int n, std::uint64_t seed, double edge_prob = 0.3);

}  // namespace corrcomplete
